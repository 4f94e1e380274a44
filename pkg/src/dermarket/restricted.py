"""Equilibria when prosumers can only buy (``z_i >= 0``).

Prosumers join the market one at a time as total supply grows. With the
prosumers sorted by decreasing ``2*a*C + b``, the buying set at supply ``y``
is always a prefix, and prosumer ``i`` joins once ``y`` exceeds its
activation threshold. The inverse demand is piecewise linear and continuous
across thresholds; the strategic equilibrium is found by checking every
prefix for self-consistency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate

from .errors import (
    AmbiguousActiveSet,
    NoConsistentActiveSet,
    NonpositiveSupply,
    PriceOutOfRange,
)
from .model import (
    EquilibriumOutcome,
    Model,
    Scenario,
    assert_assumption_range,
    utility,
)
from .welfare import welfare_restricted_strategic, welfare_restricted_truthful

ACTIVE_REL_EPS = 1e-9


@dataclass(frozen=True)
class ThresholdTable:
    """Activation thresholds plus the prefix sums every price evaluation needs.

    ``curvature_prefix[k]`` is ``sum_{i<k} 1/(2 a_i)`` and ``offset_prefix[k]``
    is ``sum_{i<k} (C_i + b_i/(2 a_i))``, both over the sorted prosumers.
    """

    thresholds: tuple[float, ...]
    curvature_prefix: tuple[float, ...]
    offset_prefix: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.thresholds)


@dataclass(frozen=True)
class ActiveSet:
    size: int


def compute_thresholds(s: Scenario) -> ThresholdTable:
    ps = s.prosumers
    curv = (0.0, *accumulate(1.0 / (2.0 * p.a) for p in ps))
    offs = (0.0, *accumulate(p.capacity + p.b / (2.0 * p.a) for p in ps))
    ys = tuple(p.indifference_price * curv[i] - offs[i] for i, p in enumerate(ps))
    return ThresholdTable(ys, curv, offs)


def active_set_at(t: ThresholdTable, total_supply: float) -> ActiveSet:
    """Prefix of prosumers buying a positive amount at ``total_supply``.

    A supply sitting exactly on a threshold (within 1e-9 relative) leaves
    that prosumer out; the price is the same either way.
    """
    if not total_supply > 0.0:
        raise NonpositiveSupply(f"total supply {total_supply!r} is not positive")
    eps = ACTIVE_REL_EPS * max(1.0, abs(total_supply))
    size = sum(1 for y in t.thresholds if total_supply > y + eps)
    # the first threshold is 0, so the first prosumer is active for any y > 0
    return ActiveSet(max(size, 1))


def prefix_price(t: ThresholdTable, k: int, total_supply: float) -> float:
    return (total_supply + t.offset_prefix[k]) / t.curvature_prefix[k]


def inverse_demand_restricted(
    s: Scenario, t: ThresholdTable, total_supply: float, *, check_range: bool = True
) -> float:
    """Market-clearing price for ``total_supply`` without sell-back."""
    k = active_set_at(t, total_supply).size
    price = prefix_price(t, k, total_supply)
    if check_range:
        cap = min(p.b for p in s.prosumers[:k])
        if not (0.0 < price < cap):
            raise PriceOutOfRange(
                f"supply {total_supply!r} clears at {price!r}, outside (0, {cap!r})"
            )
    return price


def aggregate_utility(s: Scenario, t: ThresholdTable, total_supply: float) -> float:
    """Maximal total consumption utility when ``total_supply`` is shared out
    among prosumers who cannot sell."""
    k = active_set_at(t, total_supply).size
    price = prefix_price(t, k, total_supply)
    values = []
    for i, p in enumerate(s.prosumers):
        if i < k:
            values.append(utility(p, (price - p.b) / (2.0 * p.a)))
        else:
            values.append(utility(p, p.capacity))
    return math.fsum(values)


def _clamped_allocations(s: Scenario, price: float) -> tuple[float, ...]:
    return tuple(max(0.0, -p.capacity + (price - p.b) / (2.0 * p.a)) for p in s.prosumers)


def solve_restricted_truthful(s: Scenario) -> EquilibriumOutcome:
    z = _clamped_allocations(s, s.alpha)
    y = math.fsum(z)
    eq = EquilibriumOutcome(
        model=Model.RESTRICTED_TRUTHFUL,
        price=s.alpha,
        allocations=z,
        per_generator_supply=y / s.count,
        total_supply=y,
        welfare=welfare_restricted_truthful(s),
        active_set_size=sum(1 for p in s.prosumers if p.indifference_price > s.alpha),
    )
    assert_assumption_range(s, eq)
    return eq


def candidate_supply(s: Scenario, k: int) -> float:
    """Total Cournot supply if exactly the first ``k`` prosumers buy."""
    N, alpha = s.count, s.alpha
    per_gen = math.fsum(
        (alpha - p.b) / (2.0 * p.a) - p.capacity for p in s.prosumers[:k]
    ) / (N + 1)
    return N * per_gen


def consistent_prefixes(s: Scenario, t: ThresholdTable) -> list[int]:
    hits = []
    for k in range(1, s.n + 1):
        y = candidate_supply(s, k)
        if y > 0.0 and active_set_at(t, y).size == k:
            hits.append(k)
    return hits


def optimal_bid_slope_restricted(s: Scenario, t: ThresholdTable, k: int) -> float:
    N = s.count
    h = t.curvature_prefix[k]
    return (N * s.alpha * h + t.offset_prefix[k]) / ((N + 1) * h)


def solve_restricted_strategic(s: Scenario) -> EquilibriumOutcome:
    """Symmetric Cournot equilibrium against the piecewise inverse demand.

    Raises:
        NoConsistentActiveSet: no prefix reproduces itself.
        AmbiguousActiveSet: more than one prefix does.
        AssumptionRangeViolated: the equilibrium leaves the admissible range.
    """
    t = compute_thresholds(s)
    hits = consistent_prefixes(s, t)
    if not hits:
        raise NoConsistentActiveSet("no active-set prefix is self-consistent")
    if len(hits) > 1:
        raise AmbiguousActiveSet(hits)
    k = hits[0]
    N = s.count
    h, off = t.curvature_prefix[k], t.offset_prefix[k]
    price = N * s.alpha / (N + 1) + off / ((N + 1) * h)
    y = candidate_supply(s, k)
    eq = EquilibriumOutcome(
        model=Model.RESTRICTED_STRATEGIC,
        price=price,
        allocations=_clamped_allocations(s, price),
        per_generator_supply=y / N,
        total_supply=y,
        welfare=welfare_restricted_strategic(s, k),
        bid_slope=optimal_bid_slope_restricted(s, t, k),
        active_set_size=k,
    )
    assert_assumption_range(s, eq)
    return eq
