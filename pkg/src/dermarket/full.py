"""Equilibria when prosumers may both buy and sell.

With every prosumer interior, aggregate demand is linear in price, so the
market-clearing price is an affine function of total generator supply and the
symmetric Cournot equilibrium has a closed form.
"""

from __future__ import annotations

import math

from .errors import NonpositiveSupply, PriceOutOfRange
from .model import EquilibriumOutcome, Model, Scenario, assert_assumption_range
from .welfare import welfare_full_strategic, welfare_full_truthful


def _allocations(s: Scenario, price: float) -> tuple[float, ...]:
    return tuple(-p.capacity + (price - p.b) / (2.0 * p.a) for p in s.prosumers)


def truthful_total_supply(s: Scenario) -> float:
    """``-C + sum (alpha - b_i) / (2 a_i)``: net demand at price alpha."""
    alpha = s.alpha
    return -s.aggregates.total_capacity + math.fsum(
        (alpha - p.b) / (2.0 * p.a) for p in s.prosumers
    )


def inverse_demand_full(s: Scenario, total_supply: float, *, check_range: bool = True) -> float:
    """Price at which full-participation net demand equals ``total_supply``."""
    agg = s.aggregates
    price = (total_supply + agg.total_capacity + agg.weighted_slope_sum) / agg.half_curvature_sum
    if check_range and not (0.0 < price < s.min_slope):
        raise PriceOutOfRange(
            f"supply {total_supply!r} clears at {price!r}, outside (0, {s.min_slope!r})"
        )
    return price


def solve_full_truthful(s: Scenario) -> EquilibriumOutcome:
    y = truthful_total_supply(s)
    z = _allocations(s, s.alpha)
    eq = EquilibriumOutcome(
        model=Model.FULL_TRUTHFUL,
        price=s.alpha,
        allocations=z,
        per_generator_supply=y / s.count,
        total_supply=y,
        welfare=welfare_full_truthful(s),
    )
    assert_assumption_range(s, eq)
    return eq


def strategic_supply_full(s: Scenario) -> float:
    """Per-generator output in the symmetric Cournot equilibrium."""
    yj = truthful_total_supply(s) / (s.count + 1)
    if not yj > 0.0:
        raise NonpositiveSupply(f"strategic per-generator supply {yj!r} is not positive")
    return yj


def optimal_bid_slope_full(s: Scenario) -> float:
    """Slope of the linear cost bid that gets each generator dispatched at its
    Cournot quantity."""
    agg, N = s.aggregates, s.count
    h = agg.half_curvature_sum
    return (N * s.alpha * h + agg.total_capacity + agg.weighted_slope_sum) / ((N + 1) * h)


def solve_full_strategic(s: Scenario) -> EquilibriumOutcome:
    agg, N = s.aggregates, s.count
    price = N * s.alpha / (N + 1) + (agg.total_capacity + agg.weighted_slope_sum) / (
        (N + 1) * agg.half_curvature_sum
    )
    yj = strategic_supply_full(s)
    eq = EquilibriumOutcome(
        model=Model.FULL_STRATEGIC,
        price=price,
        allocations=_allocations(s, price),
        per_generator_supply=yj,
        total_supply=N * yj,
        welfare=welfare_full_strategic(s),
        bid_slope=optimal_bid_slope_full(s),
    )
    assert_assumption_range(s, eq)
    return eq
