"""Domain types for a single-node market of quadratic-utility prosumers
and identical linear-cost generators.

Prosumer ``i`` consumes ``capacity_i + z_i`` and enjoys utility
``a_i * x**2 + b_i * x``; generators each produce at marginal cost ``alpha``.
Every equilibrium formula elsewhere in the package works on the sorted
prosumer list and the three aggregate sums cached on :class:`Scenario`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    AssumptionRangeViolated,
    CurvatureNotNegative,
    EmptyScenario,
    InvalidFleet,
    NegativeCapacity,
    NoActiveProsumer,
    NonpositiveSlope,
    PriceOutOfRange,
)

# absolute slack on "strictly positive" comparisons
EPS = 1e-12


class Participation(enum.Enum):
    FULL = "full"
    RESTRICTED = "restricted"


class Model(enum.Enum):
    FULL_TRUTHFUL = "full-truthful"
    FULL_STRATEGIC = "full-strategic"
    RESTRICTED_TRUTHFUL = "restricted-truthful"
    RESTRICTED_STRATEGIC = "restricted-strategic"

    @property
    def participation(self) -> Participation:
        if self in (Model.FULL_TRUTHFUL, Model.FULL_STRATEGIC):
            return Participation.FULL
        return Participation.RESTRICTED

    @property
    def strategic(self) -> bool:
        return self in (Model.FULL_STRATEGIC, Model.RESTRICTED_STRATEGIC)


@dataclass(frozen=True)
class Prosumer:
    a: float
    b: float
    capacity: float
    original_index: int = 0

    @property
    def indifference_price(self) -> float:
        """Marginal utility at zero net purchase, ``2*a*C + b``."""
        return 2.0 * self.a * self.capacity + self.b


@dataclass(frozen=True)
class GeneratorFleet:
    count: int
    marginal_cost: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "marginal_cost", float(self.marginal_cost))
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise InvalidFleet(f"generators.count = {self.count!r} must be an integer >= 1")
        if not (math.isfinite(self.marginal_cost) and self.marginal_cost > 0):
            raise InvalidFleet(
                f"generators.marginal_cost = {self.marginal_cost!r} must be > 0"
            )


@dataclass(frozen=True)
class AggregateSums:
    total_capacity: float
    half_curvature_sum: float
    weighted_slope_sum: float

    @classmethod
    def of(cls, prosumers: Iterable[Prosumer]) -> "AggregateSums":
        ps = list(prosumers)
        return cls(
            total_capacity=math.fsum(p.capacity for p in ps),
            half_curvature_sum=math.fsum(1.0 / (2.0 * p.a) for p in ps),
            weighted_slope_sum=math.fsum(p.b / (2.0 * p.a) for p in ps),
        )


@dataclass(frozen=True)
class Scenario:
    prosumers: tuple[Prosumer, ...]
    fleet: GeneratorFleet
    aggregates: AggregateSums = field(compare=False)

    @property
    def n(self) -> int:
        return len(self.prosumers)

    @property
    def alpha(self) -> float:
        return self.fleet.marginal_cost

    @property
    def count(self) -> int:
        return self.fleet.count

    @property
    def min_slope(self) -> float:
        return min(p.b for p in self.prosumers)

    def with_count(self, count: int) -> "Scenario":
        """Same prosumers and marginal cost, different number of generators."""
        return replace(self, fleet=GeneratorFleet(count, self.fleet.marginal_cost))


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Equilibrium of one of the four market models.

    ``allocations`` follow the scenario's sorted prosumer order.
    ``bid_slope`` is set only for strategic models and ``active_set_size``
    only for restricted ones.
    """

    model: Model
    price: float
    allocations: tuple[float, ...]
    per_generator_supply: float
    total_supply: float
    welfare: float
    bid_slope: Optional[float] = None
    active_set_size: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "price": self.price,
            "allocations": list(self.allocations),
            "per_generator_supply": self.per_generator_supply,
            "total_supply": self.total_supply,
            "welfare": self.welfare,
            "bid_slope": self.bid_slope,
            "active_set_size": self.active_set_size,
        }


RawProsumer = Union[Prosumer, Mapping[str, float], Sequence[float]]


def _coerce(raw: RawProsumer, index: int) -> Prosumer:
    if isinstance(raw, Prosumer):
        return replace(raw, original_index=index)
    if isinstance(raw, Mapping):
        return Prosumer(float(raw["a"]), float(raw["b"]), float(raw["capacity"]), index)
    a, b, c = raw
    return Prosumer(float(a), float(b), float(c), index)


def validate_and_build(prosumers: Sequence[RawProsumer], fleet: GeneratorFleet) -> Scenario:
    """Validate raw prosumer records and return a sorted :class:`Scenario`.

    Records may be :class:`Prosumer` instances, mappings with keys
    ``a``, ``b``, ``capacity``, or ``(a, b, capacity)`` tuples. Prosumers are
    sorted by decreasing ``2*a*C + b``, ties kept in input order.

    Raises:
        EmptyScenario, CurvatureNotNegative, NonpositiveSlope,
        NegativeCapacity, NoActiveProsumer.
    """
    if not prosumers:
        raise EmptyScenario()
    ps = [_coerce(raw, i) for i, raw in enumerate(prosumers)]
    for p in ps:
        if not p.a < 0:
            raise CurvatureNotNegative(p.original_index, p.a)
        if not p.b > 0:
            raise NonpositiveSlope(p.original_index, p.b)
        if not p.capacity >= 0:
            raise NegativeCapacity(p.original_index, p.capacity)
    if not any(p.indifference_price > fleet.marginal_cost for p in ps):
        raise NoActiveProsumer(fleet.marginal_cost)
    ordered = sorted(ps, key=lambda p: (-p.indifference_price, p.original_index))
    return Scenario(tuple(ordered), fleet, AggregateSums.of(ordered))


def utility(p: Prosumer, consumption: float) -> float:
    return p.a * consumption * consumption + p.b * consumption


def prosumer_best_response(p: Prosumer, price: float, mode: Participation) -> float:
    """Net purchase maximizing ``u(C + z) - price * z``.

    Full participation solves the first-order condition ``2a(C+z) + b = price``;
    restricted participation clamps the result at zero.
    """
    if not (0.0 < price < p.b):
        raise PriceOutOfRange(f"price {price!r} outside (0, {p.b!r})")
    z = (price - p.b) / (2.0 * p.a) - p.capacity
    if mode is Participation.RESTRICTED:
        return max(z, 0.0)
    return z


def assert_assumption_range(s: Scenario, eq: EquilibriumOutcome) -> None:
    """Check the equilibrium lies in the regime the closed forms assume.

    Price must sit in ``(0, min b_i)``, total supply must be positive, and
    allocations must respect the participation constraint.
    """
    if not (EPS < eq.price < s.min_slope - EPS):
        raise AssumptionRangeViolated(
            f"{eq.model.value}: price {eq.price!r} outside (0, {s.min_slope!r})"
        )
    if not eq.total_supply > EPS:
        raise AssumptionRangeViolated(
            f"{eq.model.value}: total supply {eq.total_supply!r} is not positive"
        )
    for p, z in zip(s.prosumers, eq.allocations):
        if eq.model.participation is Participation.FULL:
            ok = z + p.capacity > EPS
        else:
            ok = z >= -EPS
        if not ok:
            raise AssumptionRangeViolated(
                f"{eq.model.value}: prosumer {p.original_index} allocation {z!r} "
                "violates its participation bound"
            )
