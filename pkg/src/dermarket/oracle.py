"""Brute-force verifiers for the closed-form equilibria.

None of these routines use the equilibrium formulas. Prices come from
bisection on per-prosumer demand. Cournot quantities come from iterating
numerical best responses against the inverse demand curve. KKT residuals
evaluate optimality conditions on a finished outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import BracketFailure, ModelMismatch, NonConvergence
from .full import inverse_demand_full
from .model import (
    EquilibriumOutcome,
    Participation,
    Scenario,
    prosumer_best_response,
)
from .restricted import (
    active_set_at,
    aggregate_utility,
    compute_thresholds,
    inverse_demand_restricted,
    prefix_price,
)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
BISECTION_MAX_ITER = 200
COURNOT_MAX_ITER = 10_000
GRID_POINTS = 33


@dataclass(frozen=True)
class OracleResult:
    price: float
    allocations: tuple[float, ...]
    total_supply: float
    iterations: int
    residual: float


def bisect_decreasing(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, int, float]:
    """Root of a function positive at ``lo`` and negative at ``hi``.

    Returns ``(root, iterations, final bracket width)``.
    """
    for it in range(1, BISECTION_MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            return 0.5 * (lo + hi), it, hi - lo
    raise NonConvergence(f"bisection did not reach width {tol!r} in {BISECTION_MAX_ITER} steps")


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float, float]:
    """Golden-section search for a maximum of ``f`` on ``[lo, hi]``.

    Returns the final bracket and its midpoint.
    """
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return lo, hi, 0.5 * (lo + hi)


def _demand(s: Scenario, price: float, mode: Participation) -> tuple[float, ...]:
    return tuple(prosumer_best_response(p, price, mode) for p in s.prosumers)


def _price_bracket(s: Scenario) -> tuple[float, float]:
    eps = 1e-9 * s.min_slope
    return eps, s.min_slope - eps


def dispatch_by_bisection(
    s: Scenario, mode: Participation, supply_price: float, tol: float = 1e-12
) -> OracleResult:
    """Clear prosumer demand against a perfectly elastic offer at ``supply_price``.

    The offer supplies nothing below ``supply_price`` and any amount above it,
    so excess demand is ``D(price)`` below the offer price and negative above.
    Bisection on that sign locates the clearing price; allocations are each
    prosumer's own best response there.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = _price_bracket(s)
    if not lo < supply_price < hi:
        raise BracketFailure(
            f"offer price {supply_price!r} outside the admissible bracket ({lo!r}, {hi!r})"
        )

    def excess(price: float) -> float:
        if price < supply_price:
            return math.fsum(_demand(s, price, mode))
        return -math.inf if price > supply_price else 0.0

    if not excess(lo) > 0.0:
        raise BracketFailure("no positive demand at the bottom of the price bracket")
    price, iterations, width = bisect_decreasing(excess, lo, hi, tol)
    z = _demand(s, price, mode)
    y = math.fsum(z)
    if not y > 0.0:
        raise BracketFailure(f"demand {y!r} at the clearing price does not meet a positive supply")
    return OracleResult(price, z, y, iterations, width)


def clearing_price_by_bisection(
    s: Scenario, mode: Participation, total_supply: float, tol: float = 1e-12
) -> OracleResult:
    """Price at which aggregate prosumer demand equals a fixed ``total_supply``."""
    lo, hi = _price_bracket(s)

    def excess(price: float) -> float:
        return math.fsum(_demand(s, price, mode)) - total_supply

    if not (excess(lo) > 0.0 > excess(hi)):
        raise BracketFailure(f"demand does not cross supply {total_supply!r} in ({lo!r}, {hi!r})")
    price, iterations, width = bisect_decreasing(excess, lo, hi, tol)
    z = _demand(s, price, mode)
    return OracleResult(price, z, math.fsum(z), iterations, width)


def _price_function(s: Scenario, mode: Participation) -> Callable[[float], float]:
    """Unchecked inverse demand, defined for every real supply."""
    if mode is Participation.FULL:
        return lambda y: inverse_demand_full(s, y, check_range=False)
    t = compute_thresholds(s)

    def price(y: float) -> float:
        k = active_set_at(t, y).size if y > 0.0 else 1
        return prefix_price(t, k, y)

    return price


def _best_response(
    price: Callable[[float], float], alpha: float, others: float, hi: float
) -> float:
    """Profit-maximizing output against ``others``' combined supply.

    A coarse grid picks the bracket holding the global maximum (profit need
    not be unimodal when demand has kinks), golden-section narrows it, and
    bisection on a central-difference marginal profit removes the flat-top
    imprecision of comparing function values.
    """

    def profit(q: float) -> float:
        return (price(q + others) - alpha) * q

    xs = [hi * i / (GRID_POINTS - 1) for i in range(GRID_POINTS)]
    best = max(range(GRID_POINTS), key=lambda i: profit(xs[i]))
    lo, up = xs[max(best - 1, 0)], xs[min(best + 1, GRID_POINTS - 1)]
    scale = max(1.0, hi)
    _, _, q = golden_section_max(profit, lo, up, 1e-10 * scale)

    h = 1e-4 * scale
    w = 1e-3 * scale

    def marginal(x: float) -> float:
        return (profit(x + h) - profit(x - h)) / (2.0 * h)

    left, right = max(q - w, lo), min(q + w, up)
    if left < right and marginal(left) > 0.0 > marginal(right):
        q, _, _ = bisect_decreasing(marginal, left, right, 1e-14 * scale)
    return q


def cournot_best_response(
    s: Scenario,
    mode: Participation,
    tol: float = 1e-10,
    damping: Optional[float] = None,
) -> OracleResult:
    """Damped symmetric best-response iteration for the Cournot equilibrium.

    Starts from the truthful per-generator supply and repeats
    ``y <- (1 - damping) * y + damping * BR((N - 1) * y)`` until successive
    iterates differ by less than ``tol`` (relative to ``max(1, y)``).
    ``damping=None`` picks ``2 / (N + 1)``, the rate that cancels the
    best-response slope of a linear demand.
    """
    N, alpha = s.count, s.alpha
    if damping is None:
        damping = 2.0 / (N + 1)
    if not (0.0 < damping <= 1.0):
        raise ValueError("damping must lie in (0, 1]")
    if not tol > 0:
        raise ValueError("tol must be positive")

    truthful = dispatch_by_bisection(s, mode, alpha).total_supply
    price = _price_function(s, mode)
    hi = 2.0 * truthful
    y = truthful / N
    for it in range(1, COURNOT_MAX_ITER + 1):
        br = _best_response(price, alpha, (N - 1) * y, hi)
        y_next = (1.0 - damping) * y + damping * br
        step = abs(y_next - y)
        y = y_next
        if step < tol * max(1.0, abs(y)):
            total = N * y
            lam = price(total)
            z = _demand(s, lam, mode)
            return OracleResult(lam, z, total, it, step)
    raise NonConvergence(f"best-response iteration did not settle in {COURNOT_MAX_ITER} steps")


def kkt_residual(s: Scenario, eq: EquilibriumOutcome) -> float:
    """Largest violation of the dispatch optimality conditions at ``eq``.

    Covers prosumer stationarity with the bound multiplier implied by the
    price, dual and primal feasibility, complementary slackness, the supply
    stationarity (price equals the offered marginal cost), and market clearing.
    """
    if len(eq.allocations) != s.n:
        raise ModelMismatch("allocation count does not match the scenario")
    lam = eq.price
    worst = 0.0
    restricted = eq.model.participation is Participation.RESTRICTED
    for p, z in zip(s.prosumers, eq.allocations):
        mu = lam - (2.0 * p.a * (p.capacity + z) + p.b)
        if restricted:
            terms = (max(0.0, -mu), abs(mu * z), max(0.0, -z))
        else:
            terms = (abs(mu), max(0.0, -(z + p.capacity)))
        worst = max(worst, *terms)

    if eq.model.strategic:
        if eq.bid_slope is None:
            raise ModelMismatch("strategic outcome has no bid slope")
        offer = eq.bid_slope
    else:
        offer = s.alpha
    worst = max(
        worst,
        abs(offer - lam),
        abs(math.fsum(eq.allocations) - eq.total_supply),
        abs(s.count * eq.per_generator_supply - eq.total_supply),
    )
    return worst


def threshold_jumps(s: Scenario, h: float = 1e-6) -> list[float]:
    """``|price(y_i - h) - price(y_i + h)|`` at each activation threshold
    ``y_i > 10 h`` (restricted participation)."""
    t = compute_thresholds(s)
    out = []
    for y in t.thresholds[1:]:
        if y > 10.0 * h:
            left = inverse_demand_restricted(s, t, y - h, check_range=False)
            right = inverse_demand_restricted(s, t, y + h, check_range=False)
            out.append(abs(left - right))
    return out


def derivative_sample_points(s: Scenario, count: int = 20) -> list[float]:
    """Supplies at which to compare the utility derivative with the price.

    Interior thresholds come first so central differences straddle them; the
    rest are spread evenly up past the last threshold and the truthful supply.
    """
    t = compute_thresholds(s)
    interior = [y for y in t.thresholds[1:] if y > 1e-3][: count // 2]
    truthful = math.fsum(
        max(0.0, (s.alpha - p.b) / (2.0 * p.a) - p.capacity) for p in s.prosumers
    )
    top = max([2.0 * truthful, *(1.25 * y for y in interior)])
    m = count - len(interior)
    return interior + [top * (i + 1) / m for i in range(m)]


def utility_derivative_errors(
    s: Scenario, count: int = 20, h: float = 1e-6
) -> list[float]:
    """Central-difference derivative of aggregate utility minus the restricted
    inverse demand, at :func:`derivative_sample_points`."""
    t = compute_thresholds(s)
    errors = []
    for y in derivative_sample_points(s, count):
        fd = (aggregate_utility(s, t, y + h) - aggregate_utility(s, t, y - h)) / (2.0 * h)
        errors.append(abs(fd - inverse_demand_restricted(s, t, y, check_range=False)))
    return errors
