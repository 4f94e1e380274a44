"""Social welfare of the four market models and the gaps between them.

Each welfare has three representations that must agree:

* an explicit closed form in the scenario parameters,
* a reformulation around the autarky welfare ``W0 = sum u_i(C_i)`` using the
  strategic price rise,
* the definition ``sum u_i(C_i + z_i) - alpha * y``.

The pairwise gaps likewise have closed forms, and their signs carry the
market-power result: DER participation raises welfare, strategic bidding
lowers it, and it lowers it less when prosumers participate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ModelMismatch, RepresentationMismatch
from .model import EquilibriumOutcome, Model, Scenario, utility

INEQUALITY_TOL = -1e-9
DIRECT_REL_TOL = 1e-9
GAP_REL_TOL = 1e-6

fsum = math.fsum


def _rel(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


# -- closed forms in the scenario parameters ---------------------------------


def welfare_full_truthful(s: Scenario) -> float:
    alpha = s.alpha
    return alpha * s.aggregates.total_capacity - fsum(
        (p.b - alpha) ** 2 / (4.0 * p.a) for p in s.prosumers
    )


def welfare_full_strategic(s: Scenario) -> float:
    alpha, N = s.alpha, s.count
    ps = s.prosumers
    price = fsum((alpha * N + p.b) / (2.0 * p.a) + p.capacity for p in ps) / (
        (N + 1) * s.aggregates.half_curvature_sum
    )
    return (
        price**2 * fsum(1.0 / (4.0 * p.a) for p in ps)
        - fsum(p.b**2 / (4.0 * p.a) for p in ps)
        + alpha * N * fsum(p.capacity - (alpha - p.b) / (2.0 * p.a) for p in ps) / (N + 1)
    )


def welfare_restricted_truthful(s: Scenario) -> float:
    alpha = s.alpha
    total = []
    for p in s.prosumers:
        if p.indifference_price > alpha:
            total.append(alpha * p.capacity - (p.b - alpha) ** 2 / (4.0 * p.a))
        else:
            total.append(p.a * p.capacity**2 + p.b * p.capacity)
    return fsum(total)


def welfare_restricted_strategic(s: Scenario, active: int) -> float:
    """Closed-form welfare with the first ``active`` sorted prosumers buying."""
    alpha, N = s.alpha, s.count
    on, off = s.prosumers[:active], s.prosumers[active:]
    price = fsum((alpha * N + p.b) / (2.0 * p.a) + p.capacity for p in on) / (
        (N + 1) * fsum(1.0 / (2.0 * p.a) for p in on)
    )
    return (
        fsum(price**2 / (4.0 * p.a) - p.b**2 / (4.0 * p.a) for p in on)
        + fsum(p.a * p.capacity**2 + p.b * p.capacity for p in off)
        + alpha * N * fsum(p.capacity - (alpha - p.b) / (2.0 * p.a) for p in on) / (N + 1)
    )


# -- evaluation on solved outcomes -------------------------------------------


def _check_shape(s: Scenario, eq: EquilibriumOutcome) -> None:
    if len(eq.allocations) != s.n:
        raise ModelMismatch(
            f"outcome has {len(eq.allocations)} allocations, scenario has {s.n} prosumers"
        )
    if eq.model is Model.RESTRICTED_STRATEGIC and eq.active_set_size is None:
        raise ModelMismatch("restricted-strategic outcome lacks an active set size")


def welfare_by_definition(s: Scenario, eq: EquilibriumOutcome) -> float:
    """``sum u_i(C_i + z_i) - alpha * y``."""
    return (
        fsum(utility(p, p.capacity + z) for p, z in zip(s.prosumers, eq.allocations))
        - s.alpha * eq.total_supply
    )


def welfare_direct(s: Scenario, eq: EquilibriumOutcome) -> float:
    """Closed-form welfare for ``eq.model``, cross-checked against the definition."""
    _check_shape(s, eq)
    if eq.model is Model.FULL_TRUTHFUL:
        w = welfare_full_truthful(s)
    elif eq.model is Model.FULL_STRATEGIC:
        w = welfare_full_strategic(s)
    elif eq.model is Model.RESTRICTED_TRUTHFUL:
        w = welfare_restricted_truthful(s)
    else:
        w = welfare_restricted_strategic(s, eq.active_set_size)
    by_def = welfare_by_definition(s, eq)
    if _rel(w, by_def) > DIRECT_REL_TOL:
        raise RepresentationMismatch(
            f"{eq.model.value}: closed form {w!r} vs sum(u) - alpha*y {by_def!r}"
        )
    return w


def autarky_welfare(s: Scenario) -> float:
    return fsum(utility(p, p.capacity) for p in s.prosumers)


def price_rises(
    s: Scenario,
    full_t: EquilibriumOutcome,
    full_s: EquilibriumOutcome,
    rest_t: EquilibriumOutcome,
    rest_s: EquilibriumOutcome,
) -> tuple[float, float]:
    """Strategic minus truthful price, with and without participation."""
    return full_s.price - full_t.price, rest_s.price - rest_t.price


def price_rises_closed_form(
    s: Scenario, full_t: EquilibriumOutcome, rest_s: EquilibriumOutcome
) -> tuple[float, float]:
    """Price rises from the truthful allocations alone.

    The restricted rise only sums over prosumers active under strategic
    bidding, whose truthful purchases coincide with the full-participation ones.
    """
    N = s.count
    zt = full_t.allocations
    delta = -(fsum(zt) / (N + 1)) / s.aggregates.half_curvature_sum
    k = rest_s.active_set_size
    on = s.prosumers[:k]
    delta_n = (fsum(zt[:k]) / (N + 1)) / -fsum(1.0 / (2.0 * p.a) for p in on)
    return delta, delta_n


def welfare_reformulated(
    s: Scenario, eq: EquilibriumOutcome, w0: float, delta_or_delta_n: float = 0.0
) -> float:
    """Welfare as ``W0`` plus a correction in the allocations.

    Truthful models ignore ``delta_or_delta_n``; strategic models need the
    matching price rise.
    """
    _check_shape(s, eq)
    az2 = fsum(p.a * z * z for p, z in zip(s.prosumers, eq.allocations))
    if eq.model.strategic:
        return w0 - az2 + delta_or_delta_n * fsum(eq.allocations)
    return w0 - az2


@dataclass(frozen=True)
class InequalityVerdicts:
    """The five welfare inequalities, each True when it holds."""

    full_ge_restricted_truthful: bool
    full_ge_restricted_strategic: bool
    truthful_ge_strategic_full: bool
    truthful_ge_strategic_restricted: bool
    mitigation: bool

    # human-readable statements; keys match field names
    STATEMENTS = {
        "full_ge_restricted_truthful": "W_T >= W_TN",
        "full_ge_restricted_strategic": "W_S >= W_SN",
        "truthful_ge_strategic_full": "W_T >= W_S",
        "truthful_ge_strategic_restricted": "W_TN >= W_SN",
        "mitigation": "W_TN - W_SN >= W_T - W_S",
    }

    def items(self) -> list[tuple[str, bool]]:
        return [(name, getattr(self, name)) for name in self.STATEMENTS]

    @property
    def all_hold(self) -> bool:
        return all(v for _, v in self.items())


@dataclass(frozen=True)
class GapReport:
    w0: float
    wT: float
    wS: float
    wTN: float
    wSN: float
    delta: float
    delta_n: float
    gap_T_TN: float
    gap_S_SN: float
    gap_T_S: float
    gap_TN_SN: float
    inequalities_hold: InequalityVerdicts
    representation_mismatch: float
    gap_mismatch: float


def _closed_form_gaps(
    s: Scenario,
    full_t: EquilibriumOutcome,
    full_s: EquilibriumOutcome,
    rest_s: EquilibriumOutcome,
    delta: float,
    delta_n: float,
) -> dict[str, float]:
    N = s.count
    ps = s.prosumers
    zt, zs, zsn = full_t.allocations, full_s.allocations, rest_s.allocations
    k = rest_s.active_set_size

    t_tn = -fsum(p.a * z * z for p, z in zip(ps, zt) if z <= 0.0)
    t_s = (fsum(zt) / (N + 1)) ** 2 / fsum(1.0 / -p.a for p in ps)
    dropped = fsum(-p.a * z * z for p, z in zip(ps[k:], zt[k:]) if z > 0.0)
    tn_sn = dropped + (fsum(zt[:k]) / (N + 1)) ** 2 / fsum(1.0 / -p.a for p in ps[:k])
    s_sn = (
        fsum(-p.a * z * z + delta * z for p, z in zip(ps, zs))
        + fsum(p.a * z * z for p, z in zip(ps, zsn))
        - delta_n * fsum(zsn)
    )
    return {"T_TN": t_tn, "S_SN": s_sn, "T_S": t_s, "TN_SN": tn_sn}


def gap_identities(
    s: Scenario,
    full_t: EquilibriumOutcome,
    full_s: EquilibriumOutcome,
    rest_t: EquilibriumOutcome,
    rest_s: EquilibriumOutcome,
    *,
    check: bool = True,
) -> GapReport:
    """Welfares, price rises, the four gaps and the inequality verdicts.

    Gaps are taken as differences of the outcomes' recorded welfares; each is
    compared to its closed form and ``RepresentationMismatch`` is raised when
    they disagree by more than 1e-6 relative (disable with ``check=False``).
    """
    outcomes = (full_t, full_s, rest_t, rest_s)
    expected = (
        Model.FULL_TRUTHFUL,
        Model.FULL_STRATEGIC,
        Model.RESTRICTED_TRUTHFUL,
        Model.RESTRICTED_STRATEGIC,
    )
    for eq, model in zip(outcomes, expected):
        if eq.model is not model:
            raise ModelMismatch(f"expected a {model.value} outcome, got {eq.model.value}")
        _check_shape(s, eq)

    w0 = autarky_welfare(s)
    delta, delta_n = price_rises(s, *outcomes)
    wT, wS, wTN, wSN = (eq.welfare for eq in outcomes)

    mismatch = 0.0
    for eq, d in zip(outcomes, (0.0, delta, 0.0, delta_n)):
        reps = (
            eq.welfare,
            welfare_direct(s, eq) if check else eq.welfare,
            welfare_reformulated(s, eq, w0, d),
            welfare_by_definition(s, eq),
        )
        mismatch = max(mismatch, max(_rel(x, y) for x in reps for y in reps))

    direct = {"T_TN": wT - wTN, "S_SN": wS - wSN, "T_S": wT - wS, "TN_SN": wTN - wSN}
    closed = _closed_form_gaps(s, full_t, full_s, rest_s, delta, delta_n)
    gap_mismatch = max(_rel(direct[key], closed[key]) for key in direct)
    if check and gap_mismatch > GAP_REL_TOL:
        worst = max(direct, key=lambda key: _rel(direct[key], closed[key]))
        raise RepresentationMismatch(
            f"gap {worst}: difference {direct[worst]!r} vs closed form {closed[worst]!r}"
        )

    verdicts = InequalityVerdicts(
        full_ge_restricted_truthful=direct["T_TN"] >= INEQUALITY_TOL,
        full_ge_restricted_strategic=direct["S_SN"] >= INEQUALITY_TOL,
        truthful_ge_strategic_full=direct["T_S"] >= INEQUALITY_TOL,
        truthful_ge_strategic_restricted=direct["TN_SN"] >= INEQUALITY_TOL,
        mitigation=direct["TN_SN"] - direct["T_S"] >= INEQUALITY_TOL,
    )
    return GapReport(
        w0=w0,
        wT=wT,
        wS=wS,
        wTN=wTN,
        wSN=wSN,
        delta=delta,
        delta_n=delta_n,
        gap_T_TN=direct["T_TN"],
        gap_S_SN=direct["S_SN"],
        gap_T_S=direct["T_S"],
        gap_TN_SN=direct["TN_SN"],
        inequalities_hold=verdicts,
        representation_mismatch=mismatch,
        gap_mismatch=gap_mismatch,
    )


def closed_form_gaps(
    s: Scenario,
    full_t: EquilibriumOutcome,
    full_s: EquilibriumOutcome,
    rest_s: EquilibriumOutcome,
    delta: Optional[float] = None,
    delta_n: Optional[float] = None,
) -> dict[str, float]:
    """Closed-form gap values keyed ``T_TN``, ``S_SN``, ``T_S``, ``TN_SN``."""
    if delta is None or delta_n is None:
        delta, delta_n = price_rises_closed_form(s, full_t, rest_s)
    return _closed_form_gaps(s, full_t, full_s, rest_s, delta, delta_n)
