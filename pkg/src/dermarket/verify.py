"""End-to-end verification of a scenario plus seeded random scenarios.

Every closed-form equilibrium is checked against the numerical oracles, the
welfare and gap representations are checked against each other, and the five
welfare inequalities are evaluated. The report is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

from .errors import MarketError
from .model import EquilibriumOutcome, Scenario
from .oracle import (
    cournot_best_response,
    dispatch_by_bisection,
    kkt_residual,
    threshold_jumps,
    utility_derivative_errors,
)
from .sampling import draw_scenario, scenario_seeds
from .solve import AllOutcomes, solve_all
from .welfare import INEQUALITY_TOL, InequalityVerdicts, gap_identities

SWEEP_RANGE = range(1, 21)
KKT_TOL = 1e-9
REPRESENTATION_TOL = 1e-8
GAP_TOL = 1e-6
CONTINUITY_TOL = 1e-4
MAX_LISTED_FAILURES = 10


@dataclass
class Check:
    name: str
    tolerance: float
    # "max": a residual that must stay <= tolerance; "min": a margin that must stay >= tolerance
    sense: str = "max"
    worst: Optional[float] = None
    failures: list[str] = field(default_factory=list)
    cases: int = 0

    def record(self, value: float, label: str) -> None:
        self.cases += 1
        if self.sense == "max":
            bad = not value <= self.tolerance
            if self.worst is None or value > self.worst or math.isnan(value):
                self.worst = value
        else:
            bad = not value >= self.tolerance
            if self.worst is None or value < self.worst or math.isnan(value):
                self.worst = value
        if bad:
            self.failures.append(f"{label}: {value:.3e}")

    def fail(self, label: str, detail: str) -> None:
        self.cases += 1
        self.failures.append(f"{label}: {detail}")

    @property
    def passed(self) -> bool:
        return not self.failures

    def render(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        rel = "<=" if self.sense == "max" else ">="
        worst = "n/a" if self.worst is None else f"{self.worst:.3e}"
        lines = [f"{status} {self.name}: worst={worst} (need {rel} {self.tolerance:g}, {self.cases} cases)"]
        for msg in self.failures[:MAX_LISTED_FAILURES]:
            lines.append(f"    failed {msg}")
        if len(self.failures) > MAX_LISTED_FAILURES:
            lines.append(f"    ... {len(self.failures) - MAX_LISTED_FAILURES} more")
        return lines


@dataclass
class VerificationReport:
    checks: list[Check]
    notes: list[str]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def render(self) -> str:
        lines = []
        for c in self.checks:
            lines.extend(c.render())
        lines.extend(f"NOTE {n}" for n in self.notes)
        lines.append("RESULT " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _max_abs_diff(eq: EquilibriumOutcome, price: float, z, y: float) -> float:
    return max(
        abs(price - eq.price),
        abs(y - eq.total_supply),
        *(abs(a - b) for a, b in zip(z, eq.allocations)),
    )


def _cases(
    s: Scenario, seed: int, random_count: int, solve_check: Check
) -> Iterator[tuple[str, Scenario, AllOutcomes]]:
    for n in SWEEP_RANGE:
        label = f"scenario N={n}"
        scen = s.with_count(n)
        try:
            yield label, scen, solve_all(scen)
        except MarketError as e:
            solve_check.fail(label, f"{type(e).__name__}: {e}")
            continue
        solve_check.cases += 1
    for sub in scenario_seeds(seed, random_count):
        drawn = draw_scenario(sub)
        solve_check.cases += 1
        yield f"seed={sub} N={drawn.scenario.count}", drawn.scenario, drawn.outcomes


def run_verification(
    s: Scenario,
    tol: float = 1e-6,
    seed: int = 0,
    random_count: int = 100,
    perturb_w_s: float = 0.0,
) -> VerificationReport:
    """Verify ``s`` at every fleet size 1..20 and ``random_count`` random scenarios.

    ``perturb_w_s`` adds a constant to every full-strategic welfare before the
    welfare checks run; it exists to exercise the failure path.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    solve_check = Check("all four equilibria solve", 0.0)
    inequality = {
        name: Check(f"welfare inequality {stmt}", INEQUALITY_TOL, sense="min")
        for name, stmt in InequalityVerdicts.STATEMENTS.items()
    }
    reps = Check("welfare representations agree (relative)", REPRESENTATION_TOL)
    gaps = Check("gap closed forms match welfare differences (relative)", GAP_TOL)
    dispatch = Check("dispatch oracle matches closed forms", tol)
    cournot = Check("Cournot oracle matches strategic closed forms", tol)
    kkt = Check("KKT residual of closed-form outcomes", KKT_TOL)
    jumps = Check("restricted price continuous at thresholds", CONTINUITY_TOL)
    deriv = Check("aggregate utility derivative equals restricted price", CONTINUITY_TOL)

    for label, scen, out in _cases(s, seed, random_count, solve_check):
        if perturb_w_s:
            out = out._replace(
                full_strategic=replace(out.full_strategic, welfare=out.full_strategic.welfare + perturb_w_s)
            )
        report = gap_identities(scen, *out, check=False)
        margins = {
            "full_ge_restricted_truthful": report.gap_T_TN,
            "full_ge_restricted_strategic": report.gap_S_SN,
            "truthful_ge_strategic_full": report.gap_T_S,
            "truthful_ge_strategic_restricted": report.gap_TN_SN,
            "mitigation": report.gap_TN_SN - report.gap_T_S,
        }
        for name, value in margins.items():
            inequality[name].record(value, label)
        reps.record(report.representation_mismatch, label)
        gaps.record(report.gap_mismatch, label)

        for eq in out:
            offer = eq.bid_slope if eq.model.strategic else scen.alpha
            try:
                d = dispatch_by_bisection(scen, eq.model.participation, offer)
            except MarketError as e:
                dispatch.fail(f"{label} {eq.model.value}", f"{type(e).__name__}: {e}")
            else:
                dispatch.record(_max_abs_diff(eq, d.price, d.allocations, d.total_supply), f"{label} {eq.model.value}")
            kkt.record(kkt_residual(scen, eq), f"{label} {eq.model.value}")

        for eq in (out.full_strategic, out.restricted_strategic):
            try:
                c = cournot_best_response(scen, eq.model.participation, tol=tol * 1e-4)
            except MarketError as e:
                cournot.fail(f"{label} {eq.model.value}", f"{type(e).__name__}: {e}")
            else:
                cournot.record(_max_abs_diff(eq, c.price, c.allocations, c.total_supply), f"{label} {eq.model.value}")

        for value in threshold_jumps(scen):
            jumps.record(value, label)
        deriv.record(max(utility_derivative_errors(scen), default=0.0), label)

    notes = _price_ordering_notes(s)
    checks = [solve_check, *inequality.values(), reps, gaps, dispatch, cournot, kkt, jumps, deriv]
    return VerificationReport(checks, notes)


def price_ordering(s: Scenario) -> list[tuple[int, float, float]]:
    """``(N, lambda_S, lambda_SN)`` for N = 1..20; skips fleet sizes that fail to solve."""
    rows = []
    for n in SWEEP_RANGE:
        try:
            out = solve_all(s.with_count(n))
        except MarketError:
            continue
        rows.append((n, out.full_strategic.price, out.restricted_strategic.price))
    return rows


def _price_ordering_notes(s: Scenario) -> list[str]:
    rows = price_ordering(s)
    if not rows:
        return []
    alpha = s.alpha
    sn_highest = all(lsn > ls > alpha for _, ls, lsn in rows)
    s_highest = all(ls > lsn > alpha for _, ls, lsn in rows)
    span = f"N={rows[0][0]}..{rows[-1][0]}"
    if sn_highest:
        return [
            f"price ordering lambda_SN > lambda_S > alpha holds for {span}; "
            "the ordering alpha < lambda_SN < lambda_S does NOT hold for this scenario "
            "(strategic pricing without sell-back is the highest)"
        ]
    if s_highest:
        return [f"price ordering alpha < lambda_SN < lambda_S holds for {span}"]
    return [f"price ordering between lambda_S and lambda_SN is mixed over {span}"]
