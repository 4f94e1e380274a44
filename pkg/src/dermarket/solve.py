"""Model-tag dispatch over the four equilibrium solvers."""

from __future__ import annotations

from typing import NamedTuple

from .full import solve_full_strategic, solve_full_truthful
from .model import EquilibriumOutcome, Model, Scenario
from .restricted import solve_restricted_strategic, solve_restricted_truthful

SOLVERS = {
    Model.FULL_TRUTHFUL: solve_full_truthful,
    Model.FULL_STRATEGIC: solve_full_strategic,
    Model.RESTRICTED_TRUTHFUL: solve_restricted_truthful,
    Model.RESTRICTED_STRATEGIC: solve_restricted_strategic,
}


class AllOutcomes(NamedTuple):
    full_truthful: EquilibriumOutcome
    full_strategic: EquilibriumOutcome
    restricted_truthful: EquilibriumOutcome
    restricted_strategic: EquilibriumOutcome


def solve(s: Scenario, model: Model | str) -> EquilibriumOutcome:
    return SOLVERS[Model(model)](s)


def solve_all(s: Scenario) -> AllOutcomes:
    return AllOutcomes(*(fn(s) for fn in SOLVERS.values()))
