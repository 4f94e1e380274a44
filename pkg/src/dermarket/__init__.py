"""Competitive equilibria of a single-node electricity market with
quadratic-utility prosumers and identical linear-cost generators, under
truthful and strategic (Cournot) bidding, with and without prosumer sell-back.
"""

from .errors import MarketError
from .model import (
    AggregateSums,
    EquilibriumOutcome,
    GeneratorFleet,
    Model,
    Participation,
    Prosumer,
    Scenario,
    assert_assumption_range,
    prosumer_best_response,
    utility,
    validate_and_build,
)
from .solve import AllOutcomes, solve, solve_all

__all__ = [
    "AggregateSums",
    "AllOutcomes",
    "EquilibriumOutcome",
    "GeneratorFleet",
    "MarketError",
    "Model",
    "Participation",
    "Prosumer",
    "Scenario",
    "assert_assumption_range",
    "prosumer_best_response",
    "solve",
    "solve_all",
    "utility",
    "validate_and_build",
]
