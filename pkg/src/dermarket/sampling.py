"""Seeded generator of random valid scenarios for property checks.

Parameters are drawn from ranges where utility slopes dominate curvatures,
and draws are rejected until the scenario validates and all four equilibria
solve inside the admissible price and supply range.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import MarketError
from .model import GeneratorFleet, Scenario, validate_and_build
from .solve import AllOutcomes, solve_all

MAX_PROSUMERS = 6
MAX_GENERATORS = 10
MAX_DRAWS = 10_000


@dataclass(frozen=True)
class SampledScenario:
    seed: int
    scenario: Scenario
    outcomes: AllOutcomes
    draws: int


def draw_scenario(
    seed: int,
    max_prosumers: int = MAX_PROSUMERS,
    max_generators: int = MAX_GENERATORS,
) -> SampledScenario:
    """Deterministically produce a valid scenario from ``seed``."""
    rng = random.Random(seed)
    for draw in range(1, MAX_DRAWS + 1):
        n = rng.randint(1, max_prosumers)
        prosumers = [
            (rng.uniform(-0.5, -0.01), rng.uniform(8.0, 20.0), rng.uniform(0.0, 40.0))
            for _ in range(n)
        ]
        fleet = GeneratorFleet(rng.randint(1, max_generators), rng.uniform(1.0, 6.0))
        try:
            s = validate_and_build(prosumers, fleet)
            outcomes = solve_all(s)
        except MarketError:
            continue
        return SampledScenario(seed, s, outcomes, draw)
    raise RuntimeError(f"seed {seed}: no valid scenario in {MAX_DRAWS} draws")


def scenario_seeds(seed: int, count: int) -> list[int]:
    """Per-scenario seeds derived from one master seed."""
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


def draw_scenarios(seed: int, count: int, **kwargs) -> list[SampledScenario]:
    return [draw_scenario(s, **kwargs) for s in scenario_seeds(seed, count)]
