"""Command-line interface.

Exit codes: 0 success, 1 usage or I/O error, 2 solver or validation error,
3 verification failure.
"""

from __future__ import annotations

import json
import sys
from typing import Optional, Sequence

import click

from .errors import MarketError, ValidationError
from .model import EquilibriumOutcome, Model
from .scenario_io import load_scenario
from .solve import solve
from .sweep import sweep, write_csv
from .verify import run_verification

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3


def _solver_error(e: MarketError) -> int:
    if isinstance(e, ValidationError):
        payload = {"error": type(e.cause).__name__, "category": "ValidationError", "detail": str(e.cause)}
    else:
        payload = {"error": type(e).__name__, "detail": str(e)}
    click.echo(json.dumps(payload), err=True)
    return EXIT_SOLVER


def _io_error(e: OSError) -> int:
    click.echo(json.dumps({"error": "IOError", "detail": str(e)}), err=True)
    return EXIT_USAGE


def _table(eq: EquilibriumOutcome) -> str:
    rows = [
        ("model", eq.model.value),
        ("price", f"{eq.price:.12g}"),
        ("allocations", ", ".join(f"{z:.12g}" for z in eq.allocations)),
        ("per_generator_supply", f"{eq.per_generator_supply:.12g}"),
        ("total_supply", f"{eq.total_supply:.12g}"),
        ("welfare", f"{eq.welfare:.12g}"),
    ]
    if eq.bid_slope is not None:
        rows.append(("bid_slope", f"{eq.bid_slope:.12g}"))
    if eq.active_set_size is not None:
        rows.append(("active_set_size", str(eq.active_set_size)))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


@click.group()
def cli() -> None:
    """Equilibria and welfare of electricity markets with prosumers."""


@cli.command("solve")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False))
@click.option("--model", "model", required=True, type=click.Choice([m.value for m in Model]))
@click.option("--format", "fmt", default="json", show_default=True, type=click.Choice(["json", "table"]))
def solve_cmd(scenario_path: str, model: str, fmt: str) -> int:
    """Solve one market model for a scenario file."""
    try:
        eq = solve(load_scenario(scenario_path), Model(model))
    except OSError as e:
        return _io_error(e)
    except MarketError as e:
        return _solver_error(e)
    if fmt == "json":
        click.echo(json.dumps(eq.to_dict(), indent=2))
    else:
        click.echo(_table(eq))
    return EXIT_OK


@cli.command("sweep")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False))
@click.option("--n-min", required=True, type=click.IntRange(min=1))
@click.option("--n-max", required=True, type=click.IntRange(min=1))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def sweep_cmd(scenario_path: str, n_min: int, n_max: int, out_path: str) -> int:
    """Solve all models for each generator count in [n-min, n-max] and write CSV."""
    if n_min > n_max:
        raise click.BadParameter(f"--n-min {n_min} exceeds --n-max {n_max}")
    try:
        rows = sweep(load_scenario(scenario_path), n_min, n_max)
        write_csv(rows, out_path)
    except OSError as e:
        return _io_error(e)
    except MarketError as e:
        return _solver_error(e)
    click.echo(f"wrote {len(rows)} rows to {out_path}")
    return EXIT_OK


@cli.command("verify")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(dir_okay=False))
@click.option("--tol", default=1e-6, show_default=True, type=click.FloatRange(min=0.0, min_open=True))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0, max=2**64 - 1))
@click.option("--random-count", default=100, show_default=True, type=click.IntRange(min=0))
@click.option("--perturb-w-s", default=0.0, hidden=True, type=float)
def verify_cmd(
    scenario_path: str, tol: float, seed: int, random_count: int, perturb_w_s: float
) -> int:
    """Cross-check closed forms, oracles and welfare inequalities."""
    try:
        s = load_scenario(scenario_path)
    except OSError as e:
        return _io_error(e)
    except MarketError as e:
        return _solver_error(e)
    report = run_verification(s, tol=tol, seed=seed, random_count=random_count, perturb_w_s=perturb_w_s)
    click.echo(report.render())
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
