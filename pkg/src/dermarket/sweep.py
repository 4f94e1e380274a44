"""Equilibrium quantities across a range of generator counts."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable, TextIO, Union

from .model import Scenario
from .solve import solve_all
from .welfare import gap_identities

HEADER = (
    "n_generators",
    "lambda_T",
    "lambda_S",
    "lambda_TN",
    "lambda_SN",
    "w_T",
    "w_S",
    "w_TN",
    "w_SN",
    "gap_T_S",
    "gap_TN_SN",
    "delta",
    "delta_n",
    "active_set_size_SN",
)


@dataclass(frozen=True)
class SweepRow:
    n_generators: int
    lambda_T: float
    lambda_S: float
    lambda_TN: float
    lambda_SN: float
    w_T: float
    w_S: float
    w_TN: float
    w_SN: float
    gap_T_S: float
    gap_TN_SN: float
    delta: float
    delta_n: float
    active_set_size_SN: int


assert tuple(f.name for f in fields(SweepRow)) == HEADER


def sweep_row(s: Scenario, n_generators: int) -> SweepRow:
    """Solve all four models with the fleet size replaced by ``n_generators``."""
    scen = s.with_count(n_generators)
    ft, fs, rt, rs = solve_all(scen)
    report = gap_identities(scen, ft, fs, rt, rs)
    return SweepRow(
        n_generators=n_generators,
        lambda_T=ft.price,
        lambda_S=fs.price,
        lambda_TN=rt.price,
        lambda_SN=rs.price,
        w_T=report.wT,
        w_S=report.wS,
        w_TN=report.wTN,
        w_SN=report.wSN,
        gap_T_S=report.gap_T_S,
        gap_TN_SN=report.gap_TN_SN,
        delta=report.delta,
        delta_n=report.delta_n,
        active_set_size_SN=rs.active_set_size,
    )


def sweep(s: Scenario, n_min: int, n_max: int) -> list[SweepRow]:
    if not 1 <= n_min <= n_max:
        raise ValueError(f"need 1 <= n_min <= n_max, got {n_min}..{n_max}")
    return [sweep_row(s, n) for n in range(n_min, n_max + 1)]


def _fmt(value: Union[int, float]) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def write_csv(rows: Iterable[SweepRow], out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow(_fmt(v) for v in astuple(row))


def read_csv(path: Union[str, Path]) -> list[SweepRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != HEADER:
            raise ValueError(f"unexpected sweep header {reader.fieldnames}")
        out = []
        for rec in reader:
            vals = {
                name: int(rec[name]) if name in ("n_generators", "active_set_size_SN") else float(rec[name])
                for name in HEADER
            }
            out.append(SweepRow(**vals))
    return out
