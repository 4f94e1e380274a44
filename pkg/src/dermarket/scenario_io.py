"""Scenario JSON files.

Schema::

    {"prosumers": [{"a": -0.1, "b": 10.0, "capacity": 10.0}, ...],
     "generators": {"count": 1, "marginal_cost": 5.0}}

Unknown keys are rejected and every number must be finite.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import pydantic
from pydantic import BaseModel, ConfigDict, StrictInt

from .errors import ParseError, ScenarioInvalid, ValidationError
from .model import GeneratorFleet, Scenario, validate_and_build


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class ProsumerRecord(_Strict):
    a: float
    b: float
    capacity: float


class GeneratorsRecord(_Strict):
    count: StrictInt
    marginal_cost: float


class ScenarioFile(_Strict):
    prosumers: list[ProsumerRecord]
    generators: GeneratorsRecord

    @classmethod
    def from_scenario(cls, s: Scenario) -> "ScenarioFile":
        ordered = sorted(s.prosumers, key=lambda p: p.original_index)
        return cls(
            prosumers=[ProsumerRecord(a=p.a, b=p.b, capacity=p.capacity) for p in ordered],
            generators=GeneratorsRecord(count=s.count, marginal_cost=s.alpha),
        )


def _describe(err: pydantic.ValidationError) -> str:
    parts = []
    for e in err.errors():
        loc = "".join(f"[{x}]" if isinstance(x, int) else f".{x}" for x in e["loc"])
        parts.append(f"{loc.lstrip('.') or '<root>'}: {e['msg']}")
    return "; ".join(parts)


def parse_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        record = ScenarioFile.model_validate(data)
    except pydantic.ValidationError as e:
        raise ParseError(_describe(e)) from e
    try:
        fleet = GeneratorFleet(record.generators.count, record.generators.marginal_cost)
        return validate_and_build([p.model_dump() for p in record.prosumers], fleet)
    except ScenarioInvalid as e:
        raise ValidationError(e) from e


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and validate a scenario file.

    Raises:
        OSError: the file cannot be read.
        ParseError: malformed JSON or schema violation (names the field).
        ValidationError: well-formed but fails model validation.
    """
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def dump_scenario(s: Scenario) -> str:
    return ScenarioFile.from_scenario(s).model_dump_json(indent=2)
