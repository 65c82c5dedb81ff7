"""Loading configuration and model files.

A document gives the points either directly (``"A"``, one column per point)
or through a relation basis (``"B"``); exactly one of the two keys is
allowed. With ``"A"`` an explicit relation basis may be supplied as
``"basis"``, which is then checked against the points. The remaining keys
are optional inputs to the series and mirror stages.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import intlin
from .errors import ConsistencyError, PreconditionError, SchemaError
from .fan import RegularTriangulation, triangulation_from_weight, weight_from_t
from .lattice import PointConfiguration, RelationLattice, config_from_relations, kernel_basis
from .mirror import MirrorModel

_INT_MATRIX = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}},
}
_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?\d+(/[1-9]\d*)?$"},
    ]
}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "A": _INT_MATRIX,
        "B": _INT_MATRIX,
        "basis": _INT_MATRIX,
        "gamma": {"type": "array", "items": _RATIONAL},
        "weight": {"type": "array", "items": _RATIONAL},
        "kappa": {"type": "integer", "minimum": 1},
        "signs": {"type": "array", "items": {"enum": [1, -1]}},
        "order": {"type": "integer", "minimum": 1},
        "pairing_basis": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
    "required": ["name"],
    "oneOf": [{"required": ["A"]}, {"required": ["B"]}],
    "not": {"required": ["B", "basis"]},
    "additionalProperties": False,
}

BUNDLED = ("gauss", "f1", "f4", "pentagon", "z3111", "fd-k3", "fd-k4", "quintic",
           "two-cubics", "p2p2-33", "four-quadrics", "p1x4")


@dataclass(frozen=True, eq=False)
class Problem:
    """A validated input document."""

    name: str
    config: PointConfiguration
    lattice: RelationLattice
    gamma: tuple[Fraction, ...] | None = None
    weight: tuple[Fraction, ...] | None = None
    kappa: int | None = None
    signs: tuple[int, ...] | None = None
    order: int | None = None
    pairing_basis: tuple[tuple[int, ...], ...] | None = None

    @cached_property
    def chamber(self) -> RegularTriangulation:
        """Triangulation from ``weight``, or else from the sum of the last ``d`` basis columns."""
        if self.weight is not None:
            return triangulation_from_weight(self.config, self.lattice, self.weight)
        n, d = self.lattice.size, self.lattice.rank
        t = [sum(row[n - d:]) for row in self.lattice.basis]
        return triangulation_from_weight(self.config, self.lattice, weight_from_t(self.lattice, t))

    def mirror_model(self) -> MirrorModel:
        if self.gamma is None or self.kappa is None:
            raise PreconditionError("mirror computation needs 'gamma' and 'kappa'")
        if any(g.denominator != 1 for g in self.gamma):
            raise PreconditionError("mirror computation needs an integral offset")
        return MirrorModel(self.name, self.lattice.basis, tuple(int(g) for g in self.gamma),
                           self.kappa, self.signs, self.order or 9, self.pairing_basis, self.config)


def _path(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def parse_problem(doc: Any) -> Problem:
    """Validate a decoded JSON document and build the configuration."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        if first.validator == "oneOf" and not first.absolute_path:
            raise SchemaError("/: exactly one of 'A' and 'B' must be present")
        if first.validator == "not" and not first.absolute_path:
            raise SchemaError("/: 'basis' is only allowed together with 'A'")
        raise SchemaError(f"{_path(first)}: {first.message}")
    name = doc["name"]
    _check_rectangular(doc.get("A") or doc["B"], "A" if "A" in doc else "B")
    if "A" in doc:
        config = PointConfiguration.from_columns(doc["A"], name)
        if "basis" in doc:
            _check_rectangular(doc["basis"], "basis")
            basis = doc["basis"]
            if len(basis[0]) != config.size:
                raise SchemaError(f"/basis: rows need {config.size} entries")
            product = intlin.matmul(basis, intlin.transpose(config.matrix))
            if any(any(row) for row in product):
                raise ConsistencyError("relation basis rows are not relations among the points")
            lattice = RelationLattice(tuple(map(tuple, basis)), config)
        else:
            lattice = kernel_basis(config)
    else:
        config = config_from_relations(doc["B"], name)
        lattice = RelationLattice(tuple(map(tuple, doc["B"])), config)
    n = config.size
    for key in ("gamma", "weight"):
        if key in doc and len(doc[key]) != n:
            raise SchemaError(f"/{key}: expected {n} entries, got {len(doc[key])}")
    if "signs" in doc and len(doc["signs"]) != lattice.rank:
        raise SchemaError(f"/signs: expected {lattice.rank} entries")
    if "pairing_basis" in doc and any(len(m) != lattice.rank for m in doc["pairing_basis"]):
        raise SchemaError(f"/pairing_basis: exponent vectors need {lattice.rank} entries")
    return Problem(
        name=name,
        config=config,
        lattice=lattice,
        gamma=_rationals(doc.get("gamma")),
        weight=_rationals(doc.get("weight")),
        kappa=doc.get("kappa"),
        signs=tuple(doc["signs"]) if "signs" in doc else None,
        order=doc.get("order"),
        pairing_basis=tuple(tuple(m) for m in doc["pairing_basis"]) if "pairing_basis" in doc else None,
    )


def _check_rectangular(matrix: Sequence[Sequence[int]], key: str) -> None:
    if len({len(row) for row in matrix}) != 1:
        raise SchemaError(f"/{key}: rows have different lengths")


def _rationals(values) -> tuple[Fraction, ...] | None:
    return None if values is None else tuple(Fraction(v) for v in values)


def load_problem(path: str | Path) -> Problem:
    """Read and validate a JSON file; a bare bundled name such as ``quintic`` also works."""
    path = Path(path)
    if not path.exists() and path.stem in BUNDLED and not path.parent.parts:
        return load_bundled(path.stem)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"/: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_problem(doc)


def load_model(path: str | Path) -> MirrorModel | Problem:
    """A mirror model when the file carries the mirror inputs, otherwise the plain problem."""
    problem = load_problem(path)
    if problem.kappa is not None and problem.gamma is not None:
        return problem.mirror_model()
    return problem


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("gkzkit") / "data" / f"{name}.json"))


def load_bundled(name: str) -> Problem:
    if name not in BUNDLED:
        raise KeyError(f"no bundled example named {name!r}")
    return parse_problem(json.loads(bundled_path(name).read_text()))
