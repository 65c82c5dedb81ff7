"""Command-line front end."""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

import click

from .errors import PreconditionError, SchemaError
from .fan import (
    RegularTriangulation,
    enumerate_regular_triangulations,
    gkz_vector,
    is_unimodular,
    total_volume,
    triangulation_from_weight,
)
from .lattice import check_generates, homogeneity_vector
from .mirror import run_mirror
from .models import Problem, load_problem
from .ring import build_ring, poincare_check
from .series import GammaData, adapted_basis, expand_deformed, expand_plain
from .verifier import FormalSolution, box_generator_set, check_box, check_euler, euler_parameter

EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3
EXIT_VIOLATIONS = 1


def fmt(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _braces(simplices) -> str:
    return "{" + ",".join("{" + ",".join(map(str, s)) + "}" for s in simplices) + "}"


def triangulation_json(problem: Problem, tri: RegularTriangulation) -> dict:
    return {
        "simplices": [list(s) for s in tri.simplices],
        "witness": [fmt(x) for x in tri.witness],
        "unimodular": is_unimodular(problem.config, tri),
        "gkz_vector": list(gkz_vector(problem.config, tri)),
    }


def _table(rows: list[list[str]], numeric: set[int] = frozenset()) -> str:
    """Plain aligned columns; columns listed in ``numeric`` are right-aligned."""
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [c.rjust(w) if i in numeric else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out)


# -- command bodies: each returns (json document, table text, exit code) --------


def do_analyze(problem: Problem, order: int) -> tuple[dict, str, int]:
    chamber = problem.chamber
    ring = build_ring(problem.config, problem.lattice, chamber)
    volume = total_volume(problem.config, problem.lattice)
    doc = {
        "name": problem.name,
        "points": [list(p) for p in problem.config.points],
        "relation_basis": [list(r) for r in problem.lattice.basis],
        "homogeneity": list(homogeneity_vector(problem.config)),
        "generates": check_generates(problem.config),
        "volume": volume,
        "chamber": triangulation_json(problem, chamber),
        "ring_ranks": ring.ranks,
        "poincare_identity": poincare_check(ring, chamber, problem.config.rows),
    }
    rows = [
        ["name", problem.name],
        ["points", str(problem.config.size)],
        ["relation rank", str(problem.lattice.rank)],
        ["relation basis", str([list(r) for r in problem.lattice.basis])],
        ["volume", str(volume)],
        ["chamber", _braces(chamber.simplices)],
        ["unimodular", str(doc["chamber"]["unimodular"]).lower()],
        ["ring ranks", str(ring.ranks)],
        ["Poincaré identity", str(doc["poincare_identity"]).lower()],
    ]
    return doc, _table(rows), 0


def do_fan(problem: Problem, order: int) -> tuple[dict, str, int]:
    tris = enumerate_regular_triangulations(problem.config, problem.lattice)
    items = [triangulation_json(problem, t) for t in tris]
    doc = {"name": problem.name, "count": len(items), "triangulations": items}
    rows = [[str(i + 1), _braces(t.simplices), " ".join(map(str, it["gkz_vector"]))]
            for i, (t, it) in enumerate(zip(tris, items))]
    text = f"{len(items)} regular triangulations\n" + _table(rows, {0})
    return doc, text, 0


def do_triangulate(problem: Problem, order: int, weight: str | None) -> tuple[dict, str, int]:
    if weight is not None:
        alpha = [Fraction(x) for x in weight.split(",")]
        tri = triangulation_from_weight(problem.config, problem.lattice, alpha)
    else:
        tri = problem.chamber
    doc = triangulation_json(problem, tri)
    return doc, _braces(tri.simplices), 0


def do_ring(problem: Problem, order: int) -> tuple[dict, str, int]:
    ring = build_ring(problem.config, problem.lattice, problem.chamber)
    doc = ring.to_json()
    rows = [[str(i), str(deg), str(list(m)) if m is not None else "(polynomial)"]
            for i, (deg, m) in enumerate(zip(ring.degrees, ring.basis_monomials()))]
    return doc, f"ranks {ring.ranks}\n" + _table(rows, {0, 1}), 0


def _series(problem: Problem, order: int, signed: bool):
    gamma = problem.gamma or tuple(Fraction(0) for _ in range(problem.config.size))
    chamber = problem.chamber
    basis = adapted_basis(problem.lattice, chamber)
    if all(g.denominator == 1 for g in gamma) and is_unimodular(problem.config, chamber):
        ring = build_ring(problem.config, problem.lattice, chamber)
        data = GammaData(problem.config, problem.lattice, gamma, chamber, basis, tuple(ring.generators))
        return expand_deformed(data, order, signed=signed)
    data = GammaData(problem.config, problem.lattice, gamma, chamber, basis)
    return expand_plain(data, order, signed=signed)


def do_series(problem: Problem, order: int) -> tuple[dict, str, int]:
    series = _series(problem, order, signed=False)
    doc = series.to_json()
    rows = [[" ".join(map(str, t["n"])), "  ".join(t["coeff"])] for t in doc["terms"]]
    return doc, _table(rows), 0


def do_verify(problem: Problem, order: int, lambda_bound: int | None) -> tuple[dict, str, int]:
    sol = FormalSolution.from_series(_series(problem, order, signed=True))
    if lambda_bound is None:
        lambda_bound = 2 * max(sum(abs(x) for x in row) for row in problem.lattice.basis)
    reports = [check_euler(sol, euler_parameter(sol))]
    reports += [check_box(sol, lam) for lam in box_generator_set(problem.lattice, lambda_bound)]
    violations = sum(len(r.violations) for r in reports)
    doc = {"name": problem.name, "order": order, "reports": [r.to_json() for r in reports],
           "violations": violations}
    rows = [["check", "lambda", "checked", "unchecked", "violations"]]
    for r in reports:
        rows.append([r.kind, " ".join(map(str, r.lam)) if r.lam else "-", str(r.checked),
                     str(r.unchecked_boundary), str(len(r.violations))])
    return doc, _table(rows, {2, 3, 4}), EXIT_VIOLATIONS if violations else 0


def do_mirror(problem: Problem, order: int | None, signs: str | None, kappa: int | None
              ) -> tuple[dict, str, int]:
    model = problem.mirror_model()
    sign_values = tuple(int(s) for s in signs.split(",")) if signs else None
    doc = run_mirror(model, order, sign_values, kappa)
    rows = []
    for entry in doc["N"]:
        idx = entry["index"]
        label = f"N_{idx[0]}" if len(idx) == 1 else "N_(" + ",".join(map(str, idx)) + ")"
        rows.append([label, entry["value"]])
    return doc, _table(rows, {1}), 0


# -- click wiring ---------------------------------------------------------------


def _emit(result: tuple[dict, str, int], fmt_name: str, output: str | None) -> None:
    doc, text, code = result
    body = json.dumps(doc, indent=2, sort_keys=True) if fmt_name == "json" else text
    if output:
        Path(output).write_text(body + "\n")
    else:
        click.echo(body)
    if code:
        sys.exit(code)


def _run(body: Callable[[], tuple[dict, str, int]], fmt_name: str, output: str | None) -> None:
    try:
        result = body()
    except SchemaError as exc:
        click.echo(f"SchemaError: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except OSError as exc:
        click.echo(f"SchemaError: cannot read input ({exc.strerror or exc})", err=True)
        sys.exit(EXIT_SCHEMA)
    except PreconditionError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)
    _emit(result, fmt_name, output)


def _load(path: str) -> Problem:
    return load_problem(path)


_common = [
    click.argument("input_path", type=click.Path(dir_okay=False)),
    click.option("--order", type=click.IntRange(min=1), default=None, help="Truncation order."),
    click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
    click.option("--format", "fmt_name", type=click.Choice(["json", "table"]), default="table"),
]


def common(func):
    for deco in reversed(_common):
        func = deco(func)
    return func


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Exact GKZ series, secondary fans and instanton numbers."""


def _order(problem: Problem, order: int | None, default: int) -> int:
    return order or problem.order or default


@main.command()
@common
def analyze(input_path: str, order: int | None, output: str | None, fmt_name: str) -> None:
    """Lattice, volume, default chamber and its ring."""
    _run(lambda: do_analyze(_load(input_path), order or 1), fmt_name, output)


@main.command()
@common
def fan(input_path: str, order: int | None, output: str | None, fmt_name: str) -> None:
    """All regular triangulations (maximal cones of the secondary fan)."""
    _run(lambda: do_fan(_load(input_path), order or 1), fmt_name, output)


@main.command()
@common
@click.option("--weight", default=None, help="Comma-separated weight vector, e.g. 0,0,1,1.")
def triangulate(input_path: str, order: int | None, output: str | None, fmt_name: str,
                weight: str | None) -> None:
    """Regular triangulation induced by a weight (default: the file's chamber)."""
    _run(lambda: do_triangulate(_load(input_path), order or 1, weight), fmt_name, output)


@main.command()
@common
def ring(input_path: str, order: int | None, output: str | None, fmt_name: str) -> None:
    """Graded ring of the default chamber."""
    _run(lambda: do_ring(_load(input_path), order or 1), fmt_name, output)


@main.command()
@common
def series(input_path: str, order: int | None, output: str | None, fmt_name: str) -> None:
    """Truncated Γ-series (deformed when the offset is integral and the chamber unimodular)."""

    def body():
        problem = _load(input_path)
        return do_series(problem, _order(problem, order, 6))

    _run(body, fmt_name, output)


@main.command()
@common
@click.option("--lambda-bound", type=click.IntRange(min=1), default=None,
              help="Largest 1-norm of the box-equation vectors.")
def verify(input_path: str, order: int | None, output: str | None, fmt_name: str,
           lambda_bound: int | None) -> None:
    """Check the GKZ equations term by term; exit status 1 on any violation."""

    def body():
        problem = _load(input_path)
        return do_verify(problem, _order(problem, order, 8), lambda_bound)

    _run(body, fmt_name, output)


@main.command()
@common
@click.option("--signs", default=None, help="Comma-separated ±1 signs for the canonical coordinates.")
@click.option("--kappa", type=click.IntRange(min=1), default=None, help="Normalization of the prepotential.")
def mirror(input_path: str, order: int | None, output: str | None, fmt_name: str,
           signs: str | None, kappa: int | None) -> None:
    """Instanton numbers of a mirror model."""

    def body():
        problem = _load(input_path)
        if signs is not None:
            try:
                values = [int(s) for s in signs.split(",")]
            except ValueError:
                raise SchemaError("--signs: expected comma-separated integers") from None
            if any(v not in (1, -1) for v in values):
                raise SchemaError("--signs: entries must be 1 or -1")
        return do_mirror(problem, _order(problem, order, 9), signs, kappa)

    _run(body, fmt_name, output)


if __name__ == "__main__":  # pragma: no cover
    main()
