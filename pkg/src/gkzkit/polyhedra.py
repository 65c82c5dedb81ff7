"""Fourier–Motzkin elimination for open polyhedral cones.

The single question answered here is whether a homogeneous system of strict
inequalities ``g · t > 0`` has a rational solution, and if so to produce
one. Elimination keeps every intermediate system so a point can be rebuilt
by back-substitution, choosing each coordinate strictly inside its interval.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _normalize(row: Sequence) -> tuple[int, ...]:
    """Positive multiple of ``row`` with coprime integer entries."""
    den = 1
    for x in row:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    ints = [int(Fraction(x) * den) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def strict_cone_point(rows: Sequence[Sequence]) -> list[Fraction] | None:
    """A rational ``t`` with ``g · t > 0`` for every row ``g``, or ``None``."""
    if not rows:
        return None
    dim = len(rows[0])
    system = sorted({_normalize(r) for r in rows})
    stages: list[list[tuple[int, ...]]] = []
    for var in reversed(range(dim)):
        stages.append(system)
        pos = [r for r in system if r[var] > 0]
        neg = [r for r in system if r[var] < 0]
        rest = {r for r in system if r[var] == 0}
        for p in pos:
            for q in neg:
                combo = [-q[var] * x + p[var] * y for x, y in zip(p, q)]
                rest.add(_normalize(combo))
        system = sorted(rest)
        if any(not any(r) for r in system):
            return None
    point: list[Fraction] = [Fraction(0)] * dim
    for var, constraints in zip(range(dim), reversed(stages)):
        lo: Fraction | None = None
        hi: Fraction | None = None
        for r in constraints:
            if r[var] == 0:
                continue
            # r[var] * t_var + (known part) > 0, other unknowns are absent.
            known = sum(Fraction(x) * y for x, y in zip(r[:var], point[:var]))
            bound = -known / r[var]
            if r[var] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if not lo < hi:
                return None
            value = (lo + hi) / 2
        elif lo is not None:
            value = lo + 1
        elif hi is not None:
            value = hi - 1
        else:
            value = Fraction(0)
        point[var] = value
    if all(sum(Fraction(x) * y for x, y in zip(r, point)) > 0 for r in rows):
        return point
    return None
