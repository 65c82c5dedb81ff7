"""Exact integer and rational linear algebra on plain nested lists.

Matrices are lists of rows. Integer routines work with Python ``int`` and
rational routines with :class:`fractions.Fraction`, so nothing ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def submatrix_columns(m: Sequence[Sequence], cols: Sequence[int]) -> list[list]:
    return [[row[c] for c in cols] for row in m]


def hnf_with_transform(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, list[int]]:
    """Row-style Hermite normal form.

    Returns ``(H, U, pivots)`` with ``H = U m``, ``U`` unimodular, ``H`` in
    row echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``. ``pivots`` lists the pivot columns of the
    nonzero rows, which come first.
    """
    h = [list(map(int, row)) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity(rows)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nonzero = [i for i in range(r, rows) if h[i][c] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: abs(h[i][c]))
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
            clean = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return h, u, pivots


def hnf(m: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the row-style Hermite normal form."""
    h, _, pivots = hnf_with_transform(m)
    return h[: len(pivots)]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """A canonical ℤ-basis (as rows, in Hermite form) of ``{x : m x = 0}``."""
    n = ncols if ncols is not None else len(m[0])
    if not m:
        return identity(n)
    _, u, pivots = hnf_with_transform(transpose(m))
    kernel = u[len(pivots):]
    return hnf(kernel) if kernel else []


def solve_integer(m: Sequence[Sequence[int]], b: Sequence) -> list[int] | None:
    """Some integer ``x`` with ``m x = b``, or ``None``.

    ``b`` may be rational; a non-integral combination is reported as ``None``.
    """
    rows = len(m)
    n = len(m[0]) if rows else 0
    if n == 0:
        return [] if all(x == 0 for x in b) else None
    h, u, pivots = hnf_with_transform(transpose(m))
    residual = [Fraction(x) for x in b]
    y: list[int] = [0] * n
    for i, p in enumerate(pivots):
        q = residual[p] / h[i][p]
        if q.denominator != 1:
            return None
        y[i] = int(q)
        if y[i]:
            residual = [r - y[i] * x for r, x in zip(residual, h[i])]
    if any(residual):
        return None
    return [sum(u[i][j] * y[i] for i in range(n)) for j in range(n)]


def in_lattice(generators: Sequence[Sequence[int]], v: Sequence) -> bool:
    """Whether ``v`` is an integer combination of the given generator vectors."""
    if not generators:
        return all(x == 0 for x in v)
    return solve_integer(transpose(generators), v) is not None


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix, each dividing the next."""
    h = [list(map(int, row)) for row in m]
    if not h or not h[0]:
        return []
    while True:
        h = hnf(h)
        if not h:
            return []
        h = hnf(transpose(h))
        if all(h[i][j] == 0 for i in range(len(h)) for j in range(len(h[0])) if i != j):
            break
    diag = [abs(h[i][i]) for i in range(min(len(h), len(h[0]))) if h[i][i]]
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            if g:
                diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over ℚ together with pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve_rational(m: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some rational ``x`` with ``m x = b`` (free variables set to zero), or ``None``."""
    n = len(m[0])
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = red[i][n]
    return x


def rational_kernel(m: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    """Basis of the rational null space of ``m`` (``n`` columns)."""
    if not m:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def clear_denominators(v: Sequence[Fraction]) -> list[int]:
    """Smallest positive multiple of ``v`` with coprime integer entries."""
    lcm = 1
    for x in v:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(Fraction(x) * lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints
