"""Point configurations, their relation lattices, and integrality checks.

Points are labelled ``1..N`` in every index set exposed by the public API,
while vectors are ordinary 0-based Python lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import intlin
from .errors import (
    BadIndexSet,
    ConsistencyError,
    DuplicatePoints,
    NoHomogeneity,
    RankDeficient,
    SingularComplement,
    Unsolvable,
)

IndexSet = tuple[int, ...]


def normalize_index_set(indices: Iterable[int], n: int) -> IndexSet:
    """Sorted tuple of 1-based labels, validated against ``1..n``."""
    out = tuple(sorted(int(i) for i in indices))
    if len(set(out)) != len(out) or any(i < 1 or i > n for i in out):
        raise BadIndexSet(f"index set {out} is not a subset of 1..{n}")
    return out


@dataclass(frozen=True)
class PointConfiguration:
    """The points ``a_1..a_N`` of ℤ^{k+1}, stored as the columns of ``matrix``."""

    matrix: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("point matrix must be a nonempty rectangular array")
        cols = self.points
        if len(set(cols)) != len(cols):
            raise DuplicatePoints("configuration contains repeated points")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], name: str = "") -> "PointConfiguration":
        return cls(tuple(zip(*columns)), name)

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def size(self) -> int:
        return len(self.matrix[0])

    @property
    def points(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.matrix))

    def columns(self, labels: Iterable[int]) -> list[list[int]]:
        """Submatrix formed by the points with the given 1-based labels."""
        return [[row[j - 1] for j in labels] for row in self.matrix]


@dataclass(frozen=True)
class RelationLattice:
    """A ℤ-basis of the relations ``Σ ℓ_j a_j = 0`` among the points.

    The rows of ``basis`` span the lattice; the columns are the vectors
    ``b_j`` used for chamber computations.
    """

    basis: tuple[tuple[int, ...], ...]
    config: PointConfiguration = field(compare=False)

    def __post_init__(self) -> None:
        basis = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", basis)
        cfg = self.config
        n = cfg.size
        if any(len(row) != n for row in basis):
            raise ConsistencyError("relation rows have the wrong length")
        for row in basis:
            if any(intlin.matvec(cfg.matrix, row)):
                raise ConsistencyError(f"row {list(row)} is not a relation among the points")
        expected = n - intlin.rank(cfg.matrix)
        if len(basis) != expected:
            raise ConsistencyError(f"expected {expected} relation rows, got {len(basis)}")
        if basis and intlin.smith_invariants(basis) != [1] * len(basis):
            raise ConsistencyError("relation rows do not form a ℤ-basis of the lattice")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.config.size

    @cached_property
    def vectors(self) -> tuple[tuple[int, ...], ...]:
        """The column vectors ``b_1..b_N`` of the basis matrix."""
        if not self.basis:
            return tuple(() for _ in range(self.size))
        return tuple(zip(*self.basis))

    def columns(self, labels: Iterable[int]) -> list[list[int]]:
        return [[row[j - 1] for j in labels] for row in self.basis]

    def element(self, coefficients: Sequence[int]) -> tuple[int, ...]:
        """The lattice vector ``Σ n_i (row i)``."""
        out = [0] * self.size
        for n, row in zip(coefficients, self.basis):
            if n:
                out = [o + n * x for o, x in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.size or any(intlin.matvec(self.config.matrix, v)):
            return False
        return all(Fraction(x).denominator == 1 for x in v)


def kernel_basis(config: PointConfiguration) -> RelationLattice:
    """Canonical (Hermite form) basis of the relation lattice."""
    if intlin.rank(config.matrix) < config.rows:
        raise RankDeficient("point matrix does not have full row rank")
    rows = intlin.integer_kernel(config.matrix, config.size)
    return RelationLattice(tuple(map(tuple, rows)), config)


def config_from_relations(basis: Sequence[Sequence[int]], name: str = "") -> PointConfiguration:
    """Rebuild points from a relation basis.

    When the basis has the shape ``(B̃ | I_d)`` the points are the columns of
    ``(I | -B̃ᵗ)``; otherwise the rows of the integer kernel of the basis
    matrix are used.
    """
    b = [list(map(int, row)) for row in basis]
    d = len(b)
    n = len(b[0])
    tail = [row[n - d:] for row in b]
    if tail == intlin.identity(d):
        m = n - d
        rows = [[int(i == j) for j in range(m)] + [-b[r][i] for r in range(d)] for i in range(m)]
    else:
        rows = intlin.integer_kernel(b, n)
    return PointConfiguration(tuple(map(tuple, rows)), name)


def homogeneity_vector(config: PointConfiguration) -> tuple[int, ...]:
    """Integer functional ``h`` with ``h · a_j = 1`` for every point."""
    h = intlin.solve_integer(intlin.transpose(config.matrix), [1] * config.size)
    if h is None:
        raise NoHomogeneity("no integral functional takes the value 1 on every point")
    return tuple(h)


def check_generates(config: PointConfiguration) -> bool:
    """Whether the points generate ℤ^{k+1} as an abelian group."""
    inv = intlin.smith_invariants(config.matrix)
    return len(inv) == config.rows and all(x == 1 for x in inv)


def simplex_volume(config: PointConfiguration, labels: Iterable[int]) -> int:
    """Normalized volume ``|det(a_i : i ∈ I)|`` of a (k+1)-subset."""
    idx = normalize_index_set(labels, config.size)
    if len(idx) != config.rows:
        raise BadIndexSet(f"need {config.rows} indices, got {len(idx)}")
    return abs(int(intlin.determinant(config.columns(idx))))


def complement(labels: Iterable[int], n: int) -> IndexSet:
    s = set(labels)
    return tuple(j for j in range(1, n + 1) if j not in s)


def enumeration_bound(lattice: RelationLattice, labels: Iterable[int]) -> Fraction:
    """Largest entry modulus of ``(B_{J'})^{-1} B`` for the complement ``J'`` of ``J``."""
    n = lattice.size
    idx = normalize_index_set(labels, n)
    if len(idx) != n - lattice.rank:
        raise BadIndexSet(f"need {n - lattice.rank} indices, got {len(idx)}")
    comp = complement(idx, n)
    square = lattice.columns(comp)
    if intlin.determinant(square) == 0:
        raise SingularComplement(f"complement {comp} has a singular relation block")
    prod = intlin.matmul(intlin.inverse(square), lattice.basis)
    return max(abs(x) for row in prod for x in row)


def solvable_with_free(config: PointConfiguration, free: Iterable[int], c: Sequence) -> bool:
    """Whether ``Σ γ_j a_j = c`` has a solution with ``γ_j`` integral off ``free``."""
    free = tuple(free)
    fixed = complement(free, config.size)
    if free:
        # Rows annihilating the span of the free points.
        ann = intlin.rational_kernel(intlin.transpose(config.columns(free)), config.rows)
        proj = [intlin.clear_denominators(v) for v in ann]
    else:
        proj = intlin.identity(config.rows)
    if not proj:
        return True
    target = intlin.matvec(proj, [Fraction(x) for x in c])
    gens = [intlin.matvec(proj, [row[j - 1] for row in config.matrix]) for j in fixed]
    return intlin.in_lattice(gens, target)


def gamma_class_count(config: PointConfiguration, lattice: RelationLattice,
                      labels: Iterable[int], c: Sequence) -> int:
    """Number of lattice-congruence classes of solutions integral off ``J``.

    The count is taken on the relation side as ``|det B_{J'}|``; it agrees
    with the simplex volume by the determinant identity between the two
    sides.
    """
    idx = normalize_index_set(labels, config.size)
    if len(idx) != config.rows:
        raise BadIndexSet(f"need {config.rows} indices, got {len(idx)}")
    if intlin.determinant(config.columns(idx)) == 0:
        raise SingularComplement(f"points {idx} are linearly dependent")
    if not solvable_with_free(config, idx, c):
        raise Unsolvable("no solution with integral entries off the index set")
    comp = complement(idx, config.size)
    if not comp:
        return 1
    return abs(int(intlin.determinant(lattice.columns(comp))))


def is_resonant(config: PointConfiguration, lattice: RelationLattice,
                simplices: Iterable[Iterable[int]], c: Sequence) -> bool:
    """Resonance test over all pairs of distinct simplices of a triangulation."""
    from .fan import check_triangulation

    simplices = check_triangulation(config, lattice, simplices)
    for s1, s2 in combinations(simplices, 2):
        shared = tuple(sorted(set(s1) & set(s2)))
        if solvable_with_free(config, shared, c):
            return True
    return False


def circuits(config: PointConfiguration) -> list[tuple[IndexSet, IndexSet]]:
    """All circuits as ``(positive part, negative part)`` pairs, both orientations."""
    n = config.size
    out = []
    for size in range(2, min(n, config.rows + 1) + 1):
        for subset in combinations(range(1, n + 1), size):
            cols = config.columns(subset)
            kern = intlin.rational_kernel(cols, size)
            if len(kern) != 1 or any(x == 0 for x in kern[0]):
                continue
            v = kern[0]
            pos = tuple(j for j, x in zip(subset, v) if x > 0)
            neg = tuple(j for j, x in zip(subset, v) if x < 0)
            out.append((pos, neg))
            out.append((neg, pos))
    return out
