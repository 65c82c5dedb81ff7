"""Chambers of the secondary fan and the regular triangulations they induce."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from . import intlin
from .errors import NonGenericWeight, NotATriangulation, OnWall
from .lattice import (
    IndexSet,
    PointConfiguration,
    RelationLattice,
    circuits,
    complement,
    normalize_index_set,
    simplex_volume,
)
from .polyhedra import strict_cone_point


@dataclass(frozen=True)
class RegularTriangulation:
    """Sorted simplices (1-based labels) plus an integral weight inside the chamber."""

    simplices: tuple[IndexSet, ...]
    witness: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        simplices = tuple(sorted(tuple(sorted(s)) for s in self.simplices))
        object.__setattr__(self, "simplices", simplices)
        object.__setattr__(self, "witness", tuple(Fraction(x) for x in self.witness))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularTriangulation):
            return NotImplemented
        return self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)


def weight_to_t(lattice: RelationLattice, alpha: Sequence) -> list[Fraction]:
    """``t = Σ α_j b_j``."""
    return [sum((Fraction(a) * x for a, x in zip(alpha, row)), Fraction(0)) for row in lattice.basis]


@lru_cache(maxsize=64)
def _square_blocks(basis: tuple[tuple[int, ...], ...]) -> tuple[tuple[IndexSet, tuple], ...]:
    """Every invertible ``d × d`` block of the basis with its inverse."""
    d = len(basis)
    n = len(basis[0]) if d else 0
    out = []
    for subset in combinations(range(1, n + 1), d):
        block = [[row[j - 1] for j in subset] for row in basis]
        if intlin.determinant(block) != 0:
            inv = tuple(tuple(r) for r in intlin.inverse(block))
            out.append((subset, inv))
    return tuple(out)


def vertex_list(lattice: RelationLattice, t: Sequence) -> list[IndexSet]:
    """All ``I`` such that ``t`` is a strictly positive combination of independent ``b_j``, ``j ∉ I``."""
    n = lattice.size
    d = lattice.rank
    t = [Fraction(x) for x in t]
    if len(t) != d:
        raise ValueError(f"t must have {d} coordinates")
    found: list[IndexSet] = []
    if not any(t):
        return [tuple(range(1, n + 1))]
    for subset, inv in _square_blocks(lattice.basis):
        tau = intlin.matvec(inv, t)
        if all(x > 0 for x in tau):
            found.append(complement(subset, n))
    # Smaller independent sets only occur when t lies on a wall.
    for size in range(1, d):
        for subset in combinations(range(1, n + 1), size):
            cols = lattice.columns(subset)
            if intlin.rank(cols) != size:
                continue
            tau = intlin.solve_rational(cols, t)
            if tau is not None and all(x > 0 for x in tau):
                found.append(complement(subset, n))
    return sorted(found)


def _triangulation_from_t(config: PointConfiguration, lattice: RelationLattice,
                          t: Sequence) -> tuple[IndexSet, ...]:
    lists = vertex_list(lattice, t)
    if any(len(s) != config.rows for s in lists):
        raise NonGenericWeight("weight lies on a wall of the secondary fan")
    return tuple(lists)


def triangulation_from_weight(config: PointConfiguration, lattice: RelationLattice,
                              alpha: Sequence) -> RegularTriangulation:
    """The regular triangulation induced by a generic weight vector."""
    if len(alpha) != config.size:
        raise ValueError(f"weight must have {config.size} entries")
    simplices = _triangulation_from_t(config, lattice, weight_to_t(lattice, alpha))
    return RegularTriangulation(simplices, tuple(alpha))


def weight_from_t(lattice: RelationLattice, t: Sequence) -> tuple[Fraction, ...]:
    """An integral weight ``α`` with ``Σ α_j b_j`` a positive multiple of ``t``."""
    n = lattice.size
    if lattice.rank == 0:
        return tuple(Fraction(0) for _ in range(n))
    subset, inv = _square_blocks(lattice.basis)[0]
    coeffs = intlin.matvec(inv, [Fraction(x) for x in t])
    alpha = [Fraction(0)] * n
    for j, x in zip(subset, coeffs):
        alpha[j - 1] = x
    return tuple(Fraction(x) for x in intlin.clear_denominators(alpha))


@lru_cache(maxsize=64)
def _total_volume(config: PointConfiguration, lattice: RelationLattice) -> int:
    d = lattice.rank
    if d == 0:
        return simplex_volume(config, range(1, config.size + 1))
    for m in range(2, 200):
        t = [m ** i for i in range(d)]
        try:
            simplices = _triangulation_from_t(config, lattice, t)
        except NonGenericWeight:
            continue
        return sum(simplex_volume(config, s) for s in simplices)
    raise RuntimeError("no generic weight found on the moment curve")


def total_volume(config: PointConfiguration, lattice: RelationLattice) -> int:
    """Normalized volume of the convex hull of the points."""
    return _total_volume(config, lattice)


def _mask(labels: Iterable[int]) -> int:
    m = 0
    for j in labels:
        m |= 1 << j
    return m


@lru_cache(maxsize=64)
def _circuit_masks(config: PointConfiguration) -> tuple[tuple[int, int], ...]:
    return tuple((_mask(p), _mask(q)) for p, q in circuits(config))


def _proper(mask1: int, mask2: int, circ: Sequence[tuple[int, int]]) -> bool:
    """Two simplices meet in a common face iff no circuit splits across them."""
    for pos, neg in circ:
        if pos & ~mask1 == 0 and neg & ~mask2 == 0:
            return False
    return True


def check_triangulation(config: PointConfiguration, lattice: RelationLattice,
                        simplices: Iterable[Iterable[int]]) -> tuple[IndexSet, ...]:
    """Validate a triangulation and return it in canonical order."""
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    simp = tuple(sorted(normalize_index_set(s, config.size) for s in simplices))
    if len(set(simp)) != len(simp):
        raise NotATriangulation("repeated simplex")
    vol = 0
    for s in simp:
        if len(s) != config.rows:
            raise NotATriangulation(f"simplex {s} does not have {config.rows} vertices")
        v = simplex_volume(config, s)
        if v == 0:
            raise NotATriangulation(f"simplex {s} is degenerate")
        vol += v
    if vol != total_volume(config, lattice):
        raise NotATriangulation("simplex volumes do not add up to the hull volume")
    circ = _circuit_masks(config)
    masks = [_mask(s) for s in simp]
    for a, b in combinations(masks, 2):
        if not (_proper(a, b, circ) and _proper(b, a, circ)):
            raise NotATriangulation("two simplices overlap improperly")
    return simp


def chamber_inequalities(lattice: RelationLattice, simplices: Iterable[IndexSet]) -> list[list[Fraction]]:
    """Rows ``g`` such that the chamber interior is ``{t : g · t > 0}``."""
    blocks = dict(_square_blocks(lattice.basis))
    rows: list[list[Fraction]] = []
    for s in simplices:
        comp = complement(s, lattice.size)
        rows.extend(list(r) for r in blocks[comp])
    return rows


def chamber_point(lattice: RelationLattice, simplices: Iterable[IndexSet]) -> list[Fraction] | None:
    """An interior point of the chamber cone, or ``None`` when it is not full dimensional."""
    rows = chamber_inequalities(lattice, simplices)
    if not rows:
        return []
    return strict_cone_point(rows)


def enumerate_regular_triangulations(config: PointConfiguration,
                                     lattice: RelationLattice) -> list[RegularTriangulation]:
    """Every regular triangulation, each with an integral witness weight.

    Candidate simplices are assembled depth first into pairwise properly
    intersecting collections of the right total volume; a collection is kept
    when its chamber cone has an interior point.
    """
    target = total_volume(config, lattice)
    candidates = []
    for s in combinations(range(1, config.size + 1), config.rows):
        v = simplex_volume(config, s)
        if v:
            candidates.append((s, v, _mask(s)))
    circ = _circuit_masks(config)
    count = len(candidates)
    compatible = [
        [i != j and _proper(candidates[i][2], candidates[j][2], circ)
         and _proper(candidates[j][2], candidates[i][2], circ) for j in range(count)]
        for i in range(count)
    ]
    results: list[RegularTriangulation] = []

    def search(chosen: list[int], allowed: list[int], volume: int) -> None:
        if volume == target:
            simplices = tuple(candidates[i][0] for i in chosen)
            if lattice.rank == 0:
                results.append(RegularTriangulation(simplices, ()))
                return
            point = chamber_point(lattice, simplices)
            if point is not None:
                results.append(RegularTriangulation(simplices, weight_from_t(lattice, point)))
            return
        remaining = sum(candidates[i][1] for i in allowed)
        if volume + remaining < target:
            return
        for pos, i in enumerate(allowed):
            v = candidates[i][1]
            if volume + v > target:
                continue
            nxt = [j for j in allowed[pos + 1:] if compatible[i][j]]
            search(chosen + [i], nxt, volume + v)

    search([], list(range(count)), 0)
    return sorted(results, key=lambda tr: tr.simplices)


def is_unimodular(config: PointConfiguration, simplices: Iterable[Iterable[int]]) -> bool:
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    return all(simplex_volume(config, s) == 1 for s in simplices)


def gkz_vector(config: PointConfiguration, simplices: Iterable[Iterable[int]]) -> tuple[int, ...]:
    """Per point, the total volume of the simplices containing it."""
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    q = [0] * config.size
    for s in simplices:
        v = simplex_volume(config, s)
        for j in s:
            q[j - 1] += v
    return tuple(q)


def secondary_polytope(config: PointConfiguration,
                       lattice: RelationLattice) -> dict[RegularTriangulation, tuple[int, ...]]:
    return {tr: gkz_vector(config, tr) for tr in enumerate_regular_triangulations(config, lattice)}


# Lauricella F_D family -----------------------------------------------------

def fd_configuration(k: int) -> tuple[PointConfiguration, RelationLattice]:
    """Points ``(0, e_i)`` and ``(1, e_i)`` with the standard relation rows.

    Relation row ``i`` (for ``i = 1..k-1``) is ``e_1 - e_{i+1} - e_{k+1} + e_{k+i+1}``,
    so weight coordinate ``i`` plays the role of ``t_{i+1}``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    cols = [(0,) + tuple(int(i == j) for i in range(k)) for j in range(k)]
    cols += [(1,) + tuple(int(i == j) for i in range(k)) for j in range(k)]
    config = PointConfiguration.from_columns(cols, f"fd-k{k}")
    basis = []
    for i in range(1, k):
        row = [0] * (2 * k)
        row[0] += 1
        row[i] -= 1
        row[k] -= 1
        row[k + i] += 1
        basis.append(tuple(row))
    return config, RelationLattice(tuple(basis), config)


def fd_triangulation(k: int, tau: Sequence[int]) -> RegularTriangulation:
    """Staircase triangulation attached to a permutation of ``1..k``."""
    tau = tuple(int(x) for x in tau)
    if sorted(tau) != list(range(1, k + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{k}")
    simplices = []
    for j in range(1, k + 1):
        lower = {tau[i - 1] for i in range(j, k + 1)}
        upper = {k + tau[i - 1] for i in range(1, j + 1)}
        simplices.append(tuple(sorted(lower | upper)))
    # t_{tau(i)} increasing in i; shift so that t_1 = 0.
    values = [0] * k
    for rank_, label in enumerate(tau):
        values[label - 1] = rank_
    t = [values[i] - values[0] for i in range(1, k)]
    _, lattice = fd_configuration(k)
    return RegularTriangulation(tuple(simplices), weight_from_t(lattice, t))


def fd_permutation_from_weight(k: int, t: Sequence) -> tuple[int, ...]:
    """Permutation listing ``1..k`` in increasing order of ``(0, t_2, …, t_k)``."""
    values = [Fraction(0)] + [Fraction(x) for x in t]
    if len(values) != k:
        raise ValueError(f"expected {k - 1} coordinates")
    if len(set(values)) != k:
        raise OnWall("two coordinates coincide")
    return tuple(i + 1 for i in sorted(range(k), key=lambda i: values[i]))


def fd_gkz_vector(k: int, tau: Sequence[int]) -> tuple[int, ...]:
    """Closed form of the GKZ vector of a staircase triangulation."""
    inv = [0] * k
    for pos, label in enumerate(tau, start=1):
        inv[label - 1] = pos
    return tuple(inv) + tuple(k + 1 - x for x in inv)


def all_fd_triangulations(k: int) -> list[RegularTriangulation]:
    return [fd_triangulation(k, p) for p in permutations(range(1, k + 1))]
