"""Graded quotient rings attached to a triangulation, and their annihilator quotients.

The degree-one part of the ring is identified with the dual of the relation
lattice, so every ring here is presented as a quotient of the polynomial ring
``ℤ[x_1..x_d]`` in which the generator ``ε_j`` is the linear form
``Σ_i B_{ij} x_i``. Each homogeneous piece is reduced to a ℤ-basis with the
Hermite normal form, preferring the smallest monomials in graded
lexicographic order as basis elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Iterable, Sequence

from . import intlin
from .errors import NotNilpotent, TopRankNotOne, TorsionError, ZeroElement
from .fan import RegularTriangulation
from .lattice import IndexSet, PointConfiguration, RelationLattice

Monomial = tuple[int, ...]
Poly = dict[Monomial, int]


def monomials(nvars: int, degree: int) -> list[Monomial]:
    """Monomials of a given degree, largest first in graded lexicographic order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exp = [0] * nvars
        for v in combo:
            exp[v] += 1
        out.append(tuple(exp))
    return sorted(out, reverse=True)


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def linear_form(coeffs: Sequence[int]) -> Poly:
    n = len(coeffs)
    return {tuple(int(i == j) for j in range(n)): int(c) for i, c in enumerate(coeffs) if c}


def poly_degree(p: Poly) -> int:
    degrees = {sum(m) for m in p}
    if len(degrees) != 1:
        raise ValueError("polynomial is not homogeneous")
    return degrees.pop()


def minimal_nonfaces(simplices: Iterable[Iterable[int]], n: int) -> list[IndexSet]:
    """Inclusion-minimal subsets of ``1..n`` contained in no simplex."""
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    faces = [frozenset(s) for s in simplices]

    def is_face(s: Iterable[int]) -> bool:
        s = frozenset(s)
        return any(s <= f for f in faces)

    out: list[IndexSet] = []
    for size in range(1, n + 1):
        for subset in combinations(range(1, n + 1), size):
            if is_face(subset):
                continue
            if all(is_face(sub) for sub in combinations(subset, size - 1)):
                out.append(subset)
    return out


def face_counts(simplices: Iterable[Iterable[int]], top: int) -> list[int]:
    """Number of faces with ``m`` vertices for ``m = 0..top``, the empty face included."""
    faces: set[frozenset] = set()
    for s in simplices:
        for size in range(len(s) + 1):
            faces.update(frozenset(c) for c in combinations(s, size))
    counts = [0] * (top + 1)
    for f in faces:
        counts[len(f)] += 1
    return counts


class GradedQuotientRing:
    """A graded quotient of ``ℤ[x_1..x_d]`` with a fixed ℤ-basis.

    Attributes
    ----------
    representatives:
        One homogeneous integer polynomial per basis element.
    degrees, ranks, offsets:
        Degree of each basis element, rank of each graded piece, and the
        index at which each piece starts.
    mult_table:
        ``mult_table[a][b]`` lists the nonzero ``(index, coefficient)`` pairs of
        the product of basis elements ``a`` and ``b``.
    generators:
        Images of the distinguished degree-one elements ``ε_j`` (may be empty).
    """

    def __init__(self, nvars: int, representatives: Sequence[Poly],
                 monomial_coords: dict[Monomial, tuple[int, ...]],
                 generator_forms: Sequence[Poly] = ()):
        self.nvars = nvars
        self.representatives = [dict(p) for p in representatives]
        self.degrees = [poly_degree(p) if p else 0 for p in self.representatives]
        if self.degrees != sorted(self.degrees):
            raise ValueError("basis must be sorted by degree")
        top = max(self.degrees) if self.degrees else -1
        self.ranks = [self.degrees.count(i) for i in range(top + 1)]
        self.offsets = [sum(self.ranks[:i]) for i in range(top + 1)]
        self.monomial_coords = dict(monomial_coords)
        self.rank = len(self.representatives)
        self.top_degree = top
        self.mult_table = [[self._product_coords(a, b) for b in range(self.rank)]
                           for a in range(self.rank)]
        self.generator_forms = [dict(p) for p in generator_forms]
        self.generators = [self.from_poly(p) for p in self.generator_forms]

    # -- conversions ---------------------------------------------------

    def poly_coords(self, p: Poly) -> list[Fraction]:
        out = [Fraction(0)] * self.rank
        for m, c in p.items():
            deg = sum(m)
            if deg > self.top_degree:
                continue
            block = self.monomial_coords[m]
            off = self.offsets[deg]
            for i, x in enumerate(block):
                if x:
                    out[off + i] += c * x
        return out

    def _product_coords(self, a: int, b: int) -> tuple[tuple[int, int], ...]:
        p = poly_mul(self.representatives[a], self.representatives[b])
        coords = self.poly_coords(p)
        return tuple((i, int(x)) for i, x in enumerate(coords) if x)

    def from_poly(self, p: Poly) -> "RingElement":
        return RingElement(self, tuple(self.poly_coords(p)))

    def element(self, coords: Sequence) -> "RingElement":
        if len(coords) != self.rank:
            raise ValueError("coordinate vector has the wrong length")
        return RingElement(self, tuple(Fraction(x) for x in coords))

    def one(self) -> "RingElement":
        return self.from_poly({(0,) * self.nvars: 1})

    def zero(self) -> "RingElement":
        return RingElement(self, (Fraction(0),) * self.rank)

    def variable(self, i: int) -> "RingElement":
        """Class of ``x_i`` (0-based)."""
        return self.from_poly(linear_form([int(j == i) for j in range(self.nvars)]))

    def basis_monomials(self) -> list[Monomial | None]:
        """Exponent vector of each basis element, or ``None`` if it is not a monomial."""
        out: list[Monomial | None] = []
        for p in self.representatives:
            if len(p) == 1 and next(iter(p.values())) == 1:
                out.append(next(iter(p)))
            else:
                out.append(None)
        return out

    def multiplication_matrix(self, x: "RingElement") -> list[list[Fraction]]:
        """``mat[r][s]`` is the coefficient of basis element ``r`` in ``x · e_s``."""
        cols = [(x * self.basis_element(s)).coords for s in range(self.rank)]
        return intlin.transpose(cols)

    def basis_element(self, i: int) -> "RingElement":
        return RingElement(self, tuple(Fraction(int(j == i)) for j in range(self.rank)))

    def top_form(self) -> list[Fraction]:
        """Linear functional reading off the single top-degree coordinate."""
        if self.ranks[-1] != 1:
            raise TopRankNotOne(f"top graded piece has rank {self.ranks[-1]}")
        return [Fraction(int(i == self.rank - 1)) for i in range(self.rank)]

    def with_basis(self, polys: Sequence[Poly]) -> "GradedQuotientRing":
        """Same ring with a different ℤ-basis (degree sorted, unimodular change)."""
        if len(polys) != self.rank:
            raise ValueError("wrong number of basis elements")
        polys = [dict(p) for p in polys]
        change = [self.poly_coords(p) for p in polys]  # rows: old coordinates of new basis
        new_degrees = [poly_degree(p) for p in polys]
        if new_degrees != self.degrees:
            raise ValueError("new basis must have the same degree profile")
        mat = intlin.transpose(change)
        det = intlin.determinant(mat)
        if abs(det) != 1:
            raise ValueError("basis change is not unimodular")
        inv = intlin.inverse(mat)
        coords: dict[Monomial, tuple[int, ...]] = {}
        for m, block in self.monomial_coords.items():
            deg = sum(m)
            full = [Fraction(0)] * self.rank
            off = self.offsets[deg]
            for i, x in enumerate(block):
                full[off + i] = Fraction(x)
            new = intlin.matvec(inv, full)
            coords[m] = tuple(int(v) for v in new[off: off + self.ranks[deg]])
        return GradedQuotientRing(self.nvars, polys, coords, self.generator_forms)

    def to_json(self) -> dict:
        mons = self.basis_monomials()
        return {
            "ranks": self.ranks,
            "basis": [list(m) if m is not None else
                      [[list(k), v] for k, v in sorted(p.items())]
                      for m, p in zip(mons, self.representatives)],
            "mult_table": [[[0] * self.rank if not entry else
                            [dict(entry).get(i, 0) for i in range(self.rank)]
                            for entry in row] for row in self.mult_table],
            "generators": [[_fmt(x) for x in g.coords] for g in self.generators],
        }


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: GradedQuotientRing
    coords: tuple[Fraction, ...]

    def __add__(self, other: "RingElement | int | Fraction") -> "RingElement":
        if not isinstance(other, RingElement):
            other = self.ring.one() * other
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, tuple(-a for a in self.coords))

    def __sub__(self, other: "RingElement | int | Fraction") -> "RingElement":
        return self + (-other)

    def __rsub__(self, other: "int | Fraction") -> "RingElement":
        return (-self) + other

    def __mul__(self, other: "RingElement | int | Fraction") -> "RingElement":
        if not isinstance(other, RingElement):
            f = Fraction(other)
            return RingElement(self.ring, tuple(a * f for a in self.coords))
        out = [Fraction(0)] * self.ring.rank
        table = self.ring.mult_table
        left = [(i, a) for i, a in enumerate(self.coords) if a]
        right = [(j, b) for j, b in enumerate(other.coords) if b]
        for i, a in left:
            row = table[i]
            for j, b in right:
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return RingElement(self.ring, tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.one() * other
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def component(self, degree: int) -> "RingElement":
        return RingElement(self.ring, tuple(a if d == degree else Fraction(0)
                                            for a, d in zip(self.coords, self.ring.degrees)))

    def constant_term(self) -> Fraction:
        return self.coords[0] if self.ring.degrees and self.ring.degrees[0] == 0 else Fraction(0)

    def is_homogeneous(self) -> bool:
        return len({d for a, d in zip(self.coords, self.ring.degrees) if a}) <= 1

    def degree(self) -> int:
        degs = {d for a, d in zip(self.coords, self.ring.degrees) if a}
        if len(degs) != 1:
            raise ValueError("element is zero or not homogeneous")
        return degs.pop()

    def inverse(self) -> "RingElement":
        """Inverse of a unit ``c + n`` with ``n`` nilpotent, by the geometric series."""
        c = self.constant_term()
        if c == 0:
            raise ZeroDivisionError("element is not a unit")
        nil = self * (1 / c) - 1
        term = self.ring.one()
        total = self.ring.one()
        for _ in range(self.ring.top_degree):
            term = term * (-nil)
            total = total + term
        return total * (1 / c)

    def check_nilpotent(self) -> None:
        if self.constant_term() != 0:
            raise NotNilpotent("element has a nonzero constant term")


def _quotient_from_relations(nvars: int, relation_rows: dict[int, list[list[int]]],
                             max_degree: int, generator_forms: Sequence[Poly] = ()
                             ) -> GradedQuotientRing:
    """Assemble a ring from per-degree relation lattices in monomial coordinates.

    ``relation_rows[i]`` spans the relations among the monomials of degree
    ``i`` (listed as by :func:`monomials`). The construction stops at the first
    degree with rank zero or at ``max_degree``.
    """
    reps: list[Poly] = []
    coords: dict[Monomial, tuple[int, ...]] = {}
    for deg in range(max_degree + 1):
        mons = monomials(nvars, deg)
        rows = [r for r in relation_rows.get(deg, []) if any(r)]
        basis_reps, block = _reduce_degree(mons, rows)
        if not basis_reps:
            break
        reps.extend(basis_reps)
        coords.update(block)
    return GradedQuotientRing(nvars, reps, coords, generator_forms)


def _reduce_degree(mons: list[Monomial], rows: list[list[int]]
                   ) -> tuple[list[Poly], dict[Monomial, tuple[int, ...]]]:
    m = len(mons)
    if not rows:
        block = {mon: tuple(int(i == j) for j in range(m)) for i, mon in enumerate(mons)}
        return [{mon: 1} for mon in mons], block
    h, _, pivots = hnf_rows(rows)
    if all(h[i][p] == 1 for i, p in enumerate(pivots)):
        free = [c for c in range(m) if c not in pivots]
        position = {c: i for i, c in enumerate(free)}
        block: dict[Monomial, tuple[int, ...]] = {}
        for c in free:
            block[mons[c]] = tuple(int(position[c] == i) for i in range(len(free)))
        for i, p in enumerate(pivots):
            block[mons[p]] = tuple(-h[i][c] for c in free)
        return [{mons[c]: 1} for c in free], block
    # Non-unit pivots: use a unimodular complement instead of monomials.
    if intlin.smith_invariants(h[: len(pivots)]) != [1] * len(pivots):
        raise TorsionError("graded piece has torsion")
    proj = intlin.integer_kernel(h[: len(pivots)], m)
    reps_vec = []
    for i in range(len(proj)):
        target = [int(i == j) for j in range(len(proj))]
        reps_vec.append(intlin.solve_integer(proj, target))
    block = {mon: tuple(row[c] for row in proj) for c, mon in enumerate(mons)}
    reps = [{mons[c]: v[c] for c in range(m) if v[c]} for v in reps_vec]
    return reps, block


def hnf_rows(rows: list[list[int]]):
    return intlin.hnf_with_transform(rows)


def build_ring(config: PointConfiguration, lattice: RelationLattice,
               simplices: Iterable[Iterable[int]]) -> GradedQuotientRing:
    """The ring ``ℤ[E]/(linear relations + Stanley–Reisner ideal)`` of a triangulation."""
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    simplices = [tuple(s) for s in simplices]
    d = lattice.rank
    forms = [linear_form([lattice.basis[i][j] for i in range(d)]) for j in range(lattice.size)]
    generators_sr = []
    for nonface in minimal_nonfaces(simplices, lattice.size):
        p: Poly = {(0,) * d: 1}
        for j in nonface:
            p = poly_mul(p, forms[j - 1])
        generators_sr.append((len(nonface), p))
    max_degree = config.rows
    relation_rows: dict[int, list[list[int]]] = {}
    for deg in range(max_degree + 1):
        mons = monomials(d, deg)
        index = {m: i for i, m in enumerate(mons)}
        rows = []
        for gdeg, g in generators_sr:
            if gdeg > deg:
                continue
            for mult in monomials(d, deg - gdeg):
                prod = poly_mul(g, {mult: 1})
                row = [0] * len(mons)
                for mon, c in prod.items():
                    row[index[mon]] += c
                rows.append(row)
        relation_rows[deg] = rows
    return _quotient_from_relations(d, relation_rows, max_degree, forms)


def poincare_check(ring: GradedQuotientRing, simplices: Iterable[Iterable[int]], k_plus_1: int) -> bool:
    """Compare graded ranks with the face-count form of the Poincaré polynomial."""
    if isinstance(simplices, RegularTriangulation):
        simplices = simplices.simplices
    counts = face_counts(list(simplices), k_plus_1)
    expected = [0] * (k_plus_1 + 1)
    for m, s in enumerate(counts):
        # s T^m (1 - T)^{k+1-m}
        e = k_plus_1 - m
        for i in range(e + 1):
            expected[m + i] += s * comb(e, i) * (-1) ** i
    ranks = ring.ranks + [0] * (k_plus_1 + 1 - len(ring.ranks))
    return ranks == expected


def quotient_by_annihilator(ring: GradedQuotientRing, x: RingElement) -> GradedQuotientRing:
    """``ℛ/Ann(x)``, built degreewise as the kernel of multiplication by ``x``."""
    if x.is_zero():
        raise ZeroElement("cannot quotient by the annihilator of zero")
    if not x.is_homogeneous():
        raise ValueError("element must be homogeneous")
    shift = x.degree()
    relation_rows: dict[int, list[list[int]]] = {}
    for deg in range(ring.top_degree + 1):
        mons = monomials(ring.nvars, deg)
        target = deg + shift
        if target > ring.top_degree:
            relation_rows[deg] = intlin.identity(len(mons))
            continue
        off = ring.offsets[target]
        size = ring.ranks[target]
        cols = []
        for mon in mons:
            prod = ring.from_poly({mon: 1}) * x
            cols.append(prod.coords[off: off + size])
        image = [intlin.clear_denominators(row) for row in intlin.transpose(cols)]
        relation_rows[deg] = intlin.integer_kernel(image, len(mons)) if size else \
            intlin.identity(len(mons))
    return _quotient_from_relations(ring.nvars, relation_rows, ring.top_degree, ring.generator_forms)


def project(element: RingElement, target: GradedQuotientRing) -> RingElement:
    """Image of an element under the quotient map to ``target`` (same polynomial ring)."""
    out = target.zero()
    for i, a in enumerate(element.coords):
        if a:
            out = out + target.from_poly(element.ring.representatives[i]) * a
    return out


def divide_into_quotient(value: RingElement, x: RingElement, target: GradedQuotientRing) -> RingElement:
    """The unique ``r`` in ``ℛ/Ann(x)`` with ``x · r = value`` in ``ℛ``."""
    source = value.ring
    cols = [(source.from_poly(rep) * x).coords for rep in target.representatives]
    sol = intlin.solve_rational(intlin.transpose(cols), value.coords)
    if sol is None:
        raise ZeroDivisionError("value is not a multiple of the divisor")
    return target.element(sol)


def tau_pairing(ring: GradedQuotientRing) -> list[list[Fraction]]:
    """Gram matrix of ``⟨a, b⟩ = τ(a* b)`` with ``a* = (-1)^{deg a} a``."""
    tau = ring.top_form()
    gram = []
    for r in range(ring.rank):
        er = ring.basis_element(r) * (-1) ** ring.degrees[r]
        row = []
        for s in range(ring.rank):
            prod = er * ring.basis_element(s)
            row.append(sum((a * b for a, b in zip(tau, prod.coords)), Fraction(0)))
        gram.append(row)
    return gram


def monodromy_invariant_forms(ring: GradedQuotientRing) -> list[list[list[Fraction]]]:
    """Basis of antisymmetric ``G`` with ``mat(x) G = -G mat(x)ᵗ`` for each ``x_i``.

    Here ``mat(x)[r][s]`` is the coefficient of ``e_s`` in ``x · e_r``, so the
    condition says that the bilinear form with Gram matrix ``G`` satisfies
    ``G(x a, b) = -G(a, x b)``.
    """
    r = ring.rank
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    index = {p: n for n, p in enumerate(pairs)}

    def entry(i: int, j: int) -> list[tuple[int, int]]:
        if i == j:
            return []
        if i < j:
            return [(index[(i, j)], 1)]
        return [(index[(j, i)], -1)]

    equations: list[list[Fraction]] = []
    for v in range(ring.nvars):
        mat = intlin.transpose(ring.multiplication_matrix(ring.variable(v)))
        for a in range(r):
            for b in range(r):
                eq = [Fraction(0)] * len(pairs)
                # (mat G)[a][b] + (G matᵗ)[a][b]
                for c in range(r):
                    if mat[a][c]:
                        for n, sgn in entry(c, b):
                            eq[n] += mat[a][c] * sgn
                    if mat[b][c]:
                        for n, sgn in entry(a, c):
                            eq[n] += mat[b][c] * sgn
                if any(eq):
                    equations.append(eq)
    sols = intlin.rational_kernel(equations, len(pairs))
    out = []
    for s in sols:
        g = [[Fraction(0)] * r for _ in range(r)]
        for (i, j), val in zip(pairs, s):
            g[i][j] = val
            g[j][i] = -val
        out.append(g)
    return out


def in_span(matrix: Sequence[Sequence], span: Sequence[Sequence[Sequence]]) -> bool:
    """Whether a matrix is a rational combination of the given matrices."""
    flat = [[x for row in m for x in row] for m in span]
    target = [x for row in matrix for x in row]
    if not flat:
        return not any(target)
    return intlin.solve_rational(intlin.transpose(flat), target) is not None
