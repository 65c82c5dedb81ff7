"""Truncated Γ-series: plain rational ones and nilpotent-deformed ring-valued ones."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Iterable, Sequence

from . import intlin
from .errors import NonNormalizable, NotNilpotent, NotUnimodular, PreconditionError
from .fan import RegularTriangulation, chamber_inequalities, is_unimodular
from .lattice import PointConfiguration, RelationLattice
from .polyhedra import strict_cone_point
from .ring import GradedQuotientRing, RingElement

DEFAULT_ORDER = 10

Coefficient = "Fraction | RingElement"


def pochhammer(s, n: int) -> Fraction:
    """Rising factorial ``s (s+1) … (s+n-1)``."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    out = Fraction(1)
    s = Fraction(s)
    for i in range(n):
        out *= s + i
    return out


def gamma_ratio_deformed(m: int, e: RingElement) -> RingElement:
    """``Γ(1+e)/Γ(m+1+e)`` for an integer ``m`` and a nilpotent ``e``."""
    if any(a for a, d in zip(e.coords, e.ring.degrees) if d == 0):
        raise NotNilpotent("deformation parameter has a constant term")
    one = e.ring.one()
    if m == 0:
        return one
    if m > 0:
        prod = one
        for i in range(1, m + 1):
            prod = prod * (e + i)
        return prod.inverse()
    prod = one
    for i in range(0, -m):
        prod = prod * (e - i)
    return prod


def plain_coefficient(gamma: Sequence, ell: Sequence[int]) -> Fraction:
    """``∏_j Γ(γ_j+1)/Γ(γ_j+ℓ_j+1)`` written with Pochhammer symbols."""
    numerator = Fraction(1)
    denominator = Fraction(1)
    for g, l in zip(gamma, ell):
        g = Fraction(g)
        if l >= 0:
            denominator *= pochhammer(g + 1, l)
        else:
            numerator *= pochhammer(g + l + 1, -l)
    if denominator == 0:
        raise NonNormalizable("shift crosses a pole of the normalizing Γ factor")
    return numerator / denominator


def _index_region(d: int, order: int, signed: bool) -> list[tuple[int, ...]]:
    lo = -order if signed else 0
    out = []
    for n in product(range(lo, order + 1), repeat=d):
        size = sum(abs(x) for x in n)
        if size <= order:
            out.append(n)
    return sorted(out, key=lambda n: (sum(abs(x) for x in n), tuple(-x for x in n)))


@dataclass(frozen=True, eq=False)
class GammaData:
    """Offset, deformation, chamber, and adapted basis of a Γ-series.

    ``epsilon`` is empty for plain series. The adapted basis rows must lie
    in the dual cone of the chamber; term ``n`` of the series then sits at
    ``ℓ = Σ n_i β_i``.
    """

    config: PointConfiguration
    lattice: RelationLattice
    gamma: tuple[Fraction, ...]
    chamber: RegularTriangulation
    adapted_basis: tuple[tuple[int, ...], ...]
    epsilon: tuple[RingElement, ...] = ()
    c: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma", tuple(Fraction(x) for x in self.gamma))
        object.__setattr__(self, "adapted_basis", tuple(tuple(int(x) for x in r) for r in self.adapted_basis))
        if len(self.gamma) != self.config.size:
            raise ValueError("gamma has the wrong length")
        if self.epsilon and len(self.epsilon) != self.config.size:
            raise ValueError("epsilon has the wrong length")
        c = intlin.matvec(self.config.matrix, self.gamma)
        object.__setattr__(self, "c", tuple(Fraction(x) for x in c))
        basis_ok = (len(self.adapted_basis) == self.lattice.rank
                    and all(self.lattice.contains(r) for r in self.adapted_basis)
                    and (not self.adapted_basis
                         or abs(intlin.determinant(_coordinates(self.lattice, self.adapted_basis))) == 1))
        if not basis_ok:
            raise PreconditionError("adapted basis is not a basis of the relation lattice")
        rows = chamber_inequalities(self.lattice, self.chamber.simplices)
        coords = _coordinates(self.lattice, self.adapted_basis)
        for beta, n in zip(self.adapted_basis, coords):
            if strict_cone_point(rows + [[-x for x in n]]) is not None:
                raise PreconditionError(f"{beta} pairs negatively with the chamber")
        if coords:
            cols = intlin.transpose(coords)
            for r in rows:
                if any(x < 0 for x in intlin.solve_rational(cols, list(r))):
                    raise PreconditionError("adapted basis does not generate the chamber's relation monoid")

    @property
    def ring(self) -> GradedQuotientRing | None:
        return self.epsilon[0].ring if self.epsilon else None

    def ell(self, n: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.config.size
        for k, row in zip(n, self.adapted_basis):
            if k:
                out = [o + k * x for o, x in zip(out, row)]
        return tuple(out)


def _coordinates(lattice: RelationLattice, vectors: Iterable[Sequence[int]]) -> list[list[Fraction]]:
    """Coordinates of lattice vectors with respect to the lattice basis rows."""
    basis_t = intlin.transpose(lattice.basis)
    out = []
    for v in vectors:
        sol = intlin.solve_rational(basis_t, list(v))
        if sol is None:
            raise PreconditionError(f"{list(v)} is not in the relation lattice")
        out.append(sol)
    return out


def adapted_basis(lattice: RelationLattice, chamber: RegularTriangulation) -> tuple[tuple[int, ...], ...]:
    """Lattice basis generating the monoid of relations that pair nonnegatively with the chamber.

    The basis rows of the lattice are returned unchanged when they already
    qualify. Otherwise the dual cone of the chamber must be simplicial with
    primitive edge vectors forming a basis of the lattice; those edges are
    returned.
    """
    d = lattice.rank
    if d == 0:
        return ()
    rows = chamber_inequalities(lattice, chamber.simplices)
    edges = sorted({tuple(intlin.clear_denominators(r)) for r in rows})

    def generates(candidate) -> bool:
        if abs(intlin.determinant(candidate)) != 1:
            return False
        cols = intlin.transpose(candidate)
        return all(all(x >= 0 for x in intlin.solve_rational(cols, list(r))) for r in edges)

    unit = [[int(i == j) for j in range(d)] for i in range(d)]
    # The unit rows must also lie in the dual cone, which the edge rows do by construction.
    if generates(unit) and all(strict_cone_point(rows + [[-x for x in n]]) is None for n in unit):
        return lattice.basis
    for candidate in combinations(edges, d):
        if generates(list(candidate)):
            return tuple(lattice.element(n) for n in candidate)
    raise PreconditionError("the chamber's relation monoid is not generated by a lattice basis")


@dataclass(frozen=True, eq=False)
class TruncatedGammaSeries:
    """Terms of a Γ-series indexed by multi-indices ``n`` (``ℓ = Σ n_i β_i``).

    ``retained`` lists every evaluated multi-index, including those whose
    coefficient vanished; ``terms`` holds the nonzero ones.
    """

    data: GammaData
    order: int
    terms: dict[tuple[int, ...], "Fraction | RingElement"]
    retained: frozenset[tuple[int, ...]]

    def coefficient(self, n: Sequence[int]):
        n = tuple(n)
        if n in self.terms:
            return self.terms[n]
        if n not in self.retained:
            raise KeyError(f"multi-index {n} was not evaluated")
        return self.data.ring.zero() if self.data.ring else Fraction(0)

    def to_json(self) -> dict:
        def fmt(x: Fraction) -> str:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        out = []
        for n in sorted(self.terms, key=lambda n: (sum(n), tuple(-x for x in n))):
            coeff = self.terms[n]
            coords = coeff.coords if isinstance(coeff, RingElement) else (coeff,)
            out.append({"n": list(n), "coeff": [fmt(x) for x in coords]})
        return {"order": self.order, "terms": out}


def expand_plain(data: GammaData, order: int = DEFAULT_ORDER, signed: bool = False) -> TruncatedGammaSeries:
    """Plain Γ-series through total degree ``order`` in the adapted coordinates."""
    if data.epsilon:
        raise ValueError("plain expansion expects zero deformation")
    terms = {}
    region = _index_region(data.lattice.rank, order, signed)
    for n in region:
        value = plain_coefficient(data.gamma, data.ell(n))
        if value:
            terms[n] = value
    return TruncatedGammaSeries(data, order, terms, frozenset(region))


def expand_deformed(data: GammaData, order: int = DEFAULT_ORDER, signed: bool = True) -> TruncatedGammaSeries:
    """Ring-valued Γ-series ``Σ_ℓ ∏_j Γ(1+ε_j)/Γ(γ_j+ℓ_j+1+ε_j) u^{γ+ℓ+ε}``.

    With ``signed`` the evaluated region also contains multi-indices with
    negative entries, which lets the verifier compare terms across the
    boundary of the cone; those coefficients vanish by the face condition.
    """
    if not data.epsilon:
        raise ValueError("deformed expansion needs a deformation vector")
    if not is_unimodular(data.config, data.chamber):
        raise NotUnimodular("chamber triangulation is not unimodular")
    if any(g.denominator != 1 for g in data.gamma):
        raise PreconditionError("offset must be integral for the deformed series")
    faces = [frozenset(s) for s in data.chamber.simplices]
    cache: dict[tuple[int, int], RingElement] = {}
    ring = data.ring
    eps_keys = [e.coords for e in data.epsilon]
    key_index: dict[tuple, int] = {}
    for k in eps_keys:
        key_index.setdefault(k, len(key_index))
    terms = {}
    region = _index_region(data.lattice.rank, order, signed)
    for n in region:
        ell = data.ell(n)
        shifted = [int(g) + l for g, l in zip(data.gamma, ell)]
        negative = frozenset(j + 1 for j, m in enumerate(shifted) if m < 0)
        if not any(negative <= f for f in faces):
            continue
        value = ring.one()
        for j, m in enumerate(shifted):
            key = (m, key_index[eps_keys[j]])
            factor = cache.get(key)
            if factor is None:
                factor = gamma_ratio_deformed(m, data.epsilon[j])
                cache[key] = factor
            value = value * factor
            if value.is_zero():
                break
        if not value.is_zero():
            terms[n] = value
    return TruncatedGammaSeries(data, order, terms, frozenset(region))


def polynomial_solution(config: PointConfiguration, m: int) -> dict[tuple[int, ...], int]:
    """Multinomial coefficients ``m!/∏ m_j!`` over balanced exponent tuples.

    The configuration must be in homogenized form: first row all ones, the
    remaining rows giving the points ``ā_j``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if any(x != 1 for x in config.matrix[0]):
        raise PreconditionError("first row of the configuration must be all ones")
    rest = config.matrix[1:]
    n = config.size
    out = {}

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for tail in compositions(total - first, parts - 1):
                yield (first,) + tail

    for tup in compositions(m, n):
        if all(sum(r[j] * tup[j] for j in range(n)) == 0 for r in rest):
            coeff = factorial(m)
            for x in tup:
                coeff //= factorial(x)
            out[tup] = coeff
    return out
