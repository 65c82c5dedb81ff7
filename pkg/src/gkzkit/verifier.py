"""Term-by-term checks that truncated Γ-series solve the GKZ equations.

A formal solution stores coefficients indexed by the lattice vector ``ℓ``;
the monomial attached to ``ℓ`` is ``u^{γ+ℓ+ε}``. Differentiation in ``u_j``
multiplies a coefficient by ``γ_j+ℓ_j+ε_j`` and lowers ``γ_j`` by one, so
both GKZ equation families reduce to identities between stored
coefficients. Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import intlin
from .errors import InsufficientOrder, LatticeViolation
from .lattice import PointConfiguration, RelationLattice
from .ring import RingElement
from .series import TruncatedGammaSeries

Ell = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FormalSolution:
    """Coefficients ``ℓ ↦ coeff`` of ``Σ coeff · u^{γ+ℓ+ε}`` on a finite retained set.

    ``epsilon`` is empty for plain series, whose coefficients are rationals.
    """

    config: PointConfiguration
    lattice: RelationLattice
    gamma: tuple[Fraction, ...]
    epsilon: tuple[RingElement, ...]
    terms: dict[Ell, "Fraction | RingElement"]
    retained: frozenset[Ell]

    @classmethod
    def from_series(cls, series: TruncatedGammaSeries) -> "FormalSolution":
        data = series.data
        terms = {data.ell(n): c for n, c in series.terms.items()}
        retained = frozenset(data.ell(n) for n in series.retained)
        if len(retained) != len(series.retained):
            raise ValueError("two multi-indices give the same lattice vector")
        return cls(data.config, data.lattice, data.gamma, tuple(data.epsilon), terms, retained)

    def coefficient(self, ell: Sequence[int]):
        ell = tuple(ell)
        if ell not in self.retained:
            raise KeyError(f"{ell} was not retained")
        return self.terms.get(ell, self._zero())

    def _zero(self):
        return self.epsilon[0].ring.zero() if self.epsilon else Fraction(0)

    def exponent_factor(self, j: int, ell: Ell, shift: int = 0):
        """``γ_j + ℓ_j + ε_j - shift`` (0-based ``j``)."""
        base = self.gamma[j] + ell[j] - shift
        if self.epsilon:
            return self.epsilon[j] + base
        return Fraction(base)

    def with_terms(self, terms: dict) -> "FormalSolution":
        return replace(self, terms=terms)


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, RingElement) else x == 0


def apply_partial(sol: FormalSolution, j: int) -> FormalSolution:
    """``∂/∂u_j`` applied termwise (``j`` is 1-based)."""
    if not 1 <= j <= sol.config.size:
        raise ValueError(f"index {j} out of range")
    k = j - 1
    terms = {}
    for ell, coeff in sol.terms.items():
        value = coeff * sol.exponent_factor(k, ell)
        if not _is_zero(value):
            terms[ell] = value
    gamma = tuple(g - (i == k) for i, g in enumerate(sol.gamma))
    return replace(sol, gamma=gamma, terms=terms)


@dataclass
class ResidualReport:
    """Outcome of one family of termwise identities."""

    kind: str
    lam: tuple[int, ...] | None
    checked: int = 0
    unchecked_boundary: int = 0
    violations: list[Ell] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "lambda": list(self.lam) if self.lam is not None else None,
            "checked": self.checked,
            "unchecked_boundary": self.unchecked_boundary,
            "violations": [list(v) for v in self.violations],
        }


def _falling_product(sol: FormalSolution, ell: Ell, powers: Sequence[int]):
    """``∏_j ∏_{s<p_j} (γ_j+ℓ_j+ε_j-s)``, the factor from ``∏ ∂_j^{p_j}``."""
    value = sol.epsilon[0].ring.one() if sol.epsilon else Fraction(1)
    for j, p in enumerate(powers):
        for s in range(p):
            value = value * sol.exponent_factor(j, ell, s)
    return value


def check_box(sol: FormalSolution, lam: Sequence[int]) -> ResidualReport:
    """``(∏_{λ_j>0} ∂_j^{λ_j} - ∏_{λ_j<0} ∂_j^{-λ_j}) Φ = 0`` compared monomial by monomial.

    The monomial produced by the left product from term ``ℓ`` coincides with
    the one produced by the right product from term ``ℓ - λ``. A residual is
    compared only when both partners were retained.
    """
    lam = tuple(int(x) for x in lam)
    if len(lam) != sol.config.size or not sol.lattice.contains(lam):
        raise LatticeViolation(f"{list(lam)} is not in the relation lattice")
    plus = [max(0, x) for x in lam]
    minus = [max(0, -x) for x in lam]
    report = ResidualReport("box", lam)
    for ell in sorted(sol.retained):
        partner = tuple(a - b for a, b in zip(ell, lam))
        if partner not in sol.retained:
            report.unchecked_boundary += 1
            continue
        report.checked += 1
        left = sol.coefficient(ell) * _falling_product(sol, ell, plus)
        right = sol.coefficient(partner) * _falling_product(sol, partner, minus)
        if not _is_zero(left - right):
            report.violations.append(ell)
    if report.checked == 0:
        raise InsufficientOrder(f"no retained term has its partner under λ = {list(lam)}")
    return report


def check_euler(sol: FormalSolution, c: Sequence) -> ResidualReport:
    """``Σ_j a_j (γ_j+ℓ_j+ε_j) · coeff = c · coeff`` for every retained ``ℓ``."""
    c = [Fraction(x) for x in c]
    matrix = sol.config.matrix
    if len(c) != len(matrix):
        raise ValueError("c has the wrong length")
    report = ResidualReport("euler", None)
    for ell in sorted(sol.retained):
        report.checked += 1
        coeff = sol.coefficient(ell)
        factors = [sol.exponent_factor(j, ell) for j in range(sol.config.size)]
        for row, cr in zip(matrix, c):
            total = coeff * (-cr)
            for a, f in zip(row, factors):
                if a:
                    total = total + coeff * f * a
            if not _is_zero(total):
                report.violations.append(ell)
                break
    return report


def box_generator_set(lattice: RelationLattice, bound: int) -> list[tuple[int, ...]]:
    """Nonzero ``λ ∈ 𝕃`` with ``‖λ‖₁ ≤ bound``, one of each ``±λ`` pair."""
    d = lattice.rank
    if bound < 1 or d == 0:
        return []
    basis = [list(r) for r in lattice.basis]
    _, cols = intlin.rref(basis)
    block_inv = intlin.inverse([[row[j] for j in cols] for row in basis])
    found = set()
    for part in product(range(-bound, bound + 1), repeat=d):
        if sum(abs(x) for x in part) > bound or not any(part):
            continue
        coords = [sum(part[i] * block_inv[i][k] for i in range(d)) for k in range(d)]
        if any(x.denominator != 1 for x in coords):
            continue
        lam = tuple(int(sum(int(coords[k]) * basis[k][j] for k in range(d)))
                    for j in range(lattice.size))
        if sum(abs(x) for x in lam) > bound:
            continue
        first = next(x for x in lam if x)
        found.add(lam if first > 0 else tuple(-x for x in lam))
    return sorted(found, key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)))


def euler_parameter(sol: FormalSolution) -> list[Fraction]:
    """``c = Σ_j γ_j a_j`` for the stored offset."""
    return [sum((a * g for a, g in zip(row, sol.gamma)), Fraction(0)) for row in sol.config.matrix]


def verify(sol: FormalSolution, lambdas: Sequence[Sequence[int]]) -> dict:
    """Euler check with the natural parameter plus one box check per ``λ``."""
    reports = [check_euler(sol, euler_parameter(sol))]
    for lam in lambdas:
        reports.append(check_box(sol, lam))
    return {
        "reports": [r.to_json() for r in reports],
        "violations": sum(len(r.violations) for r in reports),
    }
