"""From a deformed Γ-series to instanton numbers.

Stages: expand the deformed series in the chamber spanned by the last ``d``
columns of the relation basis, move its coefficients into the annihilator
quotient, split off the degree-zero component, build canonical coordinates
and invert them, then read the instanton numbers off the top-degree
component of the logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from . import intlin
from .errors import BadLinearPart, PreconditionError
from .fan import RegularTriangulation, triangulation_from_weight, weight_from_t
from .lattice import PointConfiguration, RelationLattice, config_from_relations
from .multiseries import MultiSeries
from .ring import (
    GradedQuotientRing,
    Monomial,
    RingElement,
    build_ring,
    in_span,
    monodromy_invariant_forms,
    poly_degree,
    quotient_by_annihilator,
)
from .series import GammaData, TruncatedGammaSeries, expand_deformed, gamma_ratio_deformed


def default_signs(basis: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """``(-1)`` to the total negative part of each basis row."""
    return tuple((-1) ** sum(-x for x in row if x < 0) for row in basis)


@dataclass(eq=False)
class MirrorModel:
    """A relation basis with offset, normalization and signs.

    Without an explicit ``config`` the points are rebuilt from the basis.
    """

    name: str
    basis: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]
    kappa: int
    signs: tuple[int, ...] | None = None
    order: int = 9
    pairing_basis: tuple[Monomial, ...] | None = None
    config: PointConfiguration | None = None
    lattice: RelationLattice = field(init=False)

    def __post_init__(self) -> None:
        self.basis = tuple(tuple(int(x) for x in row) for row in self.basis)
        self.gamma = tuple(int(x) for x in self.gamma)
        if self.config is None:
            self.config = config_from_relations(self.basis, self.name)
        self.lattice = RelationLattice(self.basis, self.config)
        if self.signs is None:
            self.signs = default_signs(self.basis)
        self.signs = tuple(int(s) for s in self.signs)
        if len(self.signs) != self.d or any(s not in (1, -1) for s in self.signs):
            raise PreconditionError("signs must be ±1, one per basis row")
        if len(self.gamma) != self.lattice.size:
            raise PreconditionError("gamma has the wrong length")

    @property
    def d(self) -> int:
        return self.lattice.rank

    @cached_property
    def chamber(self) -> RegularTriangulation:
        """Triangulation of the cone spanned by the last ``d`` columns of the basis."""
        n = self.lattice.size
        t = [sum(row[n - self.d:]) for row in self.basis]
        return triangulation_from_weight(self.config, self.lattice, weight_from_t(self.lattice, t))

    @cached_property
    def ring(self) -> GradedQuotientRing:
        return build_ring(self.config, self.lattice, self.chamber)

    @cached_property
    def gamma_data(self) -> GammaData:
        return GammaData(self.config, self.lattice, tuple(self.gamma), self.chamber,
                         self.basis, tuple(self.ring.generators))

    @cached_property
    def deg_element(self) -> RingElement:
        """Leading coefficient of the deformed series; its annihilator is quotiented out."""
        value = self.ring.one()
        for g, e in zip(self.gamma, self.ring.generators):
            value = value * gamma_ratio_deformed(g, e)
        if value.is_zero() or not value.is_homogeneous():
            raise PreconditionError("leading coefficient is not a nonzero homogeneous element")
        return value

    @cached_property
    def quotient(self) -> GradedQuotientRing:
        bar = quotient_by_annihilator(self.ring, self.deg_element)
        d = self.d
        if bar.ranks != [1, d, d, 1]:
            raise PreconditionError(f"quotient ring has ranks {bar.ranks}, expected {[1, d, d, 1]}")
        if bar.basis_monomials()[1: d + 1] != [tuple(int(i == j) for j in range(d)) for i in range(d)]:
            raise PreconditionError("degree-one basis of the quotient is not the variable classes")
        return bar

    def expansion(self, order: int) -> TruncatedGammaSeries:
        return expand_deformed(self.gamma_data, order, signed=False)


def _divider(model: MirrorModel):
    """Map ``value ↦ r`` with ``deg_element · r = value``, ``r`` in the quotient."""
    ring, bar, x = model.ring, model.quotient, model.deg_element
    cols = [(ring.from_poly(rep) * x).coords for rep in bar.representatives]
    mat = intlin.transpose(cols)
    # Left inverse: pick independent rows of the matrix and invert that square block.
    rows = _independent_rows(mat, bar.rank)
    inv = intlin.inverse([mat[r] for r in rows])

    def divide(value: RingElement) -> list[Fraction]:
        target = [value.coords[r] for r in rows]
        sol = intlin.matvec(inv, target)
        check = intlin.matvec(mat, sol)
        if list(check) != list(value.coords):
            raise PreconditionError("coefficient is not a multiple of the leading coefficient")
        return sol

    return divide


def _independent_rows(mat: list[list[Fraction]], count: int) -> list[int]:
    _, pivots = intlin.rref(intlin.transpose(mat))
    if len(pivots) != count:
        raise PreconditionError("multiplication by the leading coefficient is not injective")
    return pivots


@dataclass(frozen=True)
class ComponentSeries:
    """Degree-zero series and normalized components on the quotient basis.

    ``components[b]`` is the coefficient series of basis element ``b`` of the
    quotient in ``Σ c_n z^n / F_0``; component 0 is identically 1.
    """

    F0: MultiSeries
    components: tuple[MultiSeries, ...]
    ring: GradedQuotientRing

    def degree_part(self, degree: int) -> list[MultiSeries]:
        return [s for s, d in zip(self.components, self.ring.degrees) if d == degree]


def component_series(model: MirrorModel, order: int) -> ComponentSeries:
    series = model.expansion(order)
    bar = model.quotient
    divide = _divider(model)
    raw: list[dict] = [dict() for _ in range(bar.rank)]
    for n, coeff in series.terms.items():
        if any(x < 0 for x in n):
            raise PreconditionError(f"term {n} lies outside the cone")
        for b, v in enumerate(divide(coeff)):
            if v:
                raw[b][n] = v
    comps = [MultiSeries(model.d, order, r) for r in raw]
    F0 = comps[0]
    if F0.constant_term() != 1:
        raise PreconditionError("leading term does not normalize to 1")
    inv = F0.inverse()
    normalized = tuple(c * inv for c in comps)
    return ComponentSeries(F0, normalized, bar)


def canonical_coordinates(model: MirrorModel, order: int,
                          comps: ComponentSeries | None = None) -> list[MultiSeries]:
    """``q_i = σ_i z_i exp(f_{1,i}(z))``."""
    comps = comps or component_series(model, order)
    f1 = comps.degree_part(1)
    out = []
    for i, (sign, f) in enumerate(zip(model.signs, f1)):
        z = MultiSeries.variable(model.d, order, i, sign)
        out.append(z * f.exp())
    return out


def invert_mirror_map(q_series: Sequence[MultiSeries], order: int) -> list[MultiSeries]:
    """Series reversion of ``q(z)`` whose linear part is ``σ_i z_i`` with ``σ_i = ±1``."""
    d = len(q_series)
    signs = []
    for i, q in enumerate(q_series):
        if q.constant_term():
            raise BadLinearPart(f"q_{i + 1} has a constant term")
        lin = q.linear_part()
        expected_zero = [x for j, x in enumerate(lin) if j != i]
        if any(expected_zero) or lin[i] not in (1, -1):
            raise BadLinearPart(f"q_{i + 1} does not have linear part ±z_{i + 1}")
        signs.append(lin[i])
    nonlinear = [q.truncate(order) - MultiSeries.variable(d, order, i, s)
                 for i, (q, s) in enumerate(zip(q_series, signs))]
    variables = [MultiSeries.variable(d, order, i) for i in range(d)]
    z = [v * s for v, s in zip(variables, signs)]
    for _ in range(order):
        z = [(variables[i] - nonlinear[i].compose(z)) * signs[i] for i in range(d)]
    return z


def top_log_series(model: MirrorModel, order: int, comps: ComponentSeries | None = None) -> MultiSeries:
    """Top-degree component of ``log(Σ c_n z^n / F_0)`` with τ normalized positively."""
    comps = comps or component_series(model, order)
    bar = comps.ring
    nil = [MultiSeries.zero(model.d, order)] + list(comps.components[1:])
    log = _ring_series_log(bar, nil, order)
    tau = bar.top_form()
    sign = _tau_sign(bar)
    return sum((s * (t * sign) for s, t in zip(log, tau) if t), MultiSeries.zero(model.d, order))


def _tau_sign(bar: GradedQuotientRing) -> int:
    """Sign making ``τ((Σ_i x_i)^top) > 0``."""
    h = sum((bar.variable(i) for i in range(bar.nvars)), bar.zero())
    power = bar.one()
    for _ in range(bar.top_degree):
        power = power * h
    value = power.coords[-1]
    if value == 0:
        raise PreconditionError("top power of the sum of generators vanishes")
    return 1 if value > 0 else -1


def _ring_series_mul(bar: GradedQuotientRing, a: list[MultiSeries], b: list[MultiSeries],
                     order: int) -> list[MultiSeries]:
    out = [MultiSeries.zero(a[0].nvars, order) for _ in range(bar.rank)]
    for i, sa in enumerate(a):
        if not sa.coeffs:
            continue
        for j, sb in enumerate(b):
            if not sb.coeffs or not bar.mult_table[i][j]:
                continue
            prod = sa * sb
            for k, c in bar.mult_table[i][j]:
                out[k] = out[k] + prod * c
    return out


def _ring_series_log(bar: GradedQuotientRing, nil: list[MultiSeries], order: int) -> list[MultiSeries]:
    """``log(1 + N)`` for a ring-valued series ``N`` with nilpotent values."""
    total = [s * 1 for s in nil]
    power = nil
    for k in range(2, bar.top_degree + 1):
        power = _ring_series_mul(bar, power, nil, order)
        total = [t + p * Fraction((-1) ** (k + 1), k) for t, p in zip(total, power)]
    return total


def instanton_part(model: MirrorModel, order: int | None = None) -> MultiSeries:
    """``-(κ/2) L(z(q))`` where ``L`` is the top component of the log series."""
    order = order or model.order
    comps = component_series(model, order)
    q = canonical_coordinates(model, order, comps)
    z = invert_mirror_map(q, order)
    top = top_log_series(model, order, comps)
    return top.compose(z) * Fraction(-model.kappa, 2)


def extract_instanton_numbers(part: MultiSeries, order: int | None = None) -> dict[tuple[int, ...], Fraction]:
    """Solve ``a_m = Σ_{n | m} N_{m/n} / n³`` for all nonzero ``m`` with ``|m| ≤ order``."""
    order = part.order if order is None else order
    if part.constant_term():
        raise PreconditionError("series has a constant term")
    d = part.nvars
    table: dict[tuple[int, ...], Fraction] = {}
    indices = [n for n in product(range(order + 1), repeat=d) if 0 < sum(n) <= order]
    indices.sort(key=lambda n: (sum(n), tuple(-x for x in n)))
    for m in indices:
        value = part[m]
        g = 0
        for x in m:
            g = _gcd(g, x)
        for k in range(2, g + 1):
            if g % k == 0:
                value -= table[tuple(x // k for x in m)] / Fraction(k ** 3)
        table[m] = value
    return table


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def trilog_sum(numbers: dict[tuple[int, ...], Fraction], nvars: int, order: int) -> MultiSeries:
    """``Σ_m N_m Li₃(q^m)`` truncated at ``order``."""
    out: dict[tuple[int, ...], Fraction] = {}
    for m, value in numbers.items():
        k = 1
        while k * sum(m) <= order:
            key = tuple(k * x for x in m)
            out[key] = out.get(key, Fraction(0)) + value / k ** 3
            k += 1
    return MultiSeries(nvars, order, out)


def dual_pairing_basis(bar: GradedQuotientRing) -> list[dict]:
    """Ordered basis ``1, x_i, y_i, top`` with ``τ(x_i y_j) = δ_ij``.

    The ``y_i`` may need rational coefficients when the pairing between
    degrees one and two is not unimodular over ℤ.
    """
    d = bar.nvars
    tau = bar.top_form()
    sign = _tau_sign(bar)
    deg2 = [i for i, deg in enumerate(bar.degrees) if deg == 2]
    mat = []
    for i in range(d):
        xi = bar.variable(i)
        mat.append([sign * sum(a * b for a, b in zip(tau, (xi * bar.basis_element(j)).coords)) for j in deg2])
    inv = intlin.inverse(mat)
    duals = []
    for i in range(d):
        poly: dict = {}
        for r, j in enumerate(deg2):
            c = inv[r][i]
            if c:
                for mon, v in bar.representatives[j].items():
                    poly[mon] = poly.get(mon, 0) + c * v
        duals.append({m: v for m, v in poly.items() if v})
    zero = (0,) * d
    top_rep = {m: sign * v for m, v in bar.representatives[-1].items()}
    return ([{zero: 1}] + [{tuple(int(i == j) for j in range(d)): 1} for i in range(d)]
            + duals + [top_rep])


def _fmt_rational(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pairing_report(model: MirrorModel) -> dict:
    """Invariant-form dimension and the intersection sign pattern of the τ-pairing."""
    bar = model.quotient
    if model.pairing_basis is not None:
        polys = [{tuple(m): 1} for m in model.pairing_basis]
    else:
        polys = dual_pairing_basis(bar)
    elements = [bar.from_poly(p) for p in polys]
    change = [list(e.coords) for e in elements]
    if len(elements) != bar.rank or intlin.rank(change) != bar.rank:
        raise PreconditionError("pairing basis is not a basis of the quotient ring")
    degrees = [poly_degree(p) for p in polys]
    tau = bar.top_form()
    gram = [[sum((a * b for a, b in zip(tau, (er * es * (-1) ** dr).coords)), Fraction(0))
             for es in elements] for er, dr in zip(elements, degrees)]
    # Invariant forms on the construction basis, moved to the ordered basis: P G Pᵗ.
    change_t = intlin.transpose(change)
    forms = [intlin.matmul(intlin.matmul(change, g), change_t) for g in monodromy_invariant_forms(bar)]
    d = model.d
    size = bar.rank
    expected = [[0] * size for _ in range(size)]
    top = size - 1
    expected[0][top], expected[top][0] = 1, -1
    for i in range(d):
        a, b = 1 + i, 1 + d + i
        expected[a][b], expected[b][a] = -1, 1
    sign = 1 if gram[0][top] > 0 else -1
    pattern = all(gram[r][s] * sign == expected[r][s] for r in range(size) for s in range(size))
    return {
        "dimension": len(forms),
        "tau_pairing_invariant": in_span(gram, forms),
        "antisymmetric": all(gram[r][s] == -gram[s][r] for r in range(size) for s in range(size)),
        "intersection_pattern": pattern,
        "basis": [sorted([list(m), _fmt_rational(v)] for m, v in p.items()) for p in polys],
        "gram": [[_fmt_rational(x) for x in row] for row in gram],
    }


def run_mirror(model: MirrorModel, order: int | None = None,
               signs: Sequence[int] | None = None, kappa: int | None = None) -> dict:
    """Full pipeline with a JSON-ready result."""
    order = order or model.order
    if kappa is not None:
        model = replace(model, kappa=kappa)
    if signs is not None:
        model = replace(model, signs=tuple(signs))
    part = instanton_part(model, order)
    numbers = extract_instanton_numbers(part, order)
    entries = []
    for m in sorted(numbers, key=lambda n: (sum(n), tuple(-x for x in n))):
        v = numbers[m]
        entries.append({"index": list(m), "value": str(v.numerator) if v.denominator == 1
                        else f"{v.numerator}/{v.denominator}"})
    return {"model": model.name, "order": order, "N": entries, "pairing": pairing_report(model)}
