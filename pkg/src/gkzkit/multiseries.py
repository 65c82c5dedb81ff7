"""Truncated multivariate power series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True, eq=False)
class MultiSeries:
    """``Σ c_n z^n`` over multi-indices ``n`` of total degree at most ``order``."""

    nvars: int
    order: int
    coeffs: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        clean = {}
        for n, c in self.coeffs.items():
            n = tuple(int(x) for x in n)
            if len(n) != self.nvars or any(x < 0 for x in n):
                raise ValueError(f"bad multi-index {n}")
            c = Fraction(c)
            if c and sum(n) <= self.order:
                clean[n] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, order: int, value=1) -> "MultiSeries":
        return cls(nvars, order, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, order: int, i: int, scale=1) -> "MultiSeries":
        n = tuple(int(j == i) for j in range(nvars))
        return cls(nvars, order, {n: Fraction(scale)})

    @classmethod
    def zero(cls, nvars: int, order: int) -> "MultiSeries":
        return cls(nvars, order, {})

    # -- arithmetic ----------------------------------------------------

    def __getitem__(self, n: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(n), Fraction(0))

    def _like(self, coeffs: Mapping) -> "MultiSeries":
        return MultiSeries(self.nvars, self.order, coeffs)

    def __add__(self, other: "MultiSeries | int | Fraction") -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(self.nvars, self.order, other)
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, Fraction(0)) + c
        return MultiSeries(self.nvars, min(self.order, other.order), out)

    __radd__ = __add__

    def __neg__(self) -> "MultiSeries":
        return self._like({n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: "MultiSeries | int | Fraction") -> "MultiSeries":
        return self + (-other)

    def __rsub__(self, other: "int | Fraction") -> "MultiSeries":
        return (-self) + other

    def __mul__(self, other: "MultiSeries | int | Fraction") -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            f = Fraction(other)
            return self._like({n: c * f for n, c in self.coeffs.items()})
        order = min(self.order, other.order)
        out: dict[tuple[int, ...], Fraction] = {}
        right = [(n, sum(n), c) for n, c in other.coeffs.items()]
        for n1, c1 in self.coeffs.items():
            d1 = sum(n1)
            for n2, d2, c2 in right:
                if d1 + d2 > order:
                    continue
                n = tuple(a + b for a, b in zip(n1, n2))
                out[n] = out.get(n, Fraction(0)) + c1 * c2
        return MultiSeries(self.nvars, order, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def constant_term(self) -> Fraction:
        return self[(0,) * self.nvars]

    def truncate(self, order: int) -> "MultiSeries":
        return MultiSeries(self.nvars, min(order, self.order), self.coeffs)

    def linear_part(self) -> list[Fraction]:
        return [self[tuple(int(j == i) for j in range(self.nvars))] for i in range(self.nvars)]

    def inverse(self) -> "MultiSeries":
        """Multiplicative inverse of a series with nonzero constant term."""
        c = self.constant_term()
        if c == 0:
            raise ZeroDivisionError("series has zero constant term")
        rest = self * (1 / c) - 1
        term = MultiSeries.constant(self.nvars, self.order)
        total = term
        for _ in range(self.order):
            term = term * (-rest)
            total = total + term
        return total * (1 / c)

    def __truediv__(self, other: "MultiSeries | int | Fraction") -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def exp(self) -> "MultiSeries":
        if self.constant_term():
            raise ValueError("exp needs a series without constant term")
        term = MultiSeries.constant(self.nvars, self.order)
        total = term
        for k in range(1, self.order + 1):
            term = term * self * Fraction(1, k)
            total = total + term
        return total

    def log1p(self) -> "MultiSeries":
        """``log(1 + self)`` for a series without constant term."""
        if self.constant_term():
            raise ValueError("log1p needs a series without constant term")
        power = self
        total = MultiSeries.zero(self.nvars, self.order)
        for k in range(1, self.order + 1):
            total = total + power * Fraction((-1) ** (k + 1), k)
            power = power * self
        return total

    def compose(self, substitutions: Sequence["MultiSeries"]) -> "MultiSeries":
        """Substitute series without constant terms for the variables."""
        if len(substitutions) != self.nvars:
            raise ValueError("need one substitution per variable")
        if any(s.constant_term() for s in substitutions):
            raise ValueError("substituted series must vanish at the origin")
        nv = substitutions[0].nvars
        order = min(self.order, min(s.order for s in substitutions))
        powers: list[list[MultiSeries]] = []
        for s in substitutions:
            s = s.truncate(order)
            seq = [MultiSeries.constant(nv, order)]
            top = max((n[len(powers)] for n in self.coeffs), default=0)
            for _ in range(top):
                seq.append(seq[-1] * s)
            powers.append(seq)
        total = MultiSeries.zero(nv, order)
        for n, c in self.coeffs.items():
            term = MultiSeries.constant(nv, order, c)
            for i, e in enumerate(n):
                if e:
                    term = term * powers[i][e]
            total = total + term
        return total

    def indices(self) -> Iterable[tuple[int, ...]]:
        return sorted(self.coeffs, key=lambda n: (sum(n), tuple(-x for x in n)))
