from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkzkit.errors import NotNilpotent, NotUnimodular, PreconditionError
from gkzkit.fan import triangulation_from_weight
from gkzkit.models import load_bundled
from gkzkit.ring import build_ring
from gkzkit.series import (
    GammaData,
    adapted_basis,
    expand_deformed,
    expand_plain,
    gamma_ratio_deformed,
    plain_coefficient,
    pochhammer,
    polynomial_solution,
)
from gkzkit.verifier import FormalSolution, check_euler

from conftest import from_relations

HALF, THIRD, FIFTH = Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)


@pytest.fixture(scope="module")
def dual_numbers():
    """ℤ[ε]/(ε²) realized as the ring of the ℤ(−2,1,1) triangulation."""
    config, lattice = from_relations((-2, 1, 1))
    ring = build_ring(config, lattice, [(1, 2), (1, 3)])
    return ring, ring.variable(0)


def gauss_data(gauss, weight=(1, 1, 0, 0), a=HALF, b=THIRD, c=FIFTH):
    config, lattice = gauss
    chamber = triangulation_from_weight(config, lattice, weight)
    return GammaData(config, lattice, (0, c - 1, -a, -b), chamber, lattice.basis)


@pytest.mark.parametrize(
    "s, n, expected",
    [(1, 5, 120), (Fraction(7, 3), 0, 1), (HALF, 3, Fraction(15, 8)), (-3, 3, -6), (-2, 4, 0)],
)
def test_pochhammer(s, n, expected):
    assert pochhammer(s, n) == expected


@settings(max_examples=50)
@given(st.integers(0, 12))
def test_pochhammer_of_one_is_factorial(n):
    assert pochhammer(1, n) == factorial(n)


class TestGammaRatio:
    def test_zero_shift(self, dual_numbers):
        ring, eps = dual_numbers
        assert gamma_ratio_deformed(0, eps * 7) == ring.one()

    def test_negative_one(self, dual_numbers):
        _, eps = dual_numbers
        assert gamma_ratio_deformed(-1, eps) == eps

    def test_two(self, dual_numbers):
        ring, eps = dual_numbers
        # (1+ε)(2+ε) = 2 + 3ε, whose inverse modulo ε² is ½ − ¾ε.
        assert gamma_ratio_deformed(2, eps) == ring.one() * HALF - eps * Fraction(3, 4)

    def test_constant_term_rejected(self, dual_numbers):
        ring, eps = dual_numbers
        with pytest.raises(NotNilpotent):
            gamma_ratio_deformed(1, eps + 1)


class TestPlainCoefficient:
    def test_gauss_pochhammer_law(self):
        gamma = (0, FIFTH - 1, -HALF, -THIRD)
        for n in range(6):
            expected = pochhammer(HALF, n) * pochhammer(THIRD, n) / (factorial(n) * pochhammer(FIFTH, n))
            assert plain_coefficient(gamma, (n, n, -n, -n)) == expected

    def test_empty_shift(self):
        assert plain_coefficient((Fraction(3, 7), -2, 5), (0, 0, 0)) == 1

    def test_negative_entry_with_zero_offset(self):
        assert plain_coefficient((0, 0, 0), (-1, 2, -1)) == 0

    @pytest.mark.parametrize("a", [Fraction(7, 2), Fraction(-2, 3), Fraction(5)])
    def test_binomial_theorem(self, a):
        # ₁F₀: the normalized coefficient of u₁ⁿ u₂^{a−n} is the generalized binomial coefficient.
        for n in range(8):
            falling = Fraction(1)
            for i in range(n):
                falling *= a - i
            assert plain_coefficient((0, a), (n, -n)) == falling / factorial(n)
        if a.denominator == 1:
            assert [plain_coefficient((0, a), (n, -n)) for n in range(8)] == [comb(int(a), n) for n in range(8)]

    def test_quintic_and_two_cubics_laws(self):
        for n in range(5):
            quintic = plain_coefficient((-1, 0, 0, 0, 0, 0), (-5 * n,) + (n,) * 5)
            cubics = plain_coefficient((-1, -1) + (0,) * 6, (-3 * n, -3 * n) + (n,) * 6)
            assert quintic == (-1) ** n * Fraction(factorial(5 * n), factorial(n) ** 5)
            assert cubics == Fraction(factorial(3 * n), factorial(n) ** 3) ** 2
        assert plain_coefficient((-1, 0, 0, 0, 0, 0), (-5, 1, 1, 1, 1, 1)) == -120
        assert plain_coefficient((-1, -1) + (0,) * 6, (-3, -3) + (1,) * 6) == 36


class TestExpandPlain:
    def test_gauss_through_order(self, gauss):
        series = expand_plain(gauss_data(gauss), 8)
        for n in range(9):
            assert series.coefficient((n,)) == (
                pochhammer(HALF, n) * pochhammer(THIRD, n) / (factorial(n) * pochhammer(FIFTH, n)))

    def test_contiguous_ratio(self, gauss):
        series = expand_plain(gauss_data(gauss), 10)
        for n in range(10):
            ratio = series.coefficient((n + 1,)) / series.coefficient((n,))
            assert ratio == (HALF + n) * (THIRD + n) / ((1 + n) * (FIFTH + n))

    def test_truncation_is_consistent(self, gauss):
        low, high = expand_plain(gauss_data(gauss), 4), expand_plain(gauss_data(gauss), 9)
        assert all(high.terms[n] == c for n, c in low.terms.items())
        assert all(sum(n) <= 9 for n in high.terms)

    def test_wrong_side_basis_rejected(self, gauss):
        with pytest.raises(PreconditionError):
            gauss_data(gauss, weight=(0, 0, 1, 1))

    def test_json_dump(self, gauss):
        doc = expand_plain(gauss_data(gauss), 2).to_json()
        assert doc == {"order": 2, "terms": [{"n": [0], "coeff": ["1"]}, {"n": [1], "coeff": ["5/6"]},
                                             {"n": [2], "coeff": ["25/36"]}]}


def deformed_for(name, order):
    problem = load_bundled(name)
    ring = build_ring(problem.config, problem.lattice, problem.chamber)
    gamma = problem.gamma or (0,) * problem.config.size
    data = GammaData(problem.config, problem.lattice, gamma, problem.chamber, problem.lattice.basis,
                     tuple(ring.generators))
    return ring, expand_deformed(data, order, signed=False)


class TestExpandDeformed:
    def test_three_one_one_one(self):
        ring, series = deformed_for("z3111", 4)
        eps = ring.variable(0)
        assert series.coefficient((0,)) == ring.one()
        assert series.coefficient((1,)) == eps * -6 + eps * eps * -9

    def test_quintic_pochhammer_law(self):
        ring, series = deformed_for("quintic", 5)
        eps = ring.variable(0)
        for n in range(6):
            num = ring.one()
            for i in range(1, 5 * n + 1):
                num = num * (eps * 5 + i)
            den = ring.one()
            for i in range(1, n + 1):
                den = den * (eps + i)
            den = den * den * den * den * den
            expected = eps * -5 * (-1) ** n * num * den.inverse()
            assert series.coefficient((n,)) == expected

    def test_support_lies_in_the_cone(self):
        _, series = deformed_for("p2p2-33", 5)
        assert all(min(n) >= 0 for n in series.terms)

    def test_not_unimodular(self, z3111):
        config, lattice = z3111
        chamber = triangulation_from_weight(config, lattice, (1, 0, 0, 0))
        ring = build_ring(config, lattice, triangulation_from_weight(config, lattice, (-1, 0, 0, 0)))
        data = GammaData(config, lattice, (0, 0, 0, 0), chamber, ((3, -1, -1, -1),), tuple(ring.generators))
        with pytest.raises(NotUnimodular):
            expand_deformed(data, 2)


class TestPolynomialSolution:
    def test_two_one_one(self):
        from gkzkit.lattice import PointConfiguration

        config = PointConfiguration.from_columns([(1, 0), (1, 1), (1, -1)])
        sol = polynomial_solution(config, 2)
        assert sol == {(2, 0, 0): 1, (0, 1, 1): 2}

    def test_degree_one(self):
        from gkzkit.lattice import PointConfiguration

        config = PointConfiguration.from_columns([(1, 0), (1, 1), (1, -1)])
        assert polynomial_solution(config, 1) == {(1, 0, 0): 1}

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_passes_the_euler_check(self, pentagon, m):
        config, lattice = pentagon
        terms = polynomial_solution(config, m)
        # With zero offset the stored index is the exponent vector itself.
        sol = FormalSolution(config, lattice, (Fraction(0),) * config.size, (),
                             {e: Fraction(c) for e, c in terms.items()}, frozenset(terms))
        report = check_euler(sol, (m, 0, 0))
        assert report.ok and report.checked == len(terms)


class TestAdaptedBasis:
    def test_basis_rows_kept_when_they_generate(self):
        problem = load_bundled("quintic")
        assert adapted_basis(problem.lattice, problem.chamber) == problem.lattice.basis

    @pytest.mark.parametrize("name", ["f1", "f4", "pentagon", "fd-k4"])
    def test_edge_basis_is_accepted(self, name):
        problem = load_bundled(name)
        basis = adapted_basis(problem.lattice, problem.chamber)
        data = GammaData(problem.config, problem.lattice, (0,) * problem.config.size, problem.chamber, basis)
        assert len(basis) == problem.lattice.rank
        # Every term of the γ = 0 series sits at a relation pairing nonnegatively with the chamber.
        series = expand_plain(data, 3)
        assert series.coefficient((0,) * len(basis)) == 1

    def test_rows_that_miss_part_of_the_monoid_are_rejected(self):
        problem = load_bundled("f1")
        with pytest.raises(PreconditionError):
            GammaData(problem.config, problem.lattice, (0,) * 6, problem.chamber, problem.lattice.basis)
