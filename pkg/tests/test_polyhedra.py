from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkzkit.polyhedra import strict_cone_point


def satisfies(rows, t):
    return all(sum(Fraction(g) * x for g, x in zip(row, t)) > 0 for row in rows)


@pytest.mark.parametrize(
    "rows, feasible",
    [
        ([[1, 0], [0, 1]], True),
        ([[1, 0], [-1, 0]], False),
        ([[1, 1], [-1, 0], [0, -1]], False),
        ([[1, -1], [1, 1], [Fraction(1, 2), 0]], True),
        ([[0, 0]], False),
        ([], False),
    ],
)
def test_small_systems(rows, feasible):
    point = strict_cone_point(rows)
    assert (point is not None) is feasible
    if point is not None:
        assert satisfies(rows, point)


def vectors(dim):
    return st.lists(st.integers(-4, 4), min_size=dim, max_size=dim)


@st.composite
def systems_around_a_point(draw):
    dim = draw(st.integers(1, 4))
    centre = draw(vectors(dim).filter(any))
    rows = []
    for _ in range(draw(st.integers(1, 7))):
        g = draw(vectors(dim))
        value = sum(a * b for a, b in zip(g, centre))
        if value > 0:
            rows.append(g)
        elif value < 0:
            rows.append([-x for x in g])
    return rows or [centre]


@settings(max_examples=80, deadline=None)
@given(systems_around_a_point())
def test_systems_with_a_known_solution_are_feasible(rows):
    point = strict_cone_point(rows)
    assert point is not None
    assert satisfies(rows, point)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.lists(vectors(d), min_size=1, max_size=5)))
def test_infeasibility_is_consistent_with_a_grid_search(rows):
    point = strict_cone_point(rows)
    if point is not None:
        assert satisfies(rows, point)
    else:
        dim = len(rows[0])
        assert not any(satisfies(rows, t) for t in product(range(-6, 7), repeat=dim))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.lists(vectors(d), min_size=1, max_size=4)))
def test_opposite_rows_make_the_cone_empty(rows):
    assert strict_cone_point(rows + [[-x for x in rows[0]]]) is None
