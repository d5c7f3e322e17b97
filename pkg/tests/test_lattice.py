import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from commtower.errors import InvalidInput
from commtower.lattice import (DifferenceSet, GridWitness, LatticeGraph, brute_force_max,
                               difference_set, is_admissible, is_periodic_admissible, margin,
                               max_admissible, motzkin_bounds, periodic_extension, periodic_search,
                               sandwich)

from oracles import brute_box_max

EDGE = LatticeGraph.on_basis(1, [(0, 1)])
TRIANGLE = LatticeGraph.on_basis(2, [(0, 1), (0, 2), (1, 2)])


def test_difference_set_of_edge_and_triangle():
    assert set(difference_set(EDGE)) == {(1,), (-1,)}
    assert set(difference_set(TRIANGLE)) == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}


def test_difference_set_validation():
    with pytest.raises(InvalidInput):
        DifferenceSet([(1,)])
    with pytest.raises(InvalidInput):
        DifferenceSet([(0,)], symmetrize=True)
    assert set(DifferenceSet([(2,)], symmetrize=True)) == {(2,), (-2,)}


# frozen values, checked against the itertools oracle where the box is small
@pytest.mark.parametrize("D,N,val", [([(1,), (-1,)], (5,), "3/5"), ([(1,), (-1,)], (6,), "1/2"),
                                     ([(1,), (-1,), (2,), (-2,)], (9,), "1/3")])
def test_max_admissible_frozen(D, N, val):
    Ds = DifferenceSet(D)
    w = max_admissible(Ds, N)
    assert w.density == F(val) == brute_box_max(D, N)
    assert w.optimal and is_admissible(w.cells, Ds)


def test_triangle_box_values():
    D = difference_set(TRIANGLE)
    # the open box beats the periodic density: the four corners of 3x3
    assert max_admissible(D, (3, 3)).density == F(4, 9) == brute_box_max(list(D), (3, 3))
    assert max_admissible(D, (2, 3)).density == brute_box_max(list(D), (2, 3))


@st.composite
def instances(draw):
    d = draw(st.integers(1, 3))
    vecs = draw(st.lists(st.tuples(*[st.integers(-2, 2)] * d).filter(any), min_size=1, max_size=3))
    N = tuple(draw(st.integers(1, 4 if d > 1 else 9)) for _ in range(d))
    assume(math.prod(N) <= 20)
    return DifferenceSet(vecs, dim=d, symmetrize=True), N


@settings(max_examples=80, deadline=None)
@given(instances())
def test_branch_and_bound_matches_oracles(inst):
    D, N = inst
    w = max_admissible(D, N)
    assert w.density == brute_force_max(D, N).density == brute_box_max(list(D), N)
    assert is_admissible(w.cells, D)


def test_sandwich_edge_frozen():
    got = [(sandwich(EDGE, (N,)).lower, sandwich(EDGE, (N,)).upper) for N in (10, 20, 40)]
    assert got == [(F(5, 12), F(1, 2)), (F(5, 11), F(1, 2)), (F(10, 21), F(1, 2))]
    assert all(lo <= F(1, 2) <= hi for lo, hi in got)
    assert got[0][0] < got[1][0] < got[2][0]


def test_sandwich_reports_boundary_form():
    s = sandwich(EDGE, (10,))
    assert s.upper_box == F(1, 2) + F(1, 10)
    assert margin(EDGE) == (2,)
    data = json.loads(json.dumps(s.to_json()))
    assert data["lower"] == "5/12" and data["upper"] == "1/2"


def test_triangle_sandwich_and_periodic():
    s = sandwich(TRIANGLE, (6, 6))
    assert s.lower <= F(1, 3) <= s.upper
    p = periodic_search(difference_set(TRIANGLE), (3, 3))
    assert p.density == F(1, 3) and p.optimal
    assert is_periodic_admissible(p.cells, difference_set(TRIANGLE), (3, 3))
    pts = periodic_extension(p.cells, (3, 3), (9, 9))
    assert is_admissible(pts, difference_set(TRIANGLE))


def test_periodic_guard_and_values():
    D = DifferenceSet([(1,), (-1,), (2,), (-2,)])
    assert periodic_search(D, (3,)).density == F(1, 3)
    with pytest.raises(InvalidInput):
        periodic_search(D, (2,))
    b = motzkin_bounds(D, (12,), [(3,), (4,), (5,)])
    assert b.lower == b.upper == F(1, 3)
    assert motzkin_bounds(DifferenceSet([], dim=1), (5,), [(3,)]).lower == 1


def test_witness_json_roundtrip():
    w = max_admissible(difference_set(TRIANGLE), (3, 3))
    back = GridWitness.from_json(json.loads(json.dumps(w.to_json())))
    assert back.density == w.density and back.cells == w.cells


def test_budget_flagged():
    D = DifferenceSet([(1, 0), (0, 1), (1, 1), (2, 1)], symmetrize=True)
    w = max_admissible(D, (9, 9), node_budget=3)
    assert w.upper_bound >= w.density
    assert is_admissible(w.cells, D)
