import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from commtower.circle import CircleSet
from commtower.errors import InvalidInput
from commtower.freesets import (EquationFamily, best_cell_set, cell_free_set, family_free_set,
                                free_set_pair, verify_free)

from oracles import free_oracle

HALF = F(1, 2)


def test_verify_free_examples():
    assert verify_free(CircleSet.empty(), 1, 2)
    A = CircleSet.from_pairs([(0, HALF)])
    assert verify_free(A, 1, -1)
    assert not verify_free(A, 1, 2)
    # x = 3y has no solutions in [1/4, 1/3): 3A = [3/4, 1)
    assert verify_free(CircleSet.from_pairs([(F(1, 4), F(1, 3))]), 1, 3)


@st.composite
def cell_sets(draw):
    q = draw(st.integers(2, 24))
    cells = draw(st.sets(st.integers(0, q - 1), max_size=q))
    return [(F(i, q), F(i + 1, q)) for i in sorted(cells)]


coeff = st.sampled_from([-3, -2, -1, 1, 2, 3, 4, 5])


@settings(max_examples=300, deadline=None)
@given(cell_sets(), coeff, coeff)
def test_verify_free_matches_oracle(pairs, c1, c2):
    A = CircleSet.from_pairs(pairs)
    # merged arcs are compared exactly by the oracle as open arcs
    assert verify_free(A, c1, c2) == free_oracle(A.intervals(), c1, c2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coeff, coeff).filter(lambda p: p[0] != p[1]), min_size=1, max_size=3),
       st.integers(2, 30))
def test_cell_sets_are_free(eqs, q):
    A, info = cell_free_set(eqs, q)
    for c1, c2 in eqs:
        assert verify_free(A, c1, c2)
    assert A.measure() <= HALF


def test_comb_and_gcd_pullback():
    r = free_set_pair(1, -1, 0)
    assert r.route == "comb" and r.measure == HALF and r.achieved_target
    r = free_set_pair(2, -2, F(1, 20))
    assert r.measure == F(19, 40) and r.all_verified
    assert r.reduction.startswith("divided by 2")
    data = json.loads(json.dumps(r.to_json()))
    assert data["measure"] == "19/40" and data["verifiedEquations"][0]["free"]


def test_one_sided_pair_small_budget():
    r = free_set_pair(1, 2, F(1, 10), arc_budget=20_000)
    assert r.all_verified and verify_free(r.set, 1, 2)
    assert F(2, 5) <= r.measure <= HALF
    r = free_set_pair(2, 1, F(1, 10), arc_budget=20_000)
    assert verify_free(r.set, 2, 1) and r.measure <= HALF


def test_negative_ratio_pair():
    r = free_set_pair(1, -2, F(1, 10), arc_budget=20_000)
    assert r.all_verified and verify_free(r.set, 1, -2)
    assert r.measure <= HALF


def test_general_pair_falls_back_to_cells():
    C, info = best_cell_set([(2, 3)], q_max=20)
    assert verify_free(C, 2, 3) and C.measure() > F(1, 4)
    r = free_set_pair(2, 3, F(1, 4), arc_budget=2000, cell_search=False)
    assert r.all_verified and r.measure <= HALF


def test_pair_validation():
    for args in ((0, 2, F(1, 10)), (2, 2, F(1, 10)), (1, 2, HALF), (1, 2, -F(1, 10)), (1, 2, 0)):
        with pytest.raises(InvalidInput):
            free_set_pair(*args)


def test_family_validation():
    with pytest.raises(InvalidInput):
        EquationFamily((2, 3), ((0, 1),))
    with pytest.raises(InvalidInput):
        EquationFamily((1, 2, 2), ((1, 2),))
    with pytest.raises(InvalidInput):
        EquationFamily((1, 2), ((0, 2),))
    with pytest.raises(InvalidInput):
        family_free_set(EquationFamily((1, 2, 4), ((0, 1), (1, 2))), F(1, 10))
    fam = EquationFamily((1, 2, 3), ((1, 0), (2, 1), (0, 1)))
    assert fam.edges == ((0, 1), (1, 2)) and fam.equations() == [(1, 2), (2, 3)]
    assert fam.to_json() == {"coeffs": [1, 2, 3], "edges": [[0, 1], [1, 2]]}


def test_single_edge_family_delegates():
    r = family_free_set(EquationFamily((1, -1), ((0, 1),)), F(1, 10))
    assert r.route == "pair/comb" and r.measure == F(9, 20)


def test_triangle_family_is_verified():
    fam = EquationFamily((1, 2, 3), ((0, 1), (0, 2), (1, 2)))
    r = family_free_set(fam, F(1, 10), arc_budget=2000)
    assert r.all_verified and r.target == F(1, 3) - F(1, 10)
    for c1, c2 in fam.equations():
        assert verify_free(r.set, c1, c2)
    assert r.measure <= HALF
