import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commtower import config
from commtower.circle import (CircleEndo, CircleSet, dyadic_atoms, format_rational, image,
                              parse_rational, preimage, union_all)
from commtower.errors import DepthCapExceeded, IntervalBudgetExceeded, InvalidInput

from oracles import den_of, grid_measure, indicator, lcm, preimage_indicator


@st.composite
def pair_lists(draw, max_den=30, max_arcs=5):
    den = draw(st.integers(1, max_den))
    pts = draw(st.lists(st.integers(0, den), min_size=0, max_size=2 * max_arcs, unique=True))
    pts.sort()
    return [(F(pts[i], den), F(pts[i + 1], den)) for i in range(0, len(pts) - 1, 2)]


multipliers = st.sampled_from([-7, -4, -3, -2, -1, 1, 2, 3, 5, 6])


def test_normalize_merges_and_sorts():
    A = CircleSet.from_pairs([(F(1, 2), F(3, 4)), (F(0), F(1, 4)), (F(1, 4), F(1, 2))])
    assert A.intervals() == [(F(0), F(3, 4))]


def test_wrap_split():
    A = CircleSet.from_pairs([(F(3, 4), F(5, 4))])
    assert A.intervals() == [(F(0), F(1, 4)), (F(3, 4), F(1))]
    assert A.measure() == F(1, 2)


def test_preimage_examples():
    A = CircleSet.from_pairs([(0, F(1, 2))])
    assert A.preimage(2).intervals() == [(F(0), F(1, 4)), (F(1, 2), F(3, 4))]
    assert CircleSet.from_pairs([(0, F(1, 4))]).preimage(-1).intervals() == [(F(3, 4), F(1))]


def test_image_examples():
    assert CircleSet.from_pairs([(0, F(1, 2))]).image(3).is_full()
    assert CircleSet.from_pairs([(0, F(1, 4))]).image(2).intervals() == [(F(0), F(1, 2))]


def test_shift_wraps():
    A = CircleSet.from_pairs([(F(1, 2), F(3, 4))]).shift(F(1, 2))
    assert A.intervals() == [(F(0), F(1, 4))]


def test_rational_format_roundtrip():
    for s in ["0/1", "1/3", "7/12", "1/1"]:
        assert format_rational(parse_rational(s)) == s
    assert format_rational(F(2, 4)) == "1/2"


def test_json_roundtrip_and_validation():
    A = CircleSet.from_pairs([(F(1, 7), F(2, 7)), (F(5, 9), F(1))])
    data = json.loads(json.dumps(A.to_json()))
    assert CircleSet.from_json(data) == A
    with pytest.raises(InvalidInput):
        CircleSet.from_json([["1/2", "1/3"]])
    with pytest.raises(InvalidInput):
        CircleSet.from_json([["0", "3/2"]])


def test_endo_wrapper():
    e = CircleEndo(3)
    A = CircleSet.from_pairs([(0, F(1, 3))])
    assert e.preimage(A) == preimage(3, A)
    assert e.image(A) == image(3, A)
    assert e(F(1, 2)) == F(1, 2)


def test_dyadic_atoms_partition_the_circle():
    atoms = dyadic_atoms(3)
    assert len(atoms) == 8
    assert union_all(atoms).is_full()
    assert sum(a.measure() for a in atoms) == 1
    with config.limits(depth_cap=2):
        with pytest.raises(DepthCapExceeded):
            dyadic_atoms(3)


def test_interval_budget_is_enforced():
    A = CircleSet.from_pairs([(0, F(1, 3))])
    with config.limits(interval_cap=100):
        with pytest.raises(IntervalBudgetExceeded):
            A.preimage(1000)


def test_env_override(monkeypatch):
    monkeypatch.setenv(config.ENV_INTERVAL_BUDGET, "1234")
    assert config.Settings().interval_cap == 1234
    monkeypatch.setenv(config.ENV_INTERVAL_BUDGET, "many")
    with pytest.raises(InvalidInput):
        config.Settings()


def test_large_denominators_switch_to_objects():
    A = CircleSet.from_pairs([(F(1, 3 ** 40), F(2, 3 ** 40))])
    B = A.preimage(5)
    assert B.den > 2 ** 63 and len(B) == 5
    assert B.measure() == A.measure()
    assert B.contains(F(1, 5 * 3 ** 40) + F(1, 5 * 3 ** 41))
    assert not B.contains(F(1, 5 * 3 ** 40) - F(1, 5 * 3 ** 41))


@settings(max_examples=300, deadline=None)
@given(pair_lists(), pair_lists())
def test_boolean_ops_match_grid_oracle(p, q):
    A, B = CircleSet.from_pairs(p), CircleSet.from_pairs(q)
    M = lcm(den_of(p), den_of(q))
    a, b = indicator(p, M), indicator(q, M)
    for got, want in ((A | B, a | b), (A & B, a & b), (A - B, a & ~b), (~A, ~a),
                      (A.symmetric_difference(B), a ^ b)):
        assert (indicator(got.intervals(), M) == want).all()
        assert got.measure() == grid_measure(want)


@settings(max_examples=300, deadline=None)
@given(pair_lists(), multipliers)
def test_preimage_matches_grid_oracle(p, c):
    A = CircleSet.from_pairs(p)
    M = den_of(p) * abs(c)
    got = indicator(A.preimage(c).intervals(), M)
    assert (got == preimage_indicator(p, c, M)).all()
    assert A.preimage(c).measure() == A.measure()


@settings(max_examples=300, deadline=None)
@given(pair_lists(), multipliers)
def test_image_is_smallest_superset(p, c):
    # image(c, A) is the union of the arcs c*[a, b); its preimage contains A
    A = CircleSet.from_pairs(p)
    I = A.image(c)
    assert A.issubset(I.preimage(c))
    assert I.measure() >= A.measure()
    for a, b in A.intervals():
        assert CircleSet.from_pairs([(a, b)]).image(c).issubset(I)


@settings(max_examples=200, deadline=None)
@given(pair_lists(), pair_lists(), multipliers)
def test_preimage_is_a_homomorphism(p, q, c):
    A, B = CircleSet.from_pairs(p), CircleSet.from_pairs(q)
    assert (A | B).preimage(c) == A.preimage(c) | B.preimage(c)
    assert (A & B).preimage(c) == A.preimage(c) & B.preimage(c)
    assert (~A).preimage(c) == ~A.preimage(c)


@settings(max_examples=200, deadline=None)
@given(pair_lists(), multipliers, multipliers)
def test_preimage_composes(p, c, d):
    A = CircleSet.from_pairs(p)
    assert A.preimage(c).preimage(d) == A.preimage(c * d)


@settings(max_examples=200, deadline=None)
@given(pair_lists(), st.fractions(0, 1, max_denominator=40))
def test_shift_preserves_measure_and_membership(p, r):
    A = CircleSet.from_pairs(p)
    S = A.shift(r)
    assert S.measure() == A.measure()
    M = lcm(den_of(p), r.denominator)
    base = indicator(p, M)
    k = int(r * M)
    assert (indicator(S.intervals(), M) == np.roll(base, k)).all()


@settings(max_examples=200, deadline=None)
@given(pair_lists())
def test_canonical_form(p):
    A = CircleSet.from_pairs(p)
    iv = A.intervals()
    for (a, b), (c, d) in zip(iv, iv[1:]):
        assert b < c
    assert all(0 <= a < b <= 1 for a, b in iv)
    assert CircleSet.from_pairs(iv) == A
    assert hash(CircleSet.from_pairs(iv)) == hash(A)
