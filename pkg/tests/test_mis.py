import random

from hypothesis import given, settings, strategies as st

from commtower.mis import brute_force_mis, is_independent, max_independent_set

from oracles import brute_mis


@st.composite
def graphs(draw, max_n=11):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_mis_matches_oracles(g):
    n, edges = g
    r = max_independent_set(n, edges)
    assert r.optimal and is_independent(r.vertices, edges)
    assert r.size == brute_mis(n, edges) == brute_force_mis(n, edges).size
    assert r.upper_bound == r.size


def test_budget_gives_bound():
    rng = random.Random(5)
    n = 60
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
    r = max_independent_set(n, edges, node_budget=5)
    assert not r.optimal
    assert r.size <= r.upper_bound
    assert is_independent(r.vertices, edges)
    full = max_independent_set(n, edges)
    assert r.size <= full.size <= r.upper_bound


def test_cycle_values():
    for n in range(3, 12):
        edges = [(i, (i + 1) % n) for i in range(n)]
        assert max_independent_set(n, edges).size == n // 2
