"""Maximum independent sets by branch and bound.

An independent set of the conflict graph is a clique of its complement, so
we run a coloring-bounded max-clique search (greedy sequential coloring of
the candidate set bounds the clique size) on the complement.  Adjacency is
kept as Python integers used as bitsets.  Vertices are ordered by conflict
degree, ties broken by index, which makes results deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import config
from .errors import InvalidInput


@dataclass
class MISResult:
    vertices: List[int]   # sorted original labels
    size: int
    optimal: bool
    upper_bound: int
    nodes: int


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _color_bound(cand: int, comp: List[int]) -> Tuple[List[int], List[int]]:
    """Greedy coloring of cand in the complement graph; vertices in color order."""
    order, colors = [], []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~low
            avail &= ~comp[v]
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def _greedy(nv: int, conf: List[int]) -> List[int]:
    """Min-degree greedy independent set (in ordered labels)."""
    alive = (1 << nv) - 1
    out = []
    while alive:
        best, bd = -1, None
        for v in _bits(alive):
            dv = bin(conf[v] & alive).count("1")
            if bd is None or dv < bd:
                best, bd = v, dv
        out.append(best)
        alive &= ~(conf[best] | (1 << best))
    return out


def max_independent_set(n: int, edges: Sequence[Tuple[int, int]], node_budget=None) -> MISResult:
    """Exact maximum independent set of a graph on vertices 0..n-1.

    On budget exhaustion returns the best set found, optimal=False, and an
    upper bound from the root clique cover.
    """
    if n < 0:
        raise InvalidInput("vertex count must be nonnegative")
    if n == 0:
        return MISResult([], 0, True, 0, 0)
    budget = node_budget or config.current().node_budget
    adj = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise InvalidInput(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInput(f"edge ({u}, {v}) out of range")
        adj[u].add(v)
        adj[v].add(u)
    # relabel: ascending conflict degree, index tie-break
    order = sorted(range(n), key=lambda v: (len(adj[v]), v))
    pos = {v: i for i, v in enumerate(order)}
    conf = [0] * n
    for v in range(n):
        m = 0
        for u in adj[v]:
            m |= 1 << pos[u]
        conf[pos[v]] = m
    full = (1 << n) - 1
    comp = [full & ~conf[i] & ~(1 << i) for i in range(n)]

    best = sorted(_greedy(n, conf))
    best_size = len(best)
    _, root_colors = _color_bound(full, comp)
    root_bound = root_colors[-1] if root_colors else 0
    state = {"nodes": 0, "exhausted": False}
    cur: List[int] = []

    def expand(cand: int):
        nonlocal best, best_size
        state["nodes"] += 1
        if state["nodes"] > budget:
            state["exhausted"] = True
            return
        vs, cols = _color_bound(cand, comp)
        for i in range(len(vs) - 1, -1, -1):
            if len(cur) + cols[i] <= best_size:
                return
            v = vs[i]
            cur.append(v)
            nc = cand & comp[v]
            if nc:
                expand(nc)
                if state["exhausted"]:
                    return
            elif len(cur) > best_size:
                best, best_size = sorted(cur), len(cur)
            cur.pop()
            cand &= ~(1 << v)

    if best_size < root_bound:
        expand(full)
    labels = sorted(order[i] for i in best)
    optimal = not state["exhausted"]
    ub = best_size if optimal else max(best_size, root_bound)
    return MISResult(labels, best_size, optimal, ub, state["nodes"])


def brute_force_mis(n: int, edges: Sequence[Tuple[int, int]], limit: int = 24) -> MISResult:
    """Exhaustive maximum independent set over all 2^n subsets (n <= limit).

    Returns the first maximum in increasing bitmask order.
    """
    if n > limit:
        raise InvalidInput(f"brute force limited to {limit} vertices, got {n}")
    if n == 0:
        return MISResult([], 0, True, 0, 0)
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(masks.size, dtype=bool)
    for u, v in edges:
        ok &= ((masks >> np.uint32(u)) & (masks >> np.uint32(v)) & np.uint32(1)) == 0
    sizes = np.bitwise_count(masks).astype(np.int64)
    sizes[~ok] = -1
    best = int(np.argmax(sizes))
    verts = [i for i in range(n) if best >> i & 1]
    return MISResult(verts, len(verts), True, len(verts), 1 << n)


def is_independent(vertices: Sequence[int], edges: Sequence[Tuple[int, int]]) -> bool:
    s = set(vertices)
    return not any(u in s and v in s for u, v in edges)
