"""Difference-avoiding sets in boxes and tori of Z^d.

A graph on V in N_0^d defines the symmetric difference set D of its edges;
S is admissible when no difference of two elements of S lies in D.  The
maximum admissible density in a box N brackets the limiting density d_Gamma
from both sides, and admissible subsets of a torus Z^d / L give periodic
admissible sets, hence certified lower bounds.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import config
from .circle import format_rational
from .errors import InvalidInput
from .mis import brute_force_mis, max_independent_set

Vec = Tuple[int, ...]


def _vec(v, d=None) -> Vec:
    if isinstance(v, int):
        v = (v,)
    try:
        t = tuple(int(x) for x in v)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"not an integer vector: {v!r}") from exc
    if d is not None and len(t) != d:
        raise InvalidInput(f"vector {t} should have dimension {d}")
    return t


@dataclass(frozen=True)
class LatticeGraph:
    dim: int
    vertices: Tuple[Vec, ...]
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        vs = tuple(_vec(v, self.dim) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        if len(set(vs)) != len(vs):
            raise InvalidInput("vertices must be distinct")
        if any(x < 0 for v in vs for x in v):
            raise InvalidInput("vertices must lie in N_0^d")
        es = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if not (0 <= i < len(vs) and 0 <= j < len(vs)):
                raise InvalidInput(f"edge ({i}, {j}) references a missing vertex")
            if i == j:
                raise InvalidInput(f"self-loop at vertex {i}")
            es.append((i, j))
        object.__setattr__(self, "edges", tuple(es))

    @classmethod
    def from_json(cls, data) -> "LatticeGraph":
        if not isinstance(data, dict) or "vertices" not in data:
            raise InvalidInput("graph JSON needs 'vertices' and 'edges'")
        vs = [_vec(v) for v in data["vertices"]]
        if not vs:
            raise InvalidInput("graph needs at least one vertex")
        return cls(len(vs[0]), tuple(vs), tuple(tuple(e) for e in data.get("edges", [])))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "edges": [list(e) for e in self.edges]}

    @classmethod
    def on_basis(cls, d: int, edges: Iterable[Tuple[int, int]]) -> "LatticeGraph":
        """Graph on {0, e_1, ..., e_d}; vertex i is e_i (vertex 0 the origin)."""
        vs = [tuple([0] * d)]
        for i in range(d):
            v = [0] * d
            v[i] = 1
            vs.append(tuple(v))
        return cls(d, tuple(vs), tuple(edges))


class DifferenceSet:
    """A finite symmetric set of nonzero vectors in Z^d."""

    __slots__ = ("dim", "vectors")

    def __init__(self, vectors: Iterable, dim: Optional[int] = None, symmetrize: bool = False):
        vs = [_vec(v) for v in vectors]
        if dim is None:
            if not vs:
                raise InvalidInput("empty difference set needs an explicit dimension")
            dim = len(vs[0])
        vs = [_vec(v, dim) for v in vs]
        s = set(vs)
        if symmetrize:
            s |= {tuple(-x for x in v) for v in s}
        if any(not any(v) for v in s):
            raise InvalidInput("0 cannot belong to a difference set")
        for v in s:
            if tuple(-x for x in v) not in s:
                raise InvalidInput(f"difference set is not symmetric: missing {tuple(-x for x in v)}")
        self.dim = dim
        self.vectors: FrozenSet[Vec] = frozenset(s)

    def __iter__(self):
        return iter(sorted(self.vectors))

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, v):
        return tuple(v) in self.vectors

    def __eq__(self, other):
        return isinstance(other, DifferenceSet) and self.dim == other.dim and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.dim, self.vectors))

    def __repr__(self):
        return f"DifferenceSet({sorted(self.vectors)})"

    def to_json(self) -> list:
        return [list(v) for v in sorted(self.vectors)]

    @classmethod
    def from_json(cls, data, dim: Optional[int] = None) -> "DifferenceSet":
        if not isinstance(data, list):
            raise InvalidInput("difference set JSON must be an array of integer vectors")
        return cls(data, dim=dim, symmetrize=True)


def difference_set(g: LatticeGraph) -> DifferenceSet:
    vs = []
    for i, j in g.edges:
        u, v = g.vertices[i], g.vertices[j]
        vs.append(tuple(a - b for a, b in zip(u, v)))
    return DifferenceSet(vs, dim=g.dim, symmetrize=True)


def is_admissible(S: Iterable, D: DifferenceSet) -> bool:
    pts = [_vec(s) for s in S]
    ps = set(pts)
    for s in pts:
        for v in D.vectors:
            if tuple(a + b for a, b in zip(s, v)) in ps:
                return False
    return True


@dataclass
class GridWitness:
    box: Vec
    cells: List[Vec]
    density: Fraction
    optimal: bool
    upper_bound: Fraction
    nodes: int = 0

    def to_json(self) -> dict:
        return {"box": list(self.box), "cells": [list(c) for c in self.cells],
                "density": format_rational(self.density), "optimal": self.optimal,
                "upperBound": format_rational(self.upper_bound)}

    @classmethod
    def from_json(cls, data) -> "GridWitness":
        from .circle import parse_rational
        try:
            return cls(tuple(data["box"]), [tuple(c) for c in data["cells"]],
                       parse_rational(data["density"]), bool(data["optimal"]),
                       parse_rational(data.get("upperBound", data["density"])))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"bad grid witness: {exc}") from exc


def box_cells(N: Sequence[int]) -> List[Vec]:
    return list(itertools.product(*[range(x) for x in N]))


def _box(N, d) -> Vec:
    N = _vec(N)
    if len(N) != d:
        raise InvalidInput(f"box {N} does not match dimension {d}")
    if any(x < 1 for x in N):
        raise InvalidInput("box sides must be positive")
    return N


def conflict_graph(D: DifferenceSet, N: Sequence[int]):
    cells = box_cells(N)
    index = {c: i for i, c in enumerate(cells)}
    edges = set()
    for i, c in enumerate(cells):
        for v in D.vectors:
            j = index.get(tuple(a + b for a, b in zip(c, v)))
            if j is not None and j != i:
                edges.add((min(i, j), max(i, j)))
    return cells, sorted(edges)


def max_admissible(D: DifferenceSet, N, node_budget=None) -> GridWitness:
    """Largest S in the box prod [0, N(i)) with (S - S) disjoint from D."""
    N = _box(N, D.dim)
    total = math.prod(N)
    cells, edges = conflict_graph(D, N)
    res = max_independent_set(len(cells), edges, node_budget)
    S = [cells[i] for i in res.vertices]
    return GridWitness(N, S, Fraction(res.size, total), res.optimal,
                       Fraction(res.upper_bound, total), res.nodes)


def brute_force_max(D: DifferenceSet, N) -> GridWitness:
    """Exhaustive oracle for boxes with at most 24 cells."""
    N = _box(N, D.dim)
    total = math.prod(N)
    if total > 24:
        raise InvalidInput(f"brute force limited to 24 cells, box has {total}")
    cells, edges = conflict_graph(D, N)
    res = brute_force_mis(len(cells), edges)
    S = [cells[i] for i in res.vertices]
    return GridWitness(N, S, Fraction(res.size, total), True, Fraction(res.size, total))


def margin(g: LatticeGraph) -> Vec:
    """Componentwise max over V plus one: the least m with m > v for all v."""
    return tuple(max(v[i] for v in g.vertices) + 1 for i in range(g.dim))


@dataclass
class Sandwich:
    lower: Fraction
    upper: Fraction
    upper_box: Fraction          # M + sum 1/N(i)
    M: Fraction
    margin: Vec
    witness: GridWitness

    def to_json(self) -> dict:
        return {"lower": format_rational(self.lower), "upper": format_rational(self.upper),
                "upperWithBoundary": format_rational(self.upper_box),
                "M": format_rational(self.M), "margin": list(self.margin),
                "witness": self.witness.to_json()}


def sandwich(g: LatticeGraph, N, node_budget=None) -> Sandwich:
    """Bounds on d_Gamma from the box N.

    lower = pi(N)/pi(N+m) M(N); upper = M(N) by windowing (any admissible
    set has density at most M(N) in every translate of the box), which is
    never above the boundary form M(N) + sum 1/N(i), also reported.
    When the solver stops early, M's certified upper bound is used above.
    """
    D = difference_set(g) if g.edges else DifferenceSet([], dim=g.dim)
    N = _box(N, g.dim)
    w = max_admissible(D, N, node_budget)
    m = margin(g)
    ratio = Fraction(math.prod(N), math.prod(a + b for a, b in zip(N, m)))
    Mup = w.upper_bound
    boundary = Mup + sum(Fraction(1, x) for x in N)
    return Sandwich(ratio * w.density, min(Mup, boundary), boundary, w.density, m, w)


def _torus_guard(D: DifferenceSet, L: Vec):
    for v in D.vectors:
        if all(x % l == 0 for x, l in zip(v, L)):
            raise InvalidInput(f"difference {v} vanishes modulo period {list(L)}")


def torus_conflicts(D: DifferenceSet, L: Sequence[int]):
    cells = box_cells(L)
    index = {c: i for i, c in enumerate(cells)}
    edges = set()
    for i, c in enumerate(cells):
        for v in D.vectors:
            j = index[tuple((a + b) % l for a, b, l in zip(c, v, L))]
            edges.add((min(i, j), max(i, j)))
    return cells, sorted(edges)


@dataclass
class PeriodicResult:
    period: Vec
    cells: List[Vec]
    density: Fraction
    optimal: bool

    def to_json(self) -> dict:
        return {"period": list(self.period), "cells": [list(c) for c in self.cells],
                "density": format_rational(self.density), "optimal": self.optimal}


def periodic_search(D: DifferenceSet, L, node_budget=None) -> PeriodicResult:
    """Largest admissible subset of the torus prod Z/L(i).

    Its periodic extension to Z^d avoids D, so the density is a certified
    lower bound for nu(D) (and for d_Gamma when D comes from a graph).
    """
    L = _box(L, D.dim)
    _torus_guard(D, L)
    cells, edges = torus_conflicts(D, L)
    res = max_independent_set(len(cells), edges, node_budget)
    return PeriodicResult(L, [cells[i] for i in res.vertices],
                          Fraction(res.size, math.prod(L)), res.optimal)


def is_periodic_admissible(cells: Iterable, D: DifferenceSet, L: Sequence[int]) -> bool:
    cs = {tuple(int(x) % l for x, l in zip(c, L)) for c in cells}
    for c in cs:
        for v in D.vectors:
            if tuple((a + b) % l for a, b, l in zip(c, v, L)) in cs:
                return False
    return True


def periodic_extension(cells, L, window) -> List[Vec]:
    """The points of the periodic set inside the box prod [0, window(i))."""
    cs = {tuple(c) for c in cells}
    return [p for p in box_cells(window) if tuple(x % l for x, l in zip(p, L)) in cs]


@dataclass
class MotzkinBounds:
    lower: Fraction
    upper: Fraction
    best_period: Optional[Vec]

    def to_json(self) -> dict:
        return {"lower": format_rational(self.lower), "upper": format_rational(self.upper),
                "period": None if self.best_period is None else list(self.best_period)}


def motzkin_bounds(D: DifferenceSet, N, periods: Sequence, node_budget=None) -> MotzkinBounds:
    """lower <= nu(D) <= upper: best periodic density over ``periods`` and
    the box maximum M_D(N)."""
    if len(D) == 0:
        return MotzkinBounds(Fraction(1), Fraction(1), None)
    best, bp = Fraction(0), None
    for L in periods:
        r = periodic_search(D, L, node_budget)
        if r.density > best:
            best, bp = r.density, r.period
    w = max_admissible(D, N, node_budget)
    return MotzkinBounds(best, w.upper_bound, bp)
