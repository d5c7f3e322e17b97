"""Clique, chromatic, fractional and circular chromatic numbers of small graphs.

chi_f is the optimum of the fractional covering LP by maximal independent
sets, solved exactly.  chi_c is the least k/g admitting a homomorphism into
the circular clique K_{k/g} (vertices Z/k, i ~ j when g <= |i - j| <= k - g);
such a homomorphism places an arc of length g/k at each vertex, disjoint
along edges, which is also how coloring bases on the circle are built.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .circle import CircleSet, format_rational
from .errors import InvalidInput
from .lp import simplex_max
from .mis import max_independent_set

MAX_VERTICES = 24
LP_VERTICES = 20


@dataclass(frozen=True)
class FiniteGraph:
    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInput("vertex count must be nonnegative")
        es = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InvalidInput(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"edge ({u}, {v}) out of range for {self.n} vertices")
            es.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(es)))

    def neighbors(self) -> List[int]:
        nb = [0] * self.n
        for u, v in self.edges:
            nb[u] |= 1 << v
            nb[v] |= 1 << u
        return nb

    def complement_edges(self) -> List[Tuple[int, int]]:
        es = set(self.edges)
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if (u, v) not in es]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "FiniteGraph":
        if not isinstance(data, dict):
            raise InvalidInput("graph JSON must be an object")
        if "n" in data:
            n = data["n"]
        elif isinstance(data.get("vertices"), list):
            n = len(data["vertices"])
        elif isinstance(data.get("vertices"), int):
            n = data["vertices"]
        else:
            raise InvalidInput("graph JSON needs 'n' or 'vertices'")
        try:
            return cls(int(n), tuple(tuple(e) for e in data.get("edges", [])))
        except (TypeError, ValueError, IndexError) as exc:
            raise InvalidInput(f"bad edge list: {exc}") from exc


# small families ----------------------------------------------------------------
def cycle(n: int) -> FiniteGraph:
    return FiniteGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> FiniteGraph:
    return FiniteGraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def path(n: int) -> FiniteGraph:
    return FiniteGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def edgeless(n: int) -> FiniteGraph:
    return FiniteGraph(n, ())


def complete_bipartite(a: int, b: int) -> FiniteGraph:
    return FiniteGraph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def circulant(n: int, jumps: Sequence[int]) -> FiniteGraph:
    es = set()
    for i in range(n):
        for s in jumps:
            j = (i + s) % n
            if j != i:
                es.add((min(i, j), max(i, j)))
    return FiniteGraph(n, tuple(sorted(es)))


def petersen() -> FiniteGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return FiniteGraph(10, tuple(outer + spokes + inner))


def _guard(g: FiniteGraph, limit: int):
    if g.n > limit:
        raise InvalidInput(f"graph has {g.n} vertices, limit is {limit}")


# integer parameters --------------------------------------------------------------
def clique_number(g: FiniteGraph) -> int:
    _guard(g, MAX_VERTICES)
    if g.n == 0:
        return 0
    return max_independent_set(g.n, g.complement_edges()).size


def independence_number(g: FiniteGraph) -> int:
    _guard(g, MAX_VERTICES)
    return max_independent_set(g.n, list(g.edges)).size


def _colorable(g: FiniteGraph, k: int) -> Optional[List[int]]:
    nb = g.neighbors()
    order = sorted(range(g.n), key=lambda v: (-bin(nb[v]).count("1"), v))
    color = [-1] * g.n

    def go(i: int, used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        banned = {color[u] for u in range(g.n) if nb[v] >> u & 1 and color[u] >= 0}
        # symmetry: a fresh color only as the next unused one
        for c in range(min(k, used + 1)):
            if c not in banned:
                color[v] = c
                if go(i + 1, max(used, c + 1)):
                    return True
                color[v] = -1
        return False

    return list(color) if go(0, 0) else None


def chromatic_number(g: FiniteGraph) -> int:
    _guard(g, MAX_VERTICES)
    if g.n == 0:
        return 0
    k = max(1, clique_number(g))
    while _colorable(g, k) is None:
        k += 1
    return k


def proper_coloring(g: FiniteGraph) -> List[int]:
    return _colorable(g, chromatic_number(g))


# fractional chromatic number ----------------------------------------------------
def maximal_independent_sets(g: FiniteGraph) -> List[int]:
    """All maximal independent sets as bitmasks (cliques of the complement),
    by Bron-Kerbosch with pivoting."""
    nb = g.neighbors()
    full = (1 << g.n) - 1
    comp = [full & ~nb[v] & ~(1 << v) for v in range(g.n)]
    out: List[int] = []

    def bk(R: int, P: int, X: int):
        if not P and not X:
            out.append(R)
            return
        PX = P | X
        u = max((v for v in range(g.n) if PX >> v & 1), key=lambda v: bin(comp[v] & P).count("1"))
        cand = P & ~comp[u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            bk(R | low, P & comp[v], X & comp[v])
            P &= ~low
            X |= low
            cand &= ~low

    if g.n:
        bk(0, full, 0)
    return sorted(out)


@dataclass
class FractionalResult:
    value: Fraction
    weights: Dict[int, Fraction]   # independent set bitmask -> weight
    vertex_weights: List[Fraction]


def fractional_chromatic_full(g: FiniteGraph) -> FractionalResult:
    _guard(g, LP_VERTICES)
    if g.n == 0:
        return FractionalResult(Fraction(0), {}, [])
    sets = maximal_independent_sets(g)
    # dual form: max sum y_v with sum_{v in I} y_v <= 1 for every I
    A = [[1 if I >> v & 1 else 0 for v in range(g.n)] for I in sets]
    res = simplex_max([1] * g.n, A, [1] * len(sets))
    cover = {I: w for I, w in zip(sets, res.dual) if w != 0}
    return FractionalResult(res.value, cover, res.primal)


def fractional_chromatic(g: FiniteGraph) -> Fraction:
    return fractional_chromatic_full(g).value


# circular chromatic number --------------------------------------------------------
def circular_clique_hom(g: FiniteGraph, k: int, q: int) -> Optional[List[int]]:
    """A map V -> Z/k with q <= |c(u) - c(v)| <= k - q on every edge, or None."""
    nb = g.neighbors()
    order = sorted(range(g.n), key=lambda v: (-bin(nb[v]).count("1"), v))
    col = [-1] * g.n

    def ok(c: int, v: int) -> bool:
        m = nb[v]
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            if col[u] >= 0:
                diff = (c - col[u]) % k
                if not (q <= diff <= k - q):
                    return False
        return True

    def go(i: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        # first vertex of each component pinned to 0 (the target is vertex-transitive)
        if not any(col[u] >= 0 for u in range(g.n) if nb[v] >> u & 1) and _fresh_component(v):
            choices = [0]
        else:
            choices = range(k)
        for c in choices:
            if ok(c, v):
                col[v] = c
                if go(i + 1):
                    return True
                col[v] = -1
        return False

    comp_id = _components(g)

    def _fresh_component(v: int) -> bool:
        return all(col[u] < 0 for u in range(g.n) if comp_id[u] == comp_id[v])

    return list(col) if go(0) else None


def _components(g: FiniteGraph) -> List[int]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        parent[find(u)] = find(v)
    return [find(v) for v in range(g.n)]


@dataclass
class CircularResult:
    value: Fraction
    k: int
    q: int
    coloring: List[int]


def circular_chromatic_full(g: FiniteGraph) -> CircularResult:
    """Least k/q in (chi - 1, chi] with q <= k <= |V| and a homomorphism into K_{k/q}."""
    _guard(g, LP_VERTICES)
    if g.n == 0:
        return CircularResult(Fraction(0), 0, 1, [])
    chi = chromatic_number(g)
    if chi <= 2:
        k = chi
        return CircularResult(Fraction(k), k, 1, circular_clique_hom(g, k, 1))
    cands = sorted({Fraction(k, q) for k in range(1, g.n + 1) for q in range(1, k + 1)
                    if chi - 1 < Fraction(k, q) <= chi})
    for r in cands:
        col = circular_clique_hom(g, r.numerator, r.denominator)
        if col is not None:
            return CircularResult(r, r.numerator, r.denominator, col)
    raise AssertionError("no circular coloring found up to chi")


def circular_chromatic(g: FiniteGraph) -> Fraction:
    return circular_chromatic_full(g).value


def is_star_extremal(g: FiniteGraph) -> bool:
    return fractional_chromatic(g) == circular_chromatic(g)


def sigma_bounds(g: FiniteGraph) -> Tuple[Fraction, Fraction]:
    """(1/chi_c, 1/chi_f): bounds on the largest coloring base measure."""
    if not g.edges:
        return Fraction(1), Fraction(1)
    return 1 / circular_chromatic(g), 1 / fractional_chromatic(g)


# coloring bases --------------------------------------------------------------------
@dataclass
class ColoringBase:
    A: CircleSet
    phi: List[Fraction]

    def check(self, g: FiniteGraph) -> bool:
        shifted = [self.A.shift(p) for p in self.phi]
        return all(shifted[u].isdisjoint(shifted[v]) for u, v in g.edges)

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "phi": [format_rational(p) for p in self.phi],
                "measure": format_rational(self.A.measure())}


def coloring_base(g: FiniteGraph, delta=0) -> ColoringBase:
    """A = [0, 1/chi_c - delta) with phi(v) = c(v)/k from a K_{k/q} coloring."""
    delta = Fraction(delta)
    if delta < 0:
        raise InvalidInput("delta must be nonnegative")
    if g.n == 0:
        raise InvalidInput("graph has no vertices")
    res = circular_chromatic_full(g)
    if not g.edges:
        length, phi = Fraction(1) - delta, [Fraction(0)] * g.n
    else:
        length = Fraction(res.q, res.k) - delta
        phi = [Fraction(c, res.k) for c in res.coloring]
    if length <= 0:
        raise InvalidInput(f"delta must be below 1/chi_c = {Fraction(res.q, res.k)}")
    base = ColoringBase(CircleSet.from_pairs([(0, length)]), phi)
    if not base.check(g):
        raise AssertionError("coloring base fails an edge")
    return base
