"""Sets on the circle avoiding two-variable equations c_i x = c_j y.

A set A is (c1, c2)-free when c1*A and c2*A are disjoint; a family is free
when this holds for every equation it lists.  Every returned set is checked
from scratch against its equations before it leaves this module.

Routes for a pair, after dividing out g = gcd(c1, c2) (any (c1/g, c2/g)-free
set pulls back through x -> g x to a (c1, c2)-free set of equal measure):

* one coefficient is +-1, the other lambda with |lambda| >= 2: a 2-tower
  base C for T_lambda and A = T_lambda^{-1}(C), so lambda*A = C misses A;
* ratio -1: the set [delta/2, 1/2) (a comb after the pullback);
* both |c_i| >= 2: a (t, 2)-tower base for (c1, c2) with t > 1/delta and
  A = union over j = 1..t-1 of f_(j,1)^{-1}(base).

When the tower route falls short, a search over unions of the cells
[i/q, (i+1)/q) (an independent set in the cell conflict graph) is tried as
well and the larger verified set is kept.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .circle import CircleSet, format_rational, union_all
from .errors import InvalidInput, ResourceExhausted
from .freeness import check_free
from .mis import max_independent_set

# interval cap used while building towers for free sets; the tower routes
# are exploratory and should fail fast rather than fill memory
TOWER_INTERVAL_CAP = 4_000_000
CELL_Q_MAX = 84
CELL_NODE_BUDGET = 20_000


def verify_free(A: CircleSet, c1: int, c2: int) -> bool:
    """True iff c1*A and c2*A are disjoint."""
    return A.image(int(c1)).isdisjoint(A.image(int(c2)))


@dataclass
class FreeSetReport:
    set: CircleSet
    measure: Fraction
    target: Fraction
    achieved_target: bool
    equations: List[Tuple[int, int]]
    verified: List[bool]
    route: str
    reduction: str
    routes: Dict[str, Fraction] = field(default_factory=dict)
    details: Dict = field(default_factory=dict)

    @property
    def all_verified(self) -> bool:
        return all(self.verified)

    def to_json(self) -> dict:
        return {
            "set": self.set.to_json(),
            "measure": format_rational(self.measure),
            "target": format_rational(self.target),
            "achievedTarget": self.achieved_target,
            "verifiedEquations": [{"c1": a, "c2": b, "free": ok}
                                  for (a, b), ok in zip(self.equations, self.verified)],
            "route": self.route,
            "reduction": self.reduction,
            "routes": {k: format_rational(v) for k, v in self.routes.items()},
            "details": self.details,
        }


def _finish(A: CircleSet, eqs, target, route, reduction, routes, details) -> FreeSetReport:
    checks = [verify_free(A, a, b) for a, b in eqs]
    if not all(checks):
        raise AssertionError(f"route {route} produced a set that is not free")
    mu = A.measure()
    # c*A has measure >= mu(A) for every nonzero c, so two disjoint images cap mu(A) at 1/2
    if eqs and mu > Fraction(1, 2):
        raise AssertionError(f"free set of measure {mu} exceeds 1/2")
    return FreeSetReport(A, mu, target, mu >= target, list(eqs), checks, route, reduction,
                         routes, details)


# cell search ------------------------------------------------------------------------
def _cell_arc(c: int, a: int, q: int) -> Tuple[int, int]:
    """c * [a, a+1)/q as (start, length) in units of 1/q."""
    if c > 0:
        return (c * a) % q, c
    return (c * (a + 1)) % q, -c


def _arcs_meet(s1, l1, s2, l2, q) -> bool:
    if l1 >= q or l2 >= q:
        return True
    return (s2 - s1) % q < l1 or (s1 - s2) % q < l2


def cell_free_set(eqs: Sequence[Tuple[int, int]], q: int, node_budget=CELL_NODE_BUDGET):
    """Largest union of cells [i/q, (i+1)/q) free for every equation.

    Cells a, b conflict when c_i*cell_a meets c_j*cell_b or c_i*cell_b meets
    c_j*cell_a; a free union is an independent set avoiding self-conflicts.
    Returns (set, optimal).
    """
    arcs = {c: [_cell_arc(c, a, q) for a in range(q)] for e in eqs for c in e}
    edges, loops = [], set()
    for a in range(q):
        for b in range(a, q):
            for c1, c2 in eqs:
                x1, x2 = arcs[c1], arcs[c2]
                if _arcs_meet(*x1[a], *x2[b], q) or _arcs_meet(*x1[b], *x2[a], q):
                    if a == b:
                        loops.add(a)
                    else:
                        edges.append((a, b))
                    break
    keep = [v for v in range(q) if v not in loops]
    pos = {v: i for i, v in enumerate(keep)}
    sub = [(pos[a], pos[b]) for a, b in edges if a in pos and b in pos]
    res = max_independent_set(len(keep), sub, node_budget)
    cells = sorted(keep[i] for i in res.vertices)
    A = CircleSet.from_pairs([(Fraction(i, q), Fraction(i + 1, q)) for i in cells])
    return A, res.optimal


def best_cell_set(eqs, q_max: int = CELL_Q_MAX, node_budget=CELL_NODE_BUDGET):
    best, best_q, best_opt = CircleSet.empty(), 0, True
    for q in range(2, q_max + 1):
        A, opt = cell_free_set(eqs, q, node_budget)
        if A.measure() > best.measure():
            best, best_q, best_opt = A, q, opt
    return best, {"q": best_q, "optimal": best_opt, "qMax": q_max}


# pair routes ------------------------------------------------------------------------
def _one_sided(lam: int, delta: Fraction, arc_budget=None):
    from .skyscraper import skyscraper_tower
    sky = skyscraper_tower(lam, 2, 2 * delta, arc_budget=arc_budget)
    from .towers import verify_tower
    ok, tower = verify_tower((lam,), sky.base, (2,))
    if not ok:
        raise AssertionError("skyscraper base is not a 2-tower")
    return sky.base.preimage(lam), {"tower": format_rational(tower), "skyscraper": sky.stats}


def _eq_tower_set(c1: int, c2: int, delta: Fraction, arc_budget=None):
    """The (t, 2)-tower assembly; returns (set, details)."""
    from .towers import action_preimage, build_tower
    t = math.floor(1 / delta) + 1
    details = {"shape": [t, 2]}
    with config.limits(interval_cap=min(TOWER_INTERVAL_CAP, config.current().interval_cap)):
        try:
            kw = {"arc_budget": arc_budget} if arc_budget else {}
            cert = build_tower((c1, c2), (t, 2), delta / 2, strategy="hybrid", **kw)
        except ResourceExhausted as exc:
            details["stopped"] = str(exc)
            return CircleSet.empty(), details
        details["tower"] = format_rational(cert.tower_measure)
        details["towerTargetMet"] = cert.target_met
        details["crossPairs"] = cert.stats.get("cross_pairs", [])
        if not cert.verified or cert.base.is_empty():
            return CircleSet.empty(), details
        try:
            B = union_all(action_preimage((c1, c2), (j, 1), cert.base) for j in range(1, t))
        except ResourceExhausted as exc:
            details["stopped"] = str(exc)
            return CircleSet.empty(), details
    return B, details


def free_set_pair(c1: int, c2: int, delta, arc_budget: Optional[int] = None,
                  cell_search: bool = True) -> FreeSetReport:
    """A verified (c1, c2)-free set aiming at measure 1/2 - delta."""
    c1, c2 = int(c1), int(c2)
    delta = Fraction(delta)
    if c1 == 0 or c2 == 0:
        raise InvalidInput("coefficients must be nonzero")
    if c1 == c2:
        raise InvalidInput("coefficients must differ")
    if delta < 0 or delta >= Fraction(1, 2):
        raise InvalidInput("delta must lie in [0, 1/2)")
    g = math.gcd(c1, c2)
    r1, r2 = c1 // g, c2 // g
    reduction = "coprime" if g == 1 else f"divided by {g}, pulled back through x -> {g}x"
    target = Fraction(1, 2) - delta
    routes: Dict[str, Fraction] = {}
    details: Dict = {"reduced": [r1, r2]}
    if abs(r1) == 1 or abs(r2) == 1:
        # (+-1, r) and (r, +-1) both amount to A disjoint from lam*A
        lam = r1 * r2
        if lam == -1:
            route = "comb"
            A = CircleSet.from_pairs([(delta / 2, Fraction(1, 2))])
        else:
            if delta == 0:
                raise InvalidInput("delta must be positive for this pair")
            route = "one-sided-tower"
            A, info = _one_sided(lam, delta, arc_budget)
            details.update(info)
            details["lambda"] = lam
    else:
        if delta == 0:
            raise InvalidInput("delta must be positive for this pair")
        route = "pair-tower"
        A, info = _eq_tower_set(r1, r2, delta, arc_budget)
        details.update(info)
    routes[route] = A.measure()
    if cell_search and A.measure() < target:
        C, info = best_cell_set([(r1, r2)])
        routes["cell-search"] = C.measure()
        details["cellSearch"] = info
        if C.measure() > A.measure():
            A, route = C, "cell-search"
    if g > 1:
        A = A.preimage(g)
    return _finish(A, [(c1, c2)], target, route, reduction, routes, details)


# families ----------------------------------------------------------------------------
@dataclass(frozen=True)
class EquationFamily:
    coeffs: Tuple[int, ...]          # c_0 = 1, c_1, ..., c_d
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if not cs or cs[0] != 1:
            raise InvalidInput("the first coefficient must be 1")
        if any(c == 0 for c in cs):
            raise InvalidInput("coefficients must be nonzero")
        es = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if not (0 <= i < len(cs) and 0 <= j < len(cs)) or i == j:
                raise InvalidInput(f"bad edge ({i}, {j})")
            if cs[i] == cs[j]:
                raise InvalidInput(f"edge ({i}, {j}) joins equal coefficients")
            es.append((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", tuple(sorted(set(es))))

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    def equations(self) -> List[Tuple[int, int]]:
        return [(self.coeffs[i], self.coeffs[j]) for i, j in self.edges]

    def graph(self):
        from .graphs import FiniteGraph
        return FiniteGraph(len(self.coeffs), self.edges)

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "edges": [list(e) for e in self.edges]}


def _tower_assembly(fam: EquationFamily, delta: Fraction, box, arc_budget=None):
    """Grid witness S in the box N, an (N + m)-tower base B and the union of
    f_n^{-1}(B) over n in S + m."""
    from .lattice import LatticeGraph, difference_set, margin, max_admissible
    from .towers import action_preimage, build_tower
    d = fam.d
    lg = LatticeGraph.on_basis(d, fam.edges)
    D = difference_set(lg)
    N = tuple(box) if box is not None else (2,) * d
    w = max_admissible(D, N)
    m = margin(lg)
    shape = tuple(a + b for a, b in zip(N, m))
    details = {"witness": w.to_json(), "margin": list(m), "shape": list(shape)}
    action = fam.coeffs[1:]
    with config.limits(interval_cap=min(TOWER_INTERVAL_CAP, config.current().interval_cap)):
        try:
            kw = {"arc_budget": arc_budget} if arc_budget else {}
            strategy = "skyscraper" if d == 1 else "hybrid"
            cert = build_tower(action, shape, delta, strategy=strategy, **kw)
            details["tower"] = format_rational(cert.tower_measure)
            details["towerTargetMet"] = cert.target_met
            if not cert.verified or cert.base.is_empty():
                return CircleSet.empty(), details
            starts = [tuple(a + b for a, b in zip(s, m)) for s in w.cells]
            A = union_all(action_preimage(action, n, cert.base) for n in starts)
        except ResourceExhausted as exc:
            details["stopped"] = str(exc)
            return CircleSet.empty(), details
    return A, details


def family_free_set(fam: EquationFamily, delta, box=None, arc_budget: Optional[int] = None,
                    cell_search: bool = True) -> FreeSetReport:
    """A verified set free for every equation of the family, aiming at
    1/chi_c(Gamma) - delta."""
    from .graphs import circular_chromatic, is_star_extremal
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    if not fam.edges:
        raise InvalidInput("the family has no equations")
    if len(fam.edges) == 1:
        (i, j), = fam.edges
        rep = free_set_pair(fam.coeffs[i], fam.coeffs[j], delta, arc_budget, cell_search)
        rep.route = "pair/" + rep.route
        return rep
    rep = check_free(fam.coeffs[1:])
    if not rep.free:
        raise InvalidInput(f"coefficients {fam.coeffs[1:]} are not multiplicatively independent")
    g = fam.graph()
    if not is_star_extremal(g):
        raise InvalidInput("the equation graph is not star-extremal")
    chi_c = circular_chromatic(g)
    target = 1 / chi_c - delta
    eqs = fam.equations()
    routes: Dict[str, Fraction] = {}
    A, details = _tower_assembly(fam, delta, box, arc_budget)
    route = "tower-assembly"
    routes[route] = A.measure()
    details["chiC"] = format_rational(chi_c)
    if cell_search and A.measure() < target:
        C, info = best_cell_set(eqs)
        routes["cell-search"] = C.measure()
        details["cellSearch"] = info
        if C.measure() > A.measure():
            A, route = C, "cell-search"
    return _finish(A, eqs, target, route, "none", routes, details)
