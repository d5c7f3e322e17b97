"""Skyscraper towers for a single multiplication map T = T_c.

Over a base C, level h is the set of points whose first visit to C happens
at time h: L_0 = C and L_h = T^{-1}(L_{h-1}) minus C.  The levels are
pairwise disjoint.  Cutting every column at the levels h = n-1, 2n-1, ...
(counted down from the next visit to C) gives an n-tower with base the
union of those levels: the tower covers n mu(L_h) for each chosen h.

Levels get exponentially many arcs, so the construction runs until either
the target measure or the arc budget is reached.  Several small bases are
tried and the most promising one is run in full.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .circle import CircleSet, format_rational, union_all
from .errors import InvalidInput

_NEGLIGIBLE = Fraction(1, 2 ** 40)


@dataclass
class LevelRun:
    base_set: CircleSet
    n: int
    tower: Fraction           # n * mu(base)
    base: CircleSet           # union of the chosen levels
    height: int               # last level computed
    level_measures: List[Fraction]
    level_arcs: List[int]
    stopped: str              # "target", "budget", "exhausted", "converged",
                              # "unreachable", "height"

    @property
    def remainder(self) -> Fraction:
        return 1 - sum(self.level_measures)


def spec_base(n: int, eps) -> CircleSet:
    """[0, 2^-m) with m least such that 2^-m <= eps/(2n)."""
    eps = Fraction(eps)
    m = 0
    while Fraction(1, 2 ** m) > eps / (2 * n):
        m += 1
    return CircleSet.from_pairs([(0, Fraction(1, 2 ** m))])


def candidate_bases(c: int, n: int, eps, depth: int = 3) -> List[Tuple[str, CircleSet]]:
    """The small dyadic base plus the c-adic cylinders of length <= depth and
    the cylinders [1/|c|^m, 2/|c|^m) for m = depth+1, depth+2."""
    a = abs(c)
    out = [("dyadic-small", spec_base(n, eps))]
    for m in range(1, depth + 1):
        q = a ** m
        for j in range(q):
            out.append((f"cyl {j}/{q}", CircleSet.from_pairs([(Fraction(j, q), Fraction(j + 1, q))])))
    for m in (depth + 1, depth + 2):
        q = a ** m
        out.append((f"cyl 1/{q}", CircleSet.from_pairs([(Fraction(1, q), Fraction(2, q))])))
    return out


def run_levels(c: int, C: CircleSet, n: int, target: Optional[Fraction] = None,
               arc_budget: Optional[int] = None, max_height: Optional[int] = 10_000,
               keep_levels: bool = False, prune: bool = False):
    """Stack first-visit levels over C into an n-tower.

    Stops once n * (chosen mass) >= target (checked on chosen levels), when
    the next level would exceed ``arc_budget`` arcs in total, when fewer
    than 2^-40 of the circle is left unstacked, or at ``max_height``.  With
    ``prune`` it also stops as soon as even the whole remainder could not
    lift the tower to the target.  With ``keep_levels`` the level sets are
    returned too.
    """
    if C.is_empty():
        raise InvalidInput("base must be nonempty")
    budget = arc_budget or config.current().tower_arc_budget
    budget = min(budget, config.current().interval_cap)
    cur = C
    chosen: List[CircleSet] = []
    chosen_arcs = 0
    chosen_mass = Fraction(0)
    measures = [C.measure()]
    seen = measures[0]
    arcs = [len(C)]
    levels = [C] if keep_levels else None
    h = 0
    stopped = "height"
    if n == 1:
        chosen, chosen_mass = [C], C.measure()
    while True:
        if target is not None and n * chosen_mass >= target:
            stopped = "target"
            break
        if max_height is not None and h >= max_height:
            stopped = "height"
            break
        if cur.is_empty():
            stopped = "exhausted"
            break
        if n * (1 - seen) < _NEGLIGIBLE:
            stopped = "converged"
            break
        if prune and target is not None and n * (chosen_mass + 1 - seen) < target:
            # later chosen levels come out of the remainder
            stopped = "unreachable"
            break
        if chosen_arcs + len(cur) * (abs(c) + 1) + len(C) > budget:
            stopped = "budget"
            break
        config.check_deadline()
        nxt = cur.preimage(c).subtract(C)
        h += 1
        cur = nxt
        measures.append(cur.measure())
        seen += measures[-1]
        arcs.append(len(cur))
        if keep_levels:
            levels.append(cur)
        if n > 1 and h % n == n - 1:
            chosen.append(cur)
            chosen_arcs += len(cur)
            chosen_mass += measures[-1]
    base = union_all(chosen)
    run = LevelRun(C, n, n * base.measure(), base, h, measures, arcs, stopped)
    if keep_levels:
        return run, levels
    return run


@dataclass
class SkyscraperResult:
    base: CircleSet
    tower: Fraction
    stats: Dict = field(default_factory=dict)


def skyscraper_tower(c: int, n: int, eps, arc_budget: Optional[int] = None,
                     probe_budget: Optional[int] = None, finalists: int = 4,
                     candidates: Optional[Sequence[Tuple[str, CircleSet]]] = None) -> SkyscraperResult:
    """Best n-tower for T_c over the candidate bases, aiming at 1 - eps."""
    c, n = int(c), int(n)
    if abs(c) < 2:
        raise InvalidInput("multiplier needs |c| >= 2")
    if n < 1:
        raise InvalidInput("height must be positive")
    eps = Fraction(eps)
    target = 1 - eps
    if n == 1:
        return SkyscraperResult(CircleSet.full(), Fraction(1), {"base": "full"})
    budget = arc_budget or config.current().tower_arc_budget
    probe = probe_budget or max(20_000, budget // 8)
    cands = list(candidates) if candidates is not None else candidate_bases(c, n, eps)
    scored = []
    for i, (name, C) in enumerate(cands):
        run = run_levels(c, C, n, target, probe)
        scored.append((run.tower, -i, name, C, run))
        if run.stopped == "target":
            break
    scored.sort(key=lambda t: (t[0], t[1]), reverse=True)
    best = scored[0]
    if best[4].stopped != "target":
        # symmetric cylinders score alike; keep one per probe value
        picks, seen_scores = [], set()
        for item in scored:
            if item[0] not in seen_scores:
                seen_scores.add(item[0])
                picks.append(item)
            if len(picks) == finalists:
                break
        for tower, negi, name, C, _ in picks:
            run = run_levels(c, C, n, target, budget)
            if run.tower > best[0] or (run.tower == best[0] and best[4].height < run.height):
                best = (run.tower, negi, name, C, run)
            if run.stopped == "target":
                break
    tower, _, name, C, run = best
    stats = {
        "base": name,
        "height": run.height,
        "stopped": run.stopped,
        "arcs": len(run.base),
        "arcBudget": budget,
        "probes": [[s[2], format_rational(s[0])] for s in scored[:5]],
    }
    return SkyscraperResult(run.base, run.tower, stats)
