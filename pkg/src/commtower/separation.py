"""Separating two commuting multiplications on a set.

For maps f = T_p and g = T_q with p != q, and a set Y, we look for
D inside Y such that B = f^{-1}(D) minus g^{-1}(D) is large.  Then B lies in
f^{-1}(Y) and f^{-1}(B), g^{-1}(B) are disjoint.

D is a union of blocks Y cut by the dyadic partition of depth r.  Choosing
blocks independently with probability 1/2 gives expected objective at least
(mu(Y) - mu(Omega_r))/4, where Omega_r collects points x for which f(x) and
g(x) share a dyadic atom.  We fix the choice deterministically by
conditional expectations, block by block in left-endpoint order.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import config
from .circle import CircleSet, _I64_SAFE, _check_budget
from .errors import DepthCapExceeded, InvalidInput, ResourceExhausted


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def _grid_labels(c: int, r: int, L: int):
    """Breakpoints (over L) and atom labels of the partition x -> atom of c*x.

    Cell m covers [m/(|c| 2^r), (m+1)/(|c| 2^r)) and is sent into atom
    m mod 2^r for c > 0, and the mirrored atom for c < 0.
    """
    a = abs(c)
    cells = a << r
    step = L // cells
    m = np.arange(cells, dtype=np.int64)
    lab = m % (1 << r)
    if c < 0:
        lab = (1 << r) - 1 - lab
    starts = m * step if L < _I64_SAFE else m.astype(object) * step
    return starts, lab


def _segments(p: int, q: int, r: int, L: int):
    """Common refinement of the two labelled grids: starts, lab_p, lab_q."""
    sp, lp = _grid_labels(p, r, L)
    sq, lq = _grid_labels(q, r, L)
    starts = np.union1d(sp, sq)
    ip = np.searchsorted(sp, starts, side="right") - 1
    iq = np.searchsorted(sq, starts, side="right") - 1
    return starts, lp[ip], lq[iq]


def _cumulative(A: CircleSet, L: int, t: np.ndarray) -> np.ndarray:
    """mu(A intersect [0, t/L)) * L for every breakpoint t (all over L)."""
    k = L // A.den
    e = A.ends if L < _I64_SAFE else A.ends.astype(object)
    e = e * k
    if e.size == 0:
        return np.zeros(t.size, dtype=e.dtype)
    s, f = e[0::2], e[1::2]
    prefix = np.concatenate((np.zeros(1, dtype=e.dtype), np.cumsum(f - s)))
    idx = np.searchsorted(e, t, side="right")
    arc = (idx - 1) // 2
    inside = (idx % 2) == 1
    base = prefix[idx // 2]
    part = np.where(inside, t - s[np.clip(arc, 0, s.size - 1)], 0)
    return base + part


def omega(mult_f: int, mult_g: int, r: int) -> CircleSet:
    """Points x with f(x), g(x) in the same dyadic atom of depth r."""
    if mult_f == mult_g:
        return CircleSet.full()
    s = config.current()
    if r > s.depth_cap:
        raise DepthCapExceeded(f"dyadic depth {r} exceeds cap {s.depth_cap}")
    _check_budget((abs(mult_f) + abs(mult_g)) << r)
    L = _lcm(abs(mult_f) << r, abs(mult_g) << r)
    starts, lf, lg = _segments(mult_f, mult_g, r, L)
    stops = np.concatenate((starts[1:], np.array([L], dtype=starts.dtype)))
    same = lf == lg
    return CircleSet.from_pieces(L, starts[same], stops[same])


def omega_measure(mult_f: int, mult_g: int, r: int) -> Fraction:
    return omega(mult_f, mult_g, r).measure()


@dataclass
class Separation:
    B: CircleSet
    D: CircleSet
    depth: int
    omega_measure: Fraction
    objective: Fraction
    expectation: Fraction  # value of the random choice, (mu(Y) - mu(Omega_r))/4 or better
    bound: Fraction        # (mu(Y) - eps)/4


def choose_depth(mult_f: int, mult_g: int, eps: Fraction) -> Tuple[int, Fraction]:
    """Least r with mu(Omega_r) <= eps (Omega_r decreases in r)."""
    cap = config.current().depth_cap
    last = None
    for r in range(cap + 1):
        last = omega_measure(mult_f, mult_g, r)
        if last <= eps:
            return r, last
        config.check_deadline()
    raise ResourceExhausted(
        f"mu(Omega_r) = {last} > {eps} at depth cap {cap}", partial=last)


def separate(mult_f: int, mult_g: int, Y: CircleSet, eps, depth: Optional[int] = None) -> Separation:
    """Separate T_{mult_f} from T_{mult_g} on Y.

    Returns B inside f^{-1}(Y) with f^{-1}(B) and g^{-1}(B) disjoint.  When
    ``depth`` is omitted the least r with mu(Omega_r) <= eps is used, and the
    result then satisfies mu(B) >= (mu(Y) - eps)/4.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    if mult_f == mult_g:
        raise InvalidInput("the two maps must differ")
    muY = Y.measure()
    bound = (muY - eps) / 4
    if Y.is_empty():
        e = CircleSet.empty()
        return Separation(e, e, 0, Fraction(0), Fraction(0), Fraction(0), bound)
    if depth is None:
        r, om = choose_depth(mult_f, mult_g, eps)
    else:
        r, om = depth, omega_measure(mult_f, mult_g, depth)
    p, q = mult_f, mult_g
    atoms = 1 << r
    YfYg = Y.preimage(p).intersect(Y.preimage(q))
    L = _lcm(abs(p) << r, abs(q) << r, YfYg.den, Y.den << r)
    starts, lp, lq = _segments(p, q, r, L)
    stops_t = np.concatenate((starts[1:], np.array([L], dtype=starts.dtype)))
    seg = _cumulative(YfYg, L, stops_t) - _cumulative(YfYg, L, starts)
    # weight of block A is mu(A intersect Y), over L
    grid = np.arange(atoms + 1, dtype=np.int64) * (L >> r) if L < _I64_SAFE else \
        np.arange(atoms + 1).astype(object) * (L >> r)
    cy = _cumulative(Y, L, grid)
    w = [int(x) for x in (cy[1:] - cy[:-1])]
    # pair weights W[a][b] = mu(f^{-1}(A cap Y) cap g^{-1}(B cap Y)) over L
    W: Dict[Tuple[int, int], int] = defaultdict(int)
    nz = np.flatnonzero(seg != 0)
    for i in nz:
        W[(int(lp[i]), int(lq[i]))] += int(seg[i])
    diag = [0] * atoms
    nbr: List[List[Tuple[int, int]]] = [[] for _ in range(atoms)]
    for (a, b), v in W.items():
        if a == b:
            diag[a] += v
        else:
            nbr[a].append((b, v))
            nbr[b].append((a, v))
    # prob2[b] = 2 * P(block b chosen): 1 while undecided, then 0 or 2
    prob2 = [1 if w[b] > 0 else 0 for b in range(atoms)]
    chosen = []
    for a in range(atoms):
        if w[a] == 0:
            continue
        gain2 = 2 * w[a] - 2 * diag[a] - sum(prob2[b] * v for b, v in nbr[a])
        if gain2 >= 0:
            prob2[a] = 2
            chosen.append(a)
        else:
            prob2[a] = 0
    chosen_set = set(chosen)
    obj = sum(w[a] for a in chosen) - sum(v for (a, b), v in W.items()
                                          if a in chosen_set and b in chosen_set)
    objective = Fraction(obj, L)
    expectation = Fraction(2 * sum(w) - sum(W.values()) - sum(diag), 4 * L)
    if chosen:
        D = CircleSet.from_pieces(atoms, chosen, [a + 1 for a in chosen]).intersect(Y)
    else:
        D = CircleSet.empty()
    B = D.preimage(p).subtract(D.preimage(q))
    if B.measure() != objective:
        raise AssertionError("separation objective disagrees with the constructed set")
    return Separation(B, D, r, om, objective, expectation, bound)
