"""Towers for commuting multiplication maps on the circle.

An action is given by multipliers (c_1, ..., c_d); index k in N_0^d acts by
f_k(x) = c_1^k_1 ... c_d^k_d x mod 1.  A set B is n-admissible when the
preimages f_k^{-1}(B), 0 <= k < n, are pairwise disjoint; their union is the
tower B_(n), of measure pi(n) mu(B).

The constructions here follow the existence argument step by step:
pair separation, the seed construction (one separation per pair of indices), the
measure-boost loop, the merge step and the doubling reduction.  Every result
is re-verified with exact set operations before it is flagged verified.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import config
from .circle import CircleSet, format_rational, parse_rational, union_all
from .errors import InvalidInput, ResourceExhausted
from .freeness import check_free
from .separation import omega as _omega, separate

Index = Tuple[int, ...]


@dataclass(frozen=True)
class ActionSpec:
    multipliers: Tuple[int, ...]

    def __post_init__(self):
        ms = tuple(int(c) for c in self.multipliers)
        object.__setattr__(self, "multipliers", ms)
        if not ms:
            raise InvalidInput("an action needs at least one multiplier")
        if any(abs(c) < 2 for c in ms):
            raise InvalidInput(f"every multiplier needs |c| >= 2, got {ms}")

    @property
    def d(self) -> int:
        return len(self.multipliers)

    def mult(self, k: Sequence[int]) -> int:
        if len(k) != self.d:
            raise InvalidInput(f"index {tuple(k)} has wrong dimension for d={self.d}")
        out = 1
        for c, e in zip(self.multipliers, k):
            if e < 0:
                raise InvalidInput("indices must be nonnegative")
            out *= c ** e
        return out

    def is_free(self) -> bool:
        return check_free(self.multipliers).free


def as_action(a) -> ActionSpec:
    return a if isinstance(a, ActionSpec) else ActionSpec(tuple(a))


def as_shape(n, d: Optional[int] = None) -> Index:
    n = (n,) if isinstance(n, int) else tuple(int(x) for x in n)
    if any(x < 1 for x in n):
        raise InvalidInput(f"shape entries must be >= 1, got {n}")
    if d is not None and len(n) != d:
        raise InvalidInput(f"shape {n} does not match action dimension {d}")
    return n


def pi(n: Sequence[int]) -> int:
    return math.prod(n)


def indices(n: Sequence[int]) -> List[Index]:
    """All k with 0 <= k < n, in lexicographic order."""
    return list(itertools.product(*[range(x) for x in n]))


def index_pairs(n: Sequence[int]) -> List[Tuple[Index, Index]]:
    idx = indices(n)
    return [(idx[i], idx[j]) for i in range(len(idx)) for j in range(i + 1, len(idx))]


def vadd(*vs: Sequence[int]) -> Index:
    return tuple(sum(x) for x in zip(*vs))


def vscale(t: int, v: Sequence[int]) -> Index:
    return tuple(t * x for x in v)


def action_preimage(a, k: Sequence[int], A: CircleSet) -> CircleSet:
    """f_k^{-1}(A); the composite multiplier is applied in one pass."""
    a = as_action(a)
    return A.preimage(a.mult(k))


def tower_union(a, B: CircleSet, n: Sequence[int]) -> CircleSet:
    a = as_action(a)
    return union_all(action_preimage(a, k, B) for k in indices(n))


# verification ------------------------------------------------------------------
def _pair_disjoint(a: ActionSpec, B: CircleSet, k: Index, l: Index) -> bool:
    """Is f_k^{-1}(B) cap f_l^{-1}(B) empty, for k, l with min(k, l) = 0?

    With p = mult(k), q = mult(l): if p = 1 the intersection is null iff
    T_q(B) cap B is; for coprime p, q it is null iff B cap T_q^{-1}(T_p(B)) is.
    Both rest on T(E) and E being null together for measure-preserving
    surjections.  Otherwise intersect the preimages directly.
    """
    p, q = a.mult(k), a.mult(l)
    if p == q:
        return B.is_empty()
    if p == 1 or q == 1:
        other = q if p == 1 else p
        return B.image(other).isdisjoint(B)
    if math.gcd(p, q) == 1:
        if abs(p) > abs(q):
            p, q = q, p
        # symmetric roles; preimage by the smaller multiplier
        return B.isdisjoint(B.image(q).preimage(p))
    return B.preimage(p).isdisjoint(B.preimage(q))


def verify_tower(a, B: CircleSet, n, exhaustive: bool = False) -> Tuple[bool, Fraction]:
    """Check that B is n-admissible; return (ok, measure of B_(n)).

    By default only pairs with componentwise min(k, l) = 0 are checked: any
    other pair is the preimage under f_min of such a pair.  ``exhaustive``
    intersects every pair of preimages directly instead.
    """
    a = as_action(a)
    n = as_shape(n, a.d)
    if B.is_empty():
        return True, Fraction(0)
    ok = True
    if exhaustive:
        pre = {k: action_preimage(a, k, B) for k in indices(n)}
        for k, l in index_pairs(n):
            if not pre[k].isdisjoint(pre[l]):
                ok = False
                break
    else:
        for k, l in index_pairs(n):
            if any(min(x, y) for x, y in zip(k, l)):
                continue
            config.check_deadline()
            if not _pair_disjoint(a, B, k, l):
                ok = False
                break
    if ok:
        return True, pi(n) * B.measure()
    return False, tower_union(a, B, n).measure()


def first_overlap(a, B: CircleSet, n) -> Optional[Tuple[Index, Index]]:
    a = as_action(a)
    pre = {k: action_preimage(a, k, B) for k in indices(n)}
    for k, l in index_pairs(n):
        if not pre[k].isdisjoint(pre[l]):
            return k, l
    return None


@dataclass
class TowerCertificate:
    base: CircleSet
    shape: Index
    action: Tuple[int, ...]
    tower_measure: Fraction
    verified: bool
    strategy: str
    target: Optional[Fraction] = None
    stats: Dict = field(default_factory=dict)

    @property
    def target_met(self) -> bool:
        return self.verified and (self.target is None or self.tower_measure >= self.target)

    def to_json(self) -> dict:
        return {
            "action": list(self.action),
            "shape": list(self.shape),
            "base": self.base.to_json(),
            "measure": format_rational(self.tower_measure),
            "verified": self.verified,
            "strategy": self.strategy,
            "target": None if self.target is None else format_rational(self.target),
            "targetMet": self.target_met,
            "resourceStats": self.stats,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TowerCertificate":
        try:
            tgt = data.get("target")
            return cls(CircleSet.from_json(data["base"]), tuple(data["shape"]),
                       tuple(data["action"]), parse_rational(data["measure"]),
                       bool(data["verified"]), str(data["strategy"]),
                       None if tgt is None else parse_rational(tgt),
                       dict(data.get("resourceStats", {})))
        except KeyError as exc:
            raise InvalidInput(f"certificate missing field {exc}") from exc

    def recheck(self) -> bool:
        ok, m = verify_tower(self.action, self.base, self.shape)
        return ok and m == self.tower_measure


def certify(a, B: CircleSet, n, strategy: str, target=None, **stats) -> TowerCertificate:
    a = as_action(a)
    n = as_shape(n, a.d)
    ok, m = verify_tower(a, B, n)
    return TowerCertificate(B, n, a.multipliers, m, ok, strategy,
                            None if target is None else Fraction(target), dict(stats))


# pair separation along the action -------------------------------------------------
def omega(a, k, l, r: int) -> CircleSet:
    a = as_action(a)
    if tuple(k) == tuple(l):
        raise InvalidInput("k and l must differ")
    return _omega(a.mult(k), a.mult(l), r)


def separate_pair(a, k, l, Y: CircleSet, eps) -> CircleSet:
    """B inside f_k^{-1}(Y) with f_k^{-1}(B), f_l^{-1}(B) disjoint and
    mu(B) >= (mu(Y) - eps)/4."""
    return separate_pair_full(a, k, l, Y, eps).B


def separate_pair_full(a, k, l, Y: CircleSet, eps):
    a = as_action(a)
    k, l = tuple(k), tuple(l)
    if k == l:
        raise InvalidInput("k and l must differ")
    p, q = a.mult(k), a.mult(l)
    fY = Y.preimage(p)
    if fY.isdisjoint(Y.preimage(q)):
        # already separated: the single-block choice D = Y is optimal
        return separate(p, q, Y, eps, depth=0)
    return separate(p, q, Y, eps)


@dataclass
class SeedResult:
    N: Index
    B: CircleSet
    steps: List[dict]


def seed_admissible(a, n, Y: CircleSet) -> SeedResult:
    """An n-admissible B inside f_N^{-1}(Y) with mu(B) >= mu(Y)/5^C(pi(n),2).

    One separation per unordered pair of indices below n, in lexicographic
    order, each with tolerance a fifth of the current measure.
    """
    a = as_action(a)
    n = as_shape(n, a.d)
    N = (0,) * a.d
    cur = Y
    steps = []
    if pi(n) == 1:
        return SeedResult(N, Y, steps)
    for k, l in index_pairs(n):
        config.check_deadline(partial=SeedResult(N, cur, steps))
        mu = cur.measure()
        if mu == 0:
            break
        eps = mu / 5
        try:
            sep = separate_pair_full(a, k, l, cur, eps)
        except ResourceExhausted as exc:
            exc.partial = SeedResult(N, cur, steps)
            raise
        steps.append({"pair": [list(k), list(l)], "depth": sep.depth,
                      "measure": format_rational(sep.B.measure()), "arcs": len(sep.B)})
        cur = sep.B
        N = vadd(N, k)
    return SeedResult(N, cur, steps)


@dataclass
class GrowResult:
    N: Index
    B: CircleSet
    rounds: int
    target: Fraction
    target_met: bool
    history: List[str]


def grow_admissible(a, n, Y: CircleSet, eps, round_cap: int = 8) -> GrowResult:
    """n-admissible B inside f_N^{-1}(Y) with mu(B_(n)) > 2^-d mu(Y) - eps.

    Start from the seed set; each round takes D, builds Y' = f_{N_0+n}^{-1}(Y)
    and B' = f_n^{-1}(D), seeds again inside Y' minus D_(2n) to get B'', and
    replaces D by f_{N_1}^{-1}(B') joined with B''.
    """
    a = as_action(a)
    n = as_shape(n, a.d)
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    target = Fraction(1, 2 ** a.d) * Y.measure() - eps
    P = pi(n)
    seed = seed_admissible(a, n, Y)
    N0, D = seed.N, seed.B
    hist = [format_rational(P * D.measure())]
    rounds = 0
    best = GrowResult(N0, D, 0, target, P * D.measure() > target, hist)
    while not P * D.measure() > target:
        if rounds >= round_cap:
            break
        config.check_deadline(partial=best)
        try:
            Yp = action_preimage(a, vadd(N0, n), Y)
            Bp = action_preimage(a, n, D)
            D2n = tower_union(a, D, vscale(2, n))
            seed2 = seed_admissible(a, n, Yp.subtract(D2n))
        except ResourceExhausted as exc:
            exc.partial = best
            raise
        N1, B2 = seed2.N, seed2.B
        if B2.is_empty():
            break
        newB = action_preimage(a, N1, Bp).union(B2)
        if newB.measure() != D.measure() + B2.measure():
            raise AssertionError("boost pieces overlap")
        D, N0 = newB, vadd(N0, N1, n)
        rounds += 1
        hist.append(format_rational(P * D.measure()))
        best = GrowResult(N0, D, rounds, target, P * D.measure() > target, hist)
    return best


def _cross_empty(a: ActionSpec, N: Index, X1: CircleSet, X2: CircleSet) -> bool:
    """All f_i^{-1}(X1) cap f_j^{-1}(X2) empty for 0 <= i, j < N."""
    idx = indices(N)
    p1 = {i: action_preimage(a, i, X1) for i in idx}
    p2 = {j: action_preimage(a, j, X2) for j in idx}
    return all(p1[i].isdisjoint(p2[j]) for i in idx for j in idx)


@dataclass
class MergeResult:
    certificate: TowerCertificate
    D: CircleSet
    B2: CircleSet
    N_prime: Index
    gain_bound: Fraction
    cross_checks: Dict[str, bool]


def minimal_K(d: int, delta: Fraction) -> int:
    K = 1
    while Fraction(d, 2 ** K) > delta:
        K += 1
    return K


def merge_step(a, n, K: int, big: TowerCertificate, delta, exact_cross: bool = True) -> MergeResult:
    """Improve an n-tower using a verified 2^K n-tower B'.

    Y' is the complement of B'_(2^K n); B'' is grown inside a preimage of Y'
    and D collects the preimages f_{tn+N'}^{-1}(B') for t in {1..2^K-1}^d.
    The result B'' joined with D is n-admissible with tower measure at least
    2^{-d-1}(1 - tau) + tau(1 - d 2^-K) - delta, tau the measure of B'_(2^K n).
    """
    a = as_action(a)
    n = as_shape(n, a.d)
    delta = Fraction(delta)
    d = a.d
    if not big.verified:
        raise InvalidInput("merge needs a verified big tower")
    bigshape = vscale(2 ** K, n)
    if tuple(big.shape) != bigshape:
        raise InvalidInput(f"big tower has shape {big.shape}, expected {bigshape}")
    if Fraction(d, 2 ** K) > delta:
        raise InvalidInput("K too small: need d 2^-K <= delta")
    Bp = big.base
    tau = big.tower_measure
    Yp = tower_union(a, Bp, bigshape).complement()
    grown = grow_admissible(a, n, Yp, delta)
    Np, B2 = grown.N, grown.B
    pieces = []
    for t in itertools.product(range(1, 2 ** K), repeat=d):
        shift = vadd(tuple(ti * ni for ti, ni in zip(t, n)), Np)
        pieces.append(action_preimage(a, shift, Bp))
    D = union_all(pieces)
    if not D.isdisjoint(B2):
        raise AssertionError("D meets B''")
    B = D.union(B2)
    checks = {}
    if exact_cross:
        checks["B''xB''"] = verify_tower(a, B2, n)[0]
        checks["DxB''"] = _cross_empty(a, n, D, B2)
        checks["B''xD"] = _cross_empty(a, n, B2, D)
        checks["DxD"] = verify_tower(a, D, n)[0]
    gain = Fraction(1, 2 ** (d + 1)) * (1 - tau) + tau * (1 - Fraction(d, 2 ** K)) - delta
    cert = certify(a, B, n, "generic", K=K, tau=format_rational(tau), Nprime=list(Np),
                   grow_rounds=grown.rounds)
    return MergeResult(cert, D, B2, Np, gain, checks)


def doubling_reduce(a, n, k: int, A: CircleSet) -> CircleSet:
    """From a 2^{k+1} n-admissible A, the 2^k n-admissible union of
    f_{t 2^k n}^{-1}(A) over t in {0,1}^d; tower measure is unchanged."""
    a = as_action(a)
    n = as_shape(n, a.d)
    half = vscale(2 ** k, n)
    pieces = [action_preimage(a, tuple(ti * hi for ti, hi in zip(t, half)), A)
              for t in itertools.product((0, 1), repeat=a.d)]
    return union_all(pieces)


# top level ---------------------------------------------------------------------------
STRATEGIES = ("generic", "skyscraper", "hybrid")


def build_tower(a, n, eps, strategy: str = "generic", max_seed_pairs: int = 64,
                **kw) -> TowerCertificate:
    """Best verified n-tower found for the target 1 - eps.

    The certificate is always exactly verified; ``target_met`` says whether
    the measure reached 1 - eps within the configured resources.
    """
    a = as_action(a)
    n = as_shape(n, a.d)
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    if strategy not in STRATEGIES:
        raise InvalidInput(f"unknown strategy {strategy!r}")
    rep = check_free(a.multipliers)
    if not rep.free:
        raise InvalidInput(f"multipliers {a.multipliers} do not act freely: {rep.reason}")
    target = 1 - eps
    if pi(n) == 1:
        return certify(a, CircleSet.full(), n, strategy, target)
    if strategy == "skyscraper":
        if a.d != 1:
            raise InvalidInput("the skyscraper strategy needs a single multiplier")
        from .skyscraper import skyscraper_tower
        res = skyscraper_tower(a.multipliers[0], n[0], eps, **kw)
        return certify(a, res.base, n, "skyscraper", target, **res.stats)
    if strategy == "hybrid":
        return hybrid_tower(a, n, eps, **kw)
    return generic_tower(a, n, eps, max_seed_pairs=max_seed_pairs)


def generic_tower(a: ActionSpec, n: Index, eps: Fraction, max_seed_pairs: int = 64) -> TowerCertificate:
    """Boost loop at shape n, then one merge round when the seed for the big
    shape stays within ``max_seed_pairs`` separations."""
    target = 1 - eps
    notes = []
    best = None
    try:
        g = grow_admissible(a, n, CircleSet.full(), eps / 4)
        best = certify(a, g.B, n, "generic", target, stage="boost", rounds=g.rounds)
    except ResourceExhausted as exc:
        notes.append(f"boost stopped: {exc}")
        part = exc.partial
        if part is not None and hasattr(part, "B"):
            best = certify(a, part.B, n, "generic", target, stage="boost-partial")
    if best is not None and best.target_met:
        return best
    delta = eps * Fraction(1, 8)
    K = minimal_K(a.d, delta)
    big = vscale(2 ** K, n)
    pairs = pi(big) * (pi(big) - 1) // 2
    if pairs > max_seed_pairs:
        notes.append(f"merge skipped: seed at shape {big} needs {pairs} separations")
    else:
        try:
            g = grow_admissible(a, big, CircleSet.full(), delta)
            bc = certify(a, g.B, big, "generic")
            if bc.verified:
                m = merge_step(a, n, K, bc, delta)
                if best is None or m.certificate.tower_measure > best.tower_measure:
                    best = m.certificate
                    best.target = target
                    best.stats["stage"] = "merge"
        except ResourceExhausted as exc:
            notes.append(f"merge stopped: {exc}")
    if best is None:
        best = certify(a, CircleSet.empty(), n, "generic", target)
    best.stats["notes"] = notes
    return best


def hybrid_tower(a: ActionSpec, n: Index, eps: Fraction, sep_ratio=Fraction(1, 5),
                 **kw) -> TowerCertificate:
    """Skyscraper in the first coordinate, then pair separation for every
    remaining pair with min(k, l) = 0 that moves another coordinate, each at
    eps = sep_ratio * (current measure)."""
    from .skyscraper import skyscraper_tower
    target = 1 - eps
    sky = skyscraper_tower(a.multipliers[0], n[0], eps, **kw)
    cur = sky.base
    steps = []
    cross = [(k, l) for k, l in index_pairs(n)
             if not any(min(x, y) for x, y in zip(k, l)) and (any(k[1:]) or any(l[1:]))]
    for k, l in cross:
        mu = cur.measure()
        if mu == 0:
            break
        try:
            sep = separate_pair_full(a, k, l, cur, mu * Fraction(sep_ratio))
        except ResourceExhausted as exc:
            steps.append(f"stopped at pair {k},{l}: {exc}")
            cur = CircleSet.empty()
            break
        cur = sep.B
        steps.append(f"{list(k)}-{list(l)}: depth {sep.depth}")
    stats = dict(sky.stats)
    stats["cross_pairs"] = steps
    return certify(a, cur, n, "hybrid", target, **stats)
