"""Exact finite unions of half-open arcs on the circle [0, 1).

A set is stored as a common positive denominator ``den`` together with a
flat sorted array of integer endpoints ``e0 < e1 < ... < e_{2m-1}`` in
``[0, den]``; the set is the union of ``[e_{2i}/den, e_{2i+1}/den)``.
The representation is canonical: adjacent arcs are merged, and the
denominator is reduced against all endpoints.  An arc ending at 1 and
an arc starting at 0 are kept separate (wrap adjacency is not merged).

All operations are exact.  Sets are treated up to finite sets of points,
which is what makes images under negative multipliers closed in the
half-open convention.
"""
from __future__ import annotations

import bisect
import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import config
from .errors import DepthCapExceeded, IntervalBudgetExceeded, InvalidInput

_I64_SAFE = 1 << 62


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise InvalidInput(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InvalidInput(f"not a rational: {s!r}") from exc


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _check_budget(count: int):
    cap = config.current().interval_cap
    if count > cap:
        raise IntervalBudgetExceeded(count, cap)


def _array(values, bound: int) -> np.ndarray:
    """Endpoint array; int64 when every value fits comfortably, else objects."""
    if bound < _I64_SAFE:
        return np.asarray(values, dtype=np.int64)
    return np.asarray(values, dtype=object)


def _gcd_all(arr: np.ndarray, den: int) -> int:
    if arr.dtype == np.int64:
        if arr.size == 0:
            return den
        return math.gcd(int(np.gcd.reduce(arr)), den)
    g = den
    for v in arr:
        g = math.gcd(g, int(v))
        if g == 1:
            break
    return g


def _sweep(positions: np.ndarray, deltas: np.ndarray, keep) -> np.ndarray:
    """Boundaries of {t : keep(state(t))}, state being the running sum of deltas.

    ``keep`` maps an integer state array to booleans; ``keep(0)`` must be False.
    """
    if positions.size == 0:
        return positions
    order = np.argsort(positions, kind="stable")
    pos = positions[order]
    dl = deltas[order]
    if pos.dtype == object:
        starts = np.flatnonzero(np.concatenate(([True], pos[1:] != pos[:-1])))
    else:
        starts = np.flatnonzero(np.concatenate(([True], np.diff(pos) != 0)))
    upos = pos[starts]
    udelta = np.add.reduceat(dl, starts)
    state = np.cumsum(udelta)
    inside = keep(state)
    before = np.concatenate(([False], inside[:-1]))
    return upos[inside != before]


class CircleSet:
    """Immutable normalized arc set.  Build with :func:`normalize` or the
    classmethods rather than the raw constructor."""

    __slots__ = ("den", "ends", "_list")

    def __init__(self, den: int, ends: np.ndarray, _canonical: bool = False):
        if not _canonical:
            raise InvalidInput("use normalize() or CircleSet.from_pairs()")
        self.den = den
        self.ends = ends
        ends.flags.writeable = False
        self._list = None

    # construction -----------------------------------------------------
    @classmethod
    def _make(cls, den: int, ends: np.ndarray) -> "CircleSet":
        """Canonicalize sorted, merged endpoints over ``den``."""
        den = int(den)
        if ends.size == 0:
            return cls(1, np.zeros(0, dtype=np.int64), True)
        g = _gcd_all(ends, den)
        if g > 1:
            ends = ends // g
            den //= g
        if ends.dtype == object and den < _I64_SAFE:
            ends = ends.astype(np.int64)
        return cls(den, ends, True)

    @classmethod
    def empty(cls) -> "CircleSet":
        return cls(1, np.zeros(0, dtype=np.int64), True)

    @classmethod
    def full(cls) -> "CircleSet":
        return cls(1, np.array([0, 1], dtype=np.int64), True)

    @classmethod
    def from_pieces(cls, den: int, starts, stops) -> "CircleSet":
        """Union of [s/den, t/den) with 0 <= s < t <= den (overlaps allowed)."""
        starts = _array(starts, den)
        stops = _array(stops, den)
        if starts.size == 0:
            return cls.empty()
        _check_budget(int(starts.size))
        pos = np.concatenate((starts, stops))
        dl = np.concatenate((np.ones(starts.size, dtype=np.int64),
                             -np.ones(stops.size, dtype=np.int64)))
        return cls._make(den, _sweep(pos, dl, lambda s: s > 0))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence]) -> "CircleSet":
        """Normalize rational pairs (a, b) read as the arc from a to b mod 1.

        Pairs with b - a >= 1 give the full circle; pairs crossing 1 are split.
        """
        fr = []
        for p in pairs:
            if len(p) != 2:
                raise InvalidInput(f"interval must be a pair, got {p!r}")
            a, b = _as_fraction(p[0]), _as_fraction(p[1])
            if not a < b:
                raise InvalidInput(f"empty or reversed interval [{a}, {b})")
            fr.append((a, b))
        if not fr:
            return cls.empty()
        den = 1
        for a, b in fr:
            den = den * a.denominator // math.gcd(den, a.denominator)
            den = den * b.denominator // math.gcd(den, b.denominator)
        starts, stops = [], []
        for a, b in fr:
            if b - a >= 1:
                return cls.full()
            lo = (a.numerator * (den // a.denominator)) % den
            hi = lo + (b - a).numerator * (den // (b - a).denominator)
            if hi <= den:
                starts.append(lo)
                stops.append(hi)
            else:
                starts += [lo, 0]
                stops += [den, hi - den]
        return cls.from_pieces(den, starts, stops)

    # queries ------------------------------------------------------------
    def __len__(self) -> int:
        return int(self.ends.size) // 2

    @property
    def count(self) -> int:
        return len(self)

    def is_empty(self) -> bool:
        return self.ends.size == 0

    def is_full(self) -> bool:
        return self.den == 1 and self.ends.size == 2

    def measure(self) -> Fraction:
        if self.ends.size == 0:
            return Fraction(0)
        e = self.ends
        if e.dtype == np.int64 and self.den < (1 << 40) and e.size < (1 << 20):
            total = int((e[1::2] - e[0::2]).sum())
        else:
            total = sum(int(x) for x in e[1::2]) - sum(int(x) for x in e[0::2])
        return Fraction(total, self.den)

    def _py(self) -> List[int]:
        if self._list is None:
            self._list = [int(v) for v in self.ends]
        return self._list

    def contains(self, x) -> bool:
        x = _as_fraction(x) % 1
        # compare x*den against integer endpoints exactly
        v = x * self.den
        idx = bisect.bisect_right(self._py(), v)
        return idx % 2 == 1

    __contains__ = contains

    def endpoints(self) -> List[Fraction]:
        return [Fraction(v, self.den) for v in self._py()]

    def intervals(self) -> List[Tuple[Fraction, Fraction]]:
        pts = self.endpoints()
        return list(zip(pts[0::2], pts[1::2]))

    def __iter__(self):
        return iter(self.intervals())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CircleSet):
            return NotImplemented
        return self.den == other.den and self.ends.size == other.ends.size and \
            bool(np.array_equal(self.ends, other.ends))

    def __hash__(self):
        return hash((self.den, tuple(self._py())))

    def __repr__(self):
        if len(self) > 6:
            head = ", ".join(f"[{a},{b})" for a, b in self.intervals()[:3])
            return f"CircleSet({head}, ... {len(self)} arcs, measure={self.measure()})"
        return "CircleSet(" + ", ".join(f"[{a},{b})" for a, b in self.intervals()) + ")"

    # boolean algebra -----------------------------------------------------
    def _rescaled(self, den: int) -> np.ndarray:
        k = den // self.den
        if k == 1:
            return self.ends
        arr = self.ends if den < _I64_SAFE else self.ends.astype(object)
        return arr * k

    def _binary(self, other: "CircleSet", keep) -> "CircleSet":
        den = self.den * other.den // math.gcd(self.den, other.den)
        _check_budget(len(self) + len(other))
        a = self._rescaled(den)
        b = other._rescaled(den)
        if a.dtype != b.dtype:
            a, b = a.astype(object), b.astype(object)
        pos = np.concatenate((a, b))
        na, nb = a.size, b.size
        # a contributes +-1 and b contributes +-2, so state = [in a] + 2*[in b]
        da = np.tile(np.array([1, -1], dtype=np.int64), na // 2)
        db = np.tile(np.array([2, -2], dtype=np.int64), nb // 2)
        return CircleSet._make(den, _sweep(pos, np.concatenate((da, db)), keep))

    def union(self, other: "CircleSet") -> "CircleSet":
        if other.is_empty() or self.is_full():
            return self
        if self.is_empty() or other.is_full():
            return other
        return self._binary(other, lambda s: s > 0)

    def intersect(self, other: "CircleSet") -> "CircleSet":
        if self.is_empty() or other.is_full():
            return self
        if other.is_empty() or self.is_full():
            return other
        return self._binary(other, lambda s: s == 3)

    def subtract(self, other: "CircleSet") -> "CircleSet":
        if self.is_empty() or other.is_empty():
            return self
        if other.is_full():
            return CircleSet.empty()
        return self._binary(other, lambda s: s == 1)

    def symmetric_difference(self, other: "CircleSet") -> "CircleSet":
        return self._binary(other, lambda s: (s == 1) | (s == 2))

    def complement(self) -> "CircleSet":
        e = self.ends
        if e.size == 0:
            return CircleSet.full()
        den = self.den
        inner = e
        head = [] if int(e[0]) == 0 else [0]
        tail = [] if int(e[-1]) == den else [den]
        if head:
            inner = np.concatenate((_array(head, den), inner))
        else:
            inner = inner[1:]
        if tail:
            inner = np.concatenate((inner, _array(tail, den)))
        else:
            inner = inner[:-1]
        return CircleSet._make(den, inner)

    def isdisjoint(self, other: "CircleSet") -> bool:
        if self.is_empty() or other.is_empty():
            return True
        return self.intersect(other).is_empty()

    def issubset(self, other: "CircleSet") -> bool:
        return self.subtract(other).is_empty()

    __or__ = union
    __and__ = intersect
    __sub__ = subtract

    def __invert__(self):
        return self.complement()

    # maps ------------------------------------------------------------------
    def reflect(self) -> "CircleSet":
        """x -> -x, with [a, b) sent to [1-b, 1-a)."""
        if self.is_empty():
            return self
        e = self.ends
        return CircleSet._make(self.den, (self.den - e)[::-1].copy())

    def shift(self, r) -> "CircleSet":
        r = _as_fraction(r) % 1
        if r == 0 or self.is_empty() or self.is_full():
            return self
        den = self.den * r.denominator // math.gcd(self.den, r.denominator)
        e = self._rescaled(den)
        off = r.numerator * (den // r.denominator)
        moved = e + off
        starts, stops = moved[0::2], moved[1::2]
        # split the arc that crosses 1, then rotate
        wrap_start = starts >= den
        starts = np.where(wrap_start, starts - den, starts)
        stops = np.where(wrap_start, stops - den, stops)
        cross = stops > den
        s_list = np.concatenate((starts, np.zeros(int(cross.sum()), dtype=starts.dtype)))
        t_list = np.concatenate((np.where(cross, den, stops), stops[cross] - den))
        return CircleSet.from_pieces(den, s_list, t_list)

    def preimage(self, c: int) -> "CircleSet":
        """{x : c*x mod 1 in self}."""
        c = int(c)
        if c == 0:
            raise InvalidInput("multiplier must be nonzero")
        if c < 0:
            return self.reflect().preimage(-c)
        if c == 1 or self.is_empty() or self.is_full():
            return self
        _check_budget(c * len(self))
        den = self.den * c
        base = self.ends if den < _I64_SAFE else self.ends.astype(object)
        step = _array(np.arange(c, dtype=np.int64), den) * self.den
        flat = (step[:, None] + base[None, :]).reshape(-1)
        if int(self.ends[0]) == 0 and int(self.ends[-1]) == self.den:
            # arcs meeting across each seam [.., j+1) [j+1, ..) are merged
            keep = np.ones(flat.size, dtype=bool)
            m = self.ends.size
            for j in range(1, c):
                keep[j * m - 1] = False
                keep[j * m] = False
            flat = flat[keep]
        return CircleSet._make(den, flat)

    def image(self, c: int) -> "CircleSet":
        """{c*a mod 1 : a in self}, up to finitely many points."""
        c = int(c)
        if c == 0:
            raise InvalidInput("multiplier must be nonzero")
        if c < 0:
            return self.image(-c).reflect()
        if c == 1 or self.is_empty():
            return self
        den = self.den
        e = self.ends if den * c < _I64_SAFE else self.ends.astype(object)
        starts, stops = e[0::2] * c, e[1::2] * c
        if bool(((stops - starts) >= den).any()):
            return CircleSet.full()
        q = starts // den
        starts = starts - q * den
        stops = stops - q * den
        cross = stops > den
        s_list = np.concatenate((starts, np.zeros(int(cross.sum()), dtype=starts.dtype)))
        t_list = np.concatenate((np.where(cross, den, stops), stops[cross] - den))
        return CircleSet.from_pieces(den, s_list, t_list)

    # serialization ------------------------------------------------------------
    def to_json(self) -> list:
        return [[format_rational(a), format_rational(b)] for a, b in self.intervals()]

    @classmethod
    def from_json(cls, data) -> "CircleSet":
        if not isinstance(data, list):
            raise InvalidInput("arc set must be a JSON array of [a, b] pairs")
        pairs = []
        for i, item in enumerate(data):
            if not (isinstance(item, list) and len(item) == 2):
                raise InvalidInput(f"entry {i}: expected a pair of rationals")
            a = parse_rational(str(item[0]))
            b = parse_rational(str(item[1]))
            if not (0 <= a < b <= 1):
                raise InvalidInput(f"entry {i}: need 0 <= a < b <= 1, got [{a}, {b})")
            pairs.append((a, b))
        return cls.from_pairs(pairs)


class CircleEndo:
    """The map x -> c*x mod 1."""

    __slots__ = ("c",)

    def __init__(self, c: int):
        if int(c) == 0:
            raise InvalidInput("multiplier must be nonzero")
        self.c = int(c)

    def preimage(self, A: CircleSet) -> CircleSet:
        return A.preimage(self.c)

    def image(self, A: CircleSet) -> CircleSet:
        return A.image(self.c)

    def __call__(self, x):
        return (self.c * _as_fraction(x)) % 1

    def __repr__(self):
        return f"CircleEndo({self.c})"


# functional interface -------------------------------------------------------
def normalize(raw: Iterable[Sequence]) -> CircleSet:
    return CircleSet.from_pairs(raw)


def measure(A: CircleSet) -> Fraction:
    return A.measure()


def union(A: CircleSet, B: CircleSet) -> CircleSet:
    return A.union(B)


def intersect(A: CircleSet, B: CircleSet) -> CircleSet:
    return A.intersect(B)


def subtract(A: CircleSet, B: CircleSet) -> CircleSet:
    return A.subtract(B)


def complement(A: CircleSet) -> CircleSet:
    return A.complement()


def shift(A: CircleSet, r) -> CircleSet:
    return A.shift(r)


def preimage(e, A: CircleSet) -> CircleSet:
    c = e.c if isinstance(e, CircleEndo) else e
    return A.preimage(c)


def image(e, A: CircleSet) -> CircleSet:
    c = e.c if isinstance(e, CircleEndo) else e
    return A.image(c)


def union_all(sets: Iterable[CircleSet]) -> CircleSet:
    """Union of many sets in one sweep."""
    sets = [s for s in sets if not s.is_empty()]
    if not sets:
        return CircleSet.empty()
    if len(sets) == 1:
        return sets[0]
    den = 1
    for s in sets:
        den = den * s.den // math.gcd(den, s.den)
    _check_budget(sum(len(s) for s in sets))
    parts = [s._rescaled(den) for s in sets]
    if any(p.dtype == object for p in parts):
        parts = [p.astype(object) for p in parts]
    flat = np.concatenate(parts)
    return CircleSet.from_pieces(den, flat[0::2], flat[1::2])


def dyadic_atoms(r: int) -> List[CircleSet]:
    """The partition of [0,1) into the 2^r arcs [j/2^r, (j+1)/2^r)."""
    if r < 0:
        raise InvalidInput("r must be nonnegative")
    s = config.current()
    if r > s.depth_cap:
        raise DepthCapExceeded(f"dyadic depth {r} exceeds cap {s.depth_cap}")
    _check_budget(1 << r)
    den = 1 << r
    return [CircleSet._make(den, np.array([j, j + 1], dtype=np.int64)) for j in range(den)]
