"""Exact simplex over the rationals.

Solves  max c.y  subject to  A y <= b, y >= 0  with b >= 0, so the slack
basis is feasible and a single phase suffices.  Bland's rule (lowest index
entering and leaving variable) guarantees termination.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from .errors import InvalidInput, ResourceExhausted


@dataclass
class LPResult:
    value: Fraction
    primal: List[Fraction]   # y
    dual: List[Fraction]     # multipliers of the rows of A
    pivots: int


class Unbounded(Exception):
    pass


def simplex_max(c: Sequence, A: Sequence[Sequence], b: Sequence, max_pivots: int = 100_000) -> LPResult:
    m = len(A)
    n = len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise InvalidInput("inconsistent LP dimensions")
    bb = [Fraction(x) for x in b]
    if any(x < 0 for x in bb):
        raise InvalidInput("right-hand side must be nonnegative")
    # tableau rows: [A | I | b]; objective row holds reduced costs -c
    T = [[Fraction(x) for x in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [bb[i]]
         for i in range(m)]
    z = [-Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    width = n + m
    pivots = 0
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise Unbounded("objective is unbounded")
        piv = T[leave][enter]
        row = [x / piv for x in T[leave]]
        T[leave] = row
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], row)]
        if z[enter] != 0:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, row)]
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise ResourceExhausted(f"simplex exceeded {max_pivots} pivots")
    y = [Fraction(0)] * n
    for i, v in enumerate(basis):
        if v < n:
            y[v] = T[i][-1]
    dual = [z[n + i] for i in range(m)]
    return LPResult(z[-1], y, dual, pivots)
