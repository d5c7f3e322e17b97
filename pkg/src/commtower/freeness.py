"""Multiplicative independence of integer multipliers.

Integers c_1..c_d are independent when c_1^k_1 ... c_d^k_d = 1 with k in Z^d
forces k = 0.  The sign only contributes a parity coordinate: if the
absolute values admit a nonzero relation k, then 2k is a relation with even
sign, so independence is decided by the rank of the exponent matrix of
|c_i| over a pairwise coprime basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvalidInput

TRIAL_LIMIT = 10 ** 6

_primes: List[int] = []


def _small_primes() -> List[int]:
    global _primes
    if not _primes:
        import numpy as np
        sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(TRIAL_LIMIT ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        _primes = [int(p) for p in np.flatnonzero(sieve)]
    return _primes


def trial_factor(n: int) -> Tuple[Dict[int, int], int]:
    """Factor |n| by primes up to TRIAL_LIMIT; return (factors, cofactor)."""
    n = abs(n)
    out: Dict[int, int] = {}
    if n <= 1:
        return out, 1
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if 1 < n <= TRIAL_LIMIT ** 2:
        # no factor up to sqrt(n): n is prime
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def coprime_basis(values: Sequence[int]) -> List[int]:
    """A pairwise coprime set of integers > 1 generating every value
    multiplicatively (gcd-free basis by repeated splitting)."""
    basis = sorted({abs(v) for v in values if abs(v) > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                g = math.gcd(basis[i], basis[j])
                if g > 1:
                    a, b = basis[i] // g, basis[j] // g
                    rest = [x for k, x in enumerate(basis) if k not in (i, j)]
                    basis = sorted(set(rest + [x for x in (a, b, g) if x > 1]))
                    changed = True
                    break
            if changed:
                break
    return basis


def _valuation(n: int, b: int) -> int:
    e = 0
    while n % b == 0:
        n //= b
        e += 1
    return e


def _rank_and_kernel(rows: List[List[int]]) -> Tuple[int, Optional[List[int]]]:
    """Rank of the d x m matrix and an integer vector k with k^T M = 0, if any."""
    d = len(rows)
    m = len(rows[0]) if rows else 0
    # eliminate on the transpose problem: find k with sum_i k_i rows[i] = 0
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == r)) for i in range(d)]
           for r, row in enumerate(rows)]
    rank = 0
    for col in range(m):
        piv = next((r for r in range(rank, d) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        for r in range(d):
            if r != rank and aug[r][col] != 0:
                f = aug[r][col] / aug[rank][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[rank])]
        rank += 1
    if rank == d:
        return rank, None
    combo = aug[rank][m:]
    lcm = 1
    for x in combo:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    k = [int(x * lcm) for x in combo]
    g = 0
    for x in k:
        g = math.gcd(g, x)
    return rank, [x // g for x in k]


@dataclass
class FreenessReport:
    multipliers: Tuple[int, ...]
    free: bool
    status: str  # "independent", "dependent"
    basis: List[int] = field(default_factory=list)
    exponents: List[List[int]] = field(default_factory=list)
    relation: Optional[List[int]] = None
    factorizations: Dict[int, Dict[int, int]] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self):
        return self.free


def check_free(multipliers: Sequence[int]) -> FreenessReport:
    """Decide whether the multipliers generate a free action on the circle.

    Every |c_i| must be at least 2 and the c_i multiplicatively independent.
    A nonzero integer relation is returned as a witness when dependent.
    """
    cs = tuple(int(c) for c in multipliers)
    if not cs:
        raise InvalidInput("need at least one multiplier")
    if any(c == 0 for c in cs):
        raise InvalidInput("multipliers must be nonzero")
    facs = {c: trial_factor(c)[0] for c in set(cs)}
    for i, c in enumerate(cs):
        if abs(c) == 1:
            rel = [0] * len(cs)
            rel[i] = 2
            return FreenessReport(cs, False, "dependent", relation=rel,
                                  factorizations=facs,
                                  reason=f"|c_{i + 1}| = 1 gives a periodic map")
    basis = coprime_basis(cs)
    rows = [[_valuation(abs(c), b) for b in basis] for c in cs]
    rank, rel = _rank_and_kernel(rows)
    if rel is not None:
        if sum(k for k, c in zip(rel, cs) if c < 0) % 2:
            rel = [2 * k for k in rel]
        return FreenessReport(cs, False, "dependent", basis, rows, rel, facs,
                              reason="integer relation among the multipliers")
    return FreenessReport(cs, True, "independent", basis, rows, None, facs,
                          reason=f"exponent matrix has full rank {rank}")


def relation_holds(multipliers: Sequence[int], k: Sequence[int]) -> bool:
    """Exact check that prod c_i^k_i == 1."""
    num, den = 1, 1
    for c, e in zip(multipliers, k):
        if e >= 0:
            num *= c ** e
        else:
            den *= c ** (-e)
    return num == den
