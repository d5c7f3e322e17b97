"""Slow, independent reference implementations used only by the tests.

Sets are handled as lists of (a, b) Fraction pairs and evaluated at the
midpoints of a fine uniform grid, which sidesteps every endpoint
convention: when all relevant sets are unions of cells of the 1/M grid,
membership at the cell midpoints determines them exactly.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def lcm(*xs):
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def contains(pairs, x):
    """x in the union of [a, b) (pairs on [0, 1], a < b)."""
    x = x % 1
    return any(a <= x < b for a, b in pairs)


def midpoints(M):
    return [Fraction(2 * k + 1, 2 * M) for k in range(M)]


def indicator(pairs, M):
    return np.array([contains(pairs, x) for x in midpoints(M)], dtype=bool)


def preimage_indicator(pairs, c, M):
    return np.array([contains(pairs, c * x) for x in midpoints(M)], dtype=bool)


def den_of(pairs):
    return lcm(1, *[Fraction(v).denominator for p in pairs for v in p])


def grid_measure(ind):
    return Fraction(int(ind.sum()), len(ind))


def tower_levels(B_pairs, mults, M):
    """Indicator per level: x is in level k iff mult_k * x lies in B."""
    return [preimage_indicator(B_pairs, m, M) for m in mults]


def tower_oracle(B_pairs, action, shape):
    """(disjoint, tower measure) by midpoint counting over every level."""
    mults = []
    for k in itertools.product(*[range(x) for x in shape]):
        m = 1
        for c, e in zip(action, k):
            m *= c ** e
        mults.append(m)
    M = den_of(B_pairs) * lcm(*[abs(m) for m in mults])
    count = np.zeros(M, dtype=np.int64)
    for ind in tower_levels(B_pairs, mults, M):
        count += ind
    return bool((count <= 1).all()), Fraction(int((count > 0).sum()), M)


def free_oracle(pairs, c1, c2):
    """c1 A and c2 A disjoint: no x, y in A with c1 x = c2 y.  A is a union
    of 1/q cells; c_i (cell) are arcs, compared as exact intervals."""
    def arcs(c):
        out = []
        for a, b in pairs:
            lo, hi = sorted((c * a, c * b))
            out.append((lo, hi))
        return out

    def meet(p, q):
        (a1, b1), (a2, b2) = p, q
        # open arcs on the circle: shift second by integers
        for s in range(math.floor(a1 - b2) - 1, math.ceil(b1 - a2) + 2):
            if max(a1, a2 + s) < min(b1, b2 + s):
                return True
        return False

    A1, A2 = arcs(c1), arcs(c2)
    return not any(meet(p, q) for p in A1 for q in A2)


def brute_mis(n, edges):
    """Largest independent set by trying subsets from the largest size down."""
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            if all((u, v) not in adj for u, v in itertools.combinations(S, 2)):
                return size
    return 0


def brute_chromatic(n, edges):
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if all(col[u] != col[v] for u, v in edges):
                return k
    return 0


def brute_circular(n, edges):
    """min k/q over all maps V -> Z/k with q <= |c(u)-c(v)| <= k - q, k <= n."""
    best = None
    for k in range(1, n + 1):
        for q in range(1, k + 1):
            r = Fraction(k, q)
            if best is not None and r >= best:
                continue
            if k < 2 * q and edges:
                continue
            for col in itertools.product(range(k), repeat=n - 1):
                col = (0,) + col
                if all(q <= (col[u] - col[v]) % k <= k - q for u, v in edges):
                    best = r
                    break
    return best if edges else Fraction(1)


def lp_fractional_chromatic(n, edges):
    """chi_f via scipy's LP over all independent sets (floating point)."""
    from scipy.optimize import linprog
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    sets = [S for size in range(1, n + 1) for S in itertools.combinations(range(n), size)
            if all((u, v) not in adj for u, v in itertools.combinations(S, 2))]
    A = np.zeros((n, len(sets)))
    for j, S in enumerate(sets):
        A[list(S), j] = 1
    res = linprog(np.ones(len(sets)), A_ub=-A, b_ub=-np.ones(n), bounds=(0, None), method="highs")
    return res.fun


def brute_box_max(D, N):
    """Largest S in the box with no two points differing by a vector of D."""
    cells = list(itertools.product(*[range(x) for x in N]))
    Dset = {tuple(v) for v in D}
    for size in range(len(cells), 0, -1):
        for S in itertools.combinations(cells, size):
            ok = True
            for p, q in itertools.combinations(S, 2):
                if tuple(a - b for a, b in zip(p, q)) in Dset:
                    ok = False
                    break
            if ok:
                return Fraction(size, len(cells))
    return Fraction(0)
