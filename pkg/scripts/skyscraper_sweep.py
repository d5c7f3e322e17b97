"""Tower measure of the d = 1 skyscraper as the arc budget grows.

    python3 scripts/skyscraper_sweep.py [c] [n,n,...] [budget,budget,...]
"""
import sys
import time
from fractions import Fraction

from commtower.skyscraper import skyscraper_tower
from commtower.towers import verify_tower


def main(argv):
    c = int(argv[1]) if len(argv) > 1 else 2
    heights = [int(x) for x in argv[2].split(",")] if len(argv) > 2 else [2, 4, 8]
    budgets = [int(x) for x in argv[3].split(",")] if len(argv) > 3 else [10_000, 100_000, 1_000_000]
    print("c  n  budget     tower     base arcs  stop       seconds")
    for n in heights:
        for b in budgets:
            t0 = time.perf_counter()
            r = skyscraper_tower(c, n, Fraction(1, 10), arc_budget=b, probe_budget=max(b // 8, 500))
            ok, mu = verify_tower((c,), r.base, (n,))
            assert ok and mu == r.tower
            print(f"{c:<2} {n:<2} {b:<10} {float(mu):.6f}  {len(r.base):<10} "
                  f"{r.stats.get('stopped', '-'):<10} {time.perf_counter() - t0:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
