"""Bracket nu(D) for integer distance sets D by periodic search and a box.

    python3 scripts/motzkin_periodic.py [box]
"""
import sys

from commtower.lattice import DifferenceSet, motzkin_bounds

SETS = [(1,), (1, 2), (1, 3), (2, 3), (1, 4), (1, 2, 3), (1, 2, 4), (2, 3, 4)]


def main(argv):
    box = int(argv[1]) if len(argv) > 1 else 24
    print("distances   lower   upper   period")
    for ds in SETS:
        D = DifferenceSet([(k,) for k in ds], symmetrize=True)
        periods = [(L,) for L in range(max(ds) + 1, 3 * max(ds) + 4)]
        b = motzkin_bounds(D, (box,), periods)
        print(f"{str(ds):<11} {str(b.lower):<7} {str(b.upper):<7} {b.best_period}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
