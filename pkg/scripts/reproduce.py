"""Run the reproduction battery and print one line per result.

    python3 scripts/reproduce.py [out_dir] [section,section,...]
"""
import sys

from commtower.suite import reproduce


def main(argv):
    out_dir = argv[1] if len(argv) > 1 else "artifacts"
    sections = argv[2].split(",") if len(argv) > 2 else None
    summary = reproduce(out_dir, sections, log=lambda m: print(m, file=sys.stderr))
    for r in summary["results"]:
        print(f"{'HOLDS' if r['holds'] else 'SHORT'}  {r['claim']}: {r['observed']}")
    return 0 if all(r["holds"] for r in summary["results"]) else 2


if __name__ == "__main__":
    sys.exit(main(sys.argv))
