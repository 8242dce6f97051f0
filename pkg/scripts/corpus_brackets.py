"""Distance brackets for every map of the example corpus.

Usage: python scripts/corpus_brackets.py [--out brackets.csv] [--maps kink2 sqrt ...]
"""

import argparse
import csv
import sys
import time

from teichkit.corpus import MAPS, get_map
from teichkit.teichmetric import distance_bracket, phi_family


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--maps", nargs="*", default=list(MAPS))
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args(argv)
    phis = phi_family()
    rows = []
    for name in args.maps:
        t0 = time.perf_counter()
        b = distance_bracket(get_map(name), phis)
        row = b.as_dict() | {"seconds": round(time.perf_counter() - t0, 1)}
        rows.append(row)
        print(f"{name:12s} d in [{b.d_lower:.4f}, {b.d_upper:.4f}]  K_BA={b.K:.4f}  "
              f"certified={b.certified}  {row['seconds']}s", flush=True)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
