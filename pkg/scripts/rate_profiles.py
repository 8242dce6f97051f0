"""Jackson-type approximation rates ``n ‖V - V_n‖∞`` for corpus fields and kernel kinds.

A Zygmund-class field shows a bounded profile; a little-Zygmund field shows it
tending to zero.  Usage: python scripts/rate_profiles.py [--fields weierstrass abs_sin]
"""

import argparse
import sys

import numpy as np

from teichkit.corpus import get_field
from teichkit.trigapprox import KINDS, rate_profile


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fields", nargs="*", default=["weierstrass", "abs_sin", "sin1"])
    ap.add_argument("--kinds", nargs="*", default=[k for k in KINDS if k != "jackson-paper"])
    ap.add_argument("--max-log2", type=int, default=9)
    args = ap.parse_args(argv)
    ns = 2 ** np.arange(2, args.max_log2 + 1)
    print("field".ljust(12), "kind".ljust(12), " ".join(f"{n:>8d}" for n in ns))
    for name in args.fields:
        V = get_field(name)
        for kind in args.kinds:
            prof = rate_profile(V, ns, kind=kind)
            print(name.ljust(12), kind.ljust(12), " ".join(f"{s:8.4f}" for s in prof.scaled))
    return 0


if __name__ == "__main__":
    sys.exit(main())
