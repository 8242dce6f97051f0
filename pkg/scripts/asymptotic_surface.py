"""Measured ``ε′(ε, δ)`` surface for the asymptotic-conformality property.

For each map and strip height ``δ``: ``ε`` is the worst ratio distortion over
scales below ``δ`` and ``ε′ = max K_z - 1`` on the strip ``Im z < δ`` of the
Beurling-Ahlfors extension.  Usage: python scripts/asymptotic_surface.py
"""

import argparse
import sys

import numpy as np

from teichkit import circlemap as cm
from teichkit.corpus import get_map
from teichkit.extension import ba_extend, beltrami_of, rect_grid


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--maps", nargs="*", default=["sine_lift", "sine_cubic", "circle_kink"])
    ap.add_argument("--deltas", nargs="*", type=float, default=[0.2, 0.05, 0.0125, 0.003])
    args = ap.parse_args(argv)
    x = np.linspace(0, 1, 257)
    print("map".ljust(12), "delta".rjust(8), "eps".rjust(10), "eps_prime".rjust(10))
    for name in args.maps:
        h = get_map(name)
        H = ba_extend(h)
        for d in args.deltas:
            eps = cm.ratio_distortion_profile(h, np.geomspace(d, d / 64, 12), x).distortion.max()
            K = beltrami_of(H, rect_grid((0, 1), (d / 64, d), 65, 12), method="exact").K_max
            print(name.ljust(12), f"{d:8.4f}", f"{eps:10.4f}", f"{K - 1:10.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
