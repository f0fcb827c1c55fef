#!/usr/bin/env python3
"""Two-slit screen profiles: coherent vs which-path, plus the dark regions.

Writes one CSV with both normalized patterns and prints where the coherent
pattern is eps-suppressed (the bins where an undetected arrival would
certify a change of state).
"""

import argparse
import csv
import sys

from hvqm.pathint import Geometry2Slit, dark_region_finder, screen_pattern


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bins", type=int, default=512)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--wavelength", type=float, default=0.01)
    ap.add_argument("--out", default="fringe_profile.csv")
    args = ap.parse_args()

    g = Geometry2Slit.from_wavelength(args.wavelength, bins=args.bins)
    coherent = screen_pattern(g, "coherent")
    whichpath = screen_pattern(g, "which-path")
    dark = dark_region_finder(coherent, whichpath, eps=args.eps)

    x = g.bin_centers()
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_center", "coherent", "whichpath", "dark"])
        for i in range(g.bins):
            writer.writerow([float(x[i]), float(coherent.probabilities[i]),
                             float(whichpath.probabilities[i]), int(i in set(dark))])

    print(f"wrote {args.out}")
    print(f"fringe spacing lambda*l2/d = {g.fringe_spacing}")
    print(f"{len(dark)} dark bins at eps = {args.eps}: "
          + ", ".join(f"{float(x[i]):+.3f}" for i in dark))
    return 0


if __name__ == "__main__":
    sys.exit(main())
