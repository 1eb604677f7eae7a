"""Print a coarse text map of log10 s over a slice, marking the smallest cells.

    python3 scripts/grid_slice.py scheme.json --c3 0.25 --c4 0.5 --res 24
"""
import argparse

import numpy as np

from ppas.jump import grid_slice
from ppas.schemes import ZeroScheme
from ppas.surface import SurfaceConfig

SHADES = " .:-=+*#%@"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("scheme")
    ap.add_argument("--c3", type=float, default=0.0)
    ap.add_argument("--c4", type=float, default=0.0)
    ap.add_argument("--res", type=int, default=24)
    ap.add_argument("--i", type=int, choices=(1, 2), default=2)
    args = ap.parse_args(argv)

    X = ZeroScheme.load(args.scheme)
    data = grid_slice(X, SurfaceConfig(), i=args.i, c3=args.c3, c4=args.c4, res=args.res)
    logs = data[:, 2].reshape(args.res, args.res)
    lo, hi = logs.min(), logs.max()
    # dark cells are close to a rank drop
    idx = np.round((hi - logs) / max(hi - lo, 1e-12) * (len(SHADES) - 1)).astype(int)
    for row in idx.T[::-1]:
        print("".join(SHADES[k] * 2 for k in row))
    k = int(np.argmin(data[:, 2]))
    print(f"min log10 s = {data[k, 2]:.2f} at c1={data[k, 0]:.3f}, c2={data[k, 1]:.3f}")


if __name__ == "__main__":
    main()
