"""Convergence of square wells to a one-dimensional point scatterer.

Prints |T(v_N) - T_point| for a range of N and the observed order.

    python scripts/delta_convergence.py --alpha 1.0
"""
from __future__ import annotations

import argparse
import math

from pointscatter.soliton1d import delta_limit_error


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--k", type=float, default=1.0)
    args = ap.parse_args()
    prev = None
    for N in (25, 50, 100, 200, 400, 800):
        err = delta_limit_error(args.alpha, N, args.k)
        order = "" if prev is None else f"  order {math.log2(prev / err):.3f}"
        print(f"N={N:4d}  error {err:.6e}{order}")
        prev = err


if __name__ == "__main__":
    main()
