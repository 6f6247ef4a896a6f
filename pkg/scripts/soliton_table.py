"""Transparency energies of the spectra kappa = (1, ..., N) for N = 1..N_max.

    python scripts/soliton_table.py --N-max 10 --out results/soliton_table.csv
"""
from __future__ import annotations

import argparse
from pathlib import Path

from pointscatter.soliton1d import SolitonSpectrum, transparency_energies


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N-max", type=int, default=10)
    ap.add_argument("--out", type=Path, default=Path("soliton_table.csv"))
    args = ap.parse_args()
    rows = []
    for N in range(1, args.N_max + 1):
        energies = transparency_energies(SolitonSpectrum(tuple(float(j) for j in range(1, N + 1))))
        rows.append((N, len(energies), " ".join(format(E, ".17g") for E in energies)))
        print(N, len(energies), ", ".join(f"{E:.10g}" for E in energies))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    # energies go in one space-separated column so every row has the same width
    args.out.write_text("N,count,energies\n" + "".join(f"{N},{c},{e}\n" for N, c, e in rows))


if __name__ == "__main__":
    main()
