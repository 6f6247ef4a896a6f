"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line that is echoed in the
pytest terminal summary. Running this file directly prints the same lines.
"""
from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from oracles import series_j0_y0  # noqa: E402
from pointscatter.interior import (  # noqa: E402
    box_eigenspace,
    enclosing_ball,
    interior_samples,
    multiplicity_lower_bound,
    sphere_samples,
    vanishing_herglotz_basis,
    verify_ite_pair,
)
from pointscatter.multipoint import MultipointPotential, boundary_residual, solve_charges  # noqa: E402
from pointscatter.scattering import amplitude_fplus, farfield_extract  # noqa: E402
from pointscatter.soliton1d import (  # noqa: E402
    SolitonSpectrum,
    delta_limit_error,
    sample_soliton,
    scatter1d_numeric,
    transmission_T,
    transparency_count,
    transparency_energies,
)
from pointscatter.soperator import (  # noqa: E402
    build_quadrature,
    build_soperator,
    kernel_basis,
    singular_spectrum,
    unitarity_defect,
)
from pointscatter.specfun import bessel_j0_y0  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

SEED = 1729


def report(number: int, title: str, passed: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def random_potential(rng, d: int, n: int, min_sep: float = 0.2) -> MultipointPotential:
    while True:
        pts = rng.uniform(-1.0, 1.0, (n, d))
        if n == 1 or np.min(np.linalg.norm(pts[:, None] - pts[None], axis=-1)[np.triu_indices(n, 1)]) > min_sep:
            return MultipointPotential.from_arrays(pts, rng.uniform(0.2, 1.5, n) * rng.choice([-1, 1], n))


def unit(rng, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def test_criterion_1_rank_law():
    rng = np.random.default_rng(SEED)
    quads = {2: build_quadrature(2, 64), 3: build_quadrature(3, 288)}
    worst, runs = 0.0, 0
    start = time.perf_counter()
    for d in (2, 3):
        for n in (1, 2, 5):
            pot = random_potential(rng, d, n)
            for E in (0.5, 1.0, 4.0):
                rep = singular_spectrum(build_soperator(pot, E, quads[d]), n)
                worst = max(worst, rep.ratio(n))
                runs += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 30.0
    assert report(1, "rank law", ok, f"{runs} runs, max sigma_(n+1)/sigma_1 = {worst:.2e} (< 1e-8), {elapsed:.1f} s (< 30 s)")


def test_criterion_2_kernel_dimension():
    rng = np.random.default_rng(SEED + 2)
    ok, worst, dims = True, 0.0, []
    for n in (1, 2, 5):
        pot = random_potential(rng, 2, n)
        for M in (64, 128):
            kb = kernel_basis(pot, 1.0, build_quadrature(2, M))
            ok &= kb.dimension == M - n
            worst = max(worst, kb.residual)
            dims.append(kb.dimension)
    grows = all(dims[i + 1] > dims[i] for i in range(0, len(dims), 2))
    ok = ok and worst < 1e-10 and grows
    assert report(2, "kernel dimension", ok, f"dimensions {dims} = M - n, residual {worst:.2e} (< 1e-10)")


def test_criterion_3_farfield_consistency():
    rng = np.random.default_rng(SEED + 3)
    ratios, exact_err, ok = [], 0.0, True
    for d in (1, 2, 3):
        for n in (1, 2, 3, 4):
            pot = random_potential(rng, d, n)
            kappa = rng.uniform(0.5, 2.0)
            k, theta = kappa * unit(rng, d), unit(rng, d)
            fplus = amplitude_fplus(pot, k, kappa * theta).fplus
            e3, e4 = (abs(farfield_extract(pot, k, theta, R) - fplus) for R in (1e3, 1e4))
            if d == 1:
                # no O(1/R) term: the 1D Green function is a pure outgoing wave;
                # what remains is round-off in the phase kappa R ~ 1e4
                exact_err = max(exact_err, e3, e4)
                ok &= max(e3, e4) < 1e-10
            else:
                ratios.append(e3 / e4)
                ok &= abs(e3 / e4 - 10.0) <= 3.0
    detail = f"d=2,3 error ratios in [{min(ratios):.3f}, {max(ratios):.3f}] (10 +- 30%); d=1 exact to {exact_err:.1e} (< 1e-10)"
    assert report(3, "far-field consistency", ok, detail)


def test_criterion_4_boundary_conditions():
    rng = np.random.default_rng(SEED + 4)
    worst, count = 0.0, 0
    for i in range(200):
        d = 1 + i % 3
        pot = random_potential(rng, d, int(rng.integers(1, 6)))
        k = rng.uniform(0.3, 3.0) * unit(rng, d)
        sol = solve_charges(pot, k)
        worst = max(worst, boundary_residual(pot, k, sol))
        count += 1
    assert report(4, "boundary conditions", worst < 1e-10, f"{count} configurations, max residual {worst:.2e} (< 1e-10)")


def test_criterion_5_unitarity():
    rng = np.random.default_rng(SEED + 5)
    d2 = max(unitarity_defect(build_soperator(random_potential(rng, 2, n), 1.0, build_quadrature(2, 128))) for n in (1, 3, 5))
    d3 = max(unitarity_defect(build_soperator(random_potential(rng, 3, n), 1.0, build_quadrature(3, 288))) for n in (1, 3))
    ok = d2 < 1e-8 and d3 < 1e-6
    assert report(5, "unitarity", ok, f"d=2 M=128: {d2:.2e} (< 1e-8); d=3 M=288: {d3:.2e} (< 1e-6)")


def test_criterion_6_transparency_count():
    rng = np.random.default_rng(SEED + 6)
    matched, total, worst_T = 0, 0, 0.0
    for N in range(1, 13):
        for _ in range(50):
            while True:
                kap = rng.uniform(0.2, 5.0, N)
                if N == 1 or np.min(np.diff(np.sort(kap))) > 1e-6:
                    break
            spec = SolitonSpectrum(tuple(kap))
            energies = transparency_energies(spec)
            matched += len(energies) == transparency_count(N)
            total += 1
            for E in energies:
                worst_T = max(worst_T, abs(transmission_T(spec, math.sqrt(E)) - 1.0))
    triple = transparency_energies(SolitonSpectrum((1 - 1e-6, 1.0, 1 + 1e-6)))
    triple_ok = len(triple) == 1 and abs(triple[0] - 1 / 3) < 1e-5
    ok = matched == total and triple_ok and worst_T < 1e-12
    detail = f"{matched}/{total} spectra match floor((N-1)/2); triple E = {triple[0]:.8f}; max |T(k_m)-1| = {worst_T:.1e}"
    assert report(6, "transparency count", ok, detail)


def test_criterion_7_reflectionless():
    spec = SolitonSpectrum((1.0, 2.0))
    k = np.linspace(0.1, 10.0, 100)
    _, R = scatter1d_numeric(sample_soliton(spec, h=0.005), k)
    max_R = float(np.max(np.abs(R)))
    # N = 2 has no transparency energy, so the roots are checked on N = 3 and N = 5 spectra
    worst_T = 0.0
    for kap in ((1.0, 2.0, 3.0), (1.0, 2.0, 3.0, 4.0, 5.0)):
        s = SolitonSpectrum(kap)
        km = np.sqrt(transparency_energies(s))
        T, _ = scatter1d_numeric(sample_soliton(s, h=0.002), km)
        worst_T = max(worst_T, float(np.max(np.abs(T - 1.0))))
    ok = max_R < 1e-4 and worst_T < 1e-3
    assert report(7, "reflectionless oracle", ok, f"N=2 max |R| = {max_R:.2e} (< 1e-4); max |T_num(k_m)-1| = {worst_T:.2e} (< 1e-3)")


def test_criterion_8_interior_witnesses():
    rng = np.random.default_rng(SEED + 8)
    pts = np.array([[0.0, 0.0], [0.5, 0.2], [-0.3, 0.6]])
    pot = MultipointPotential.from_arrays(pts, [0.5, -1.0, 2.0])
    radius = enclosing_ball(pts)
    inside = interior_samples(pts, radius, 20, rng)
    bnd, nrm = sphere_samples(2, 64, radius)
    ok, worst = True, [0.0, 0.0, 0.0]
    for E in (1.0, 1 + 0.5j):
        for M in (8, 16, 32, 64):
            fam = vanishing_herglotz_basis(pts, E, M)
            res = verify_ite_pair(pot, fam, inside, bnd, nrm)
            ok &= fam.dimension == M - pot.n and res.ok()
            worst = [max(w, r) for w, r in zip(worst, (res.helmholtz, res.point, res.cauchy))]
    detail = f"dimension M - n for M = 8..64; residuals helmholtz {worst[0]:.1e}, point {worst[1]:.1e}, cauchy {worst[2]:.1e}"
    assert report(8, "interior transmission witnesses", ok, detail)


def test_criterion_9_multiplicity_bound():
    rng = np.random.default_rng(SEED + 9)
    results = []
    for E, m in ((50, 3), (325, 6)):
        entry = box_eigenspace(E)
        assert entry.multiplicity == m
        for n in (1, 2):
            hits = sum(
                multiplicity_lower_bound(entry, rng.uniform(0.05, math.pi - 0.05, (n, 2))) >= m - n for _ in range(100)
            )
            results.append((E, n, hits))
    ok = all(h == 100 for *_, h in results)
    detail = ", ".join(f"E={E} n={n}: {h}/100" for E, n, h in results)
    assert report(9, "multiplicity bound", ok, detail)


def test_criterion_10_delta_limit():
    ratios = [delta_limit_error(a, 200) / delta_limit_error(a, 100) for a in (0.5, 1.0, 2.0)]
    ok = all(0.4 <= r <= 0.62 for r in ratios)
    assert report(10, "delta limit", ok, "error ratios " + ", ".join(f"{r:.4f}" for r in ratios) + " in [0.4, 0.62]")


def test_criterion_11_special_functions():
    grid = np.geomspace(1e-3, 50.0, 500)
    ref = np.array([series_j0_y0(x) for x in grid])
    j, y = bessel_j0_y0(grid)
    err = max(float(np.max(np.abs(j - ref[:, 0]))), float(np.max(np.abs(y - ref[:, 1]))))
    h = 1e-5
    jp, yp = bessel_j0_y0(grid[grid > 1e-2] + h)
    jm, ym = bessel_j0_y0(grid[grid > 1e-2] - h)
    xs = grid[grid > 1e-2]
    j0, y0 = bessel_j0_y0(xs)
    w = j0 * (yp - ym) / (2 * h) - y0 * (jp - jm) / (2 * h)
    wr = float(np.max(np.abs(w - 2 / (math.pi * xs)) / np.maximum(1.0, 2 / (math.pi * xs))))
    ok = err < 1e-10 and wr < 1e-6
    assert report(11, "special functions", ok, f"max error vs series {err:.1e} (< 1e-10); Wronskian {wr:.1e} (< 1e-6)")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(
        ((n, f) for n, f in globals().items() if n.startswith("test_criterion_")),
        key=lambda item: int(item[0].split("_")[2]),
    ):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
