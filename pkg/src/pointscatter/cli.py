"""Command-line front-end.

    pointscatter <command> --config <path> [--out <dir>] [--threads <n>]

Exit status: 0 when every verdict passes, 1 when a physics verdict fails,
2 on a usage or configuration error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable

import numpy as np

from . import config as cfg
from .errors import ConvergenceError, DomainError, PreconditionError, ResonanceError
from .interior import (
    box_eigenspace,
    enclosing_ball,
    interior_samples,
    multiplicity_lower_bound,
    sphere_samples,
    vanishing_herglotz_basis,
    verify_ite_pair,
)
from .multipoint import MultipointPotential
from .output import Manifest, complex_columns, write_csv
from .scattering import amplitude_matrix, farfield_extract, normalisation
from .soliton1d import (
    SolitonSpectrum,
    delta_limit_error,
    sample_soliton,
    scatter1d_numeric,
    transmission_T,
    transparency_count,
    transparency_energies,
)
from .soperator import (
    KERNEL_RANK_THRESHOLD,
    RANK_THRESHOLD,
    build_quadrature,
    build_soperator,
    kernel_basis,
    singular_spectrum,
    unitarity_defect,
)

OUT_ENV = "POINTSCATTER_OUT"
DEFAULT_OUT = "pointscatter-out"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# failures inside an experiment that are verdicts, not crashes
NUMERICAL_FAILURES = (ResonanceError, ConvergenceError, ArithmeticError)


class Run:
    """State shared by one command invocation."""

    def __init__(self, conf: cfg.ExperimentConfig, out: Path, threads: int):
        self.conf = conf
        self.out = out
        self.threads = max(1, threads)
        self.manifest = Manifest(conf.command, conf.sha256(), {"command": conf.command, **conf.data})

    def tol(self, name: str, default: float) -> float:
        value = self.conf.tolerance(name, default)
        self.manifest.thresholds[name] = value
        return value

    def csv(self, name: str, header: list[str], rows) -> None:
        write_csv(self.out / name, header, rows)
        self.manifest.outputs.append(name)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.manifest.check(name, passed, detail)

    def map(self, fn: Callable, items: list) -> list:
        if self.threads == 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.threads) as pool:
            return list(pool.map(fn, items))

    def guarded(self, name: str, fn: Callable, *args):
        """Call ``fn``; numerical breakdowns become a failed verdict named ``name``."""
        try:
            return fn(*args)
        except NUMERICAL_FAILURES as exc:
            self.check(name, False, f"{type(exc).__name__}: {exc}")
            return None


def potential_from(data: dict, source: str) -> MultipointPotential:
    try:
        scs = data["scatterers"]
        positions = [s["position"] for s in scs]
        alphas = [cfg.parse_complex(s["alpha"]) for s in scs]
        experimental = bool(data.get("experimental", False))
        if not experimental:
            if any(a.imag != 0 for a in alphas):
                raise DomainError("complex alpha requires experimental: true")
            alphas = [a.real for a in alphas]
        return MultipointPotential.from_arrays(
            np.asarray(positions, dtype=float).reshape(len(scs), -1) if scs else np.zeros((0, data["dimension"])),
            np.asarray(alphas), d=data["dimension"], experimental=experimental,
        )
    except (DomainError, ValueError) as exc:
        raise cfg.ConfigError(f"{source}: potential: {exc}") from None


def _directions(d: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Angles and unit vectors of the output grid: +-1 in d=1, the circle in d=2,
    the x-z great circle (polar angle) in d=3."""
    if d == 1:
        return np.array([0.0, math.pi]), np.array([[1.0], [-1.0]])
    theta = 2.0 * math.pi * np.arange(count) / count
    if d == 2:
        return theta, np.column_stack([np.cos(theta), np.sin(theta)])
    return theta, np.column_stack([np.sin(theta), np.zeros(count), np.cos(theta)])


# ---------------------------------------------------------------- commands

def cmd_amplitude(run: Run) -> None:
    conf = run.conf
    pot = potential_from(conf.get("potential"), conf.source)
    angles, dirs = _directions(pot.d, conf.get("angles", 16))
    radii = conf.get("radii", [1e3, 1e4])
    recip_tol = run.tol("reciprocity", 1e-12)
    ratio_tol = run.tol("farfield_ratio", 0.3)
    exact_tol = run.tol("farfield_exact", 1e-10)

    def one(E: float):
        kappa = math.sqrt(E)
        F = amplitude_matrix(pot, kappa, dirs, dirs)
        Fr = amplitude_matrix(pot, kappa, -dirs, -dirs)
        return E, kappa, F, Fr

    rows = []
    for res in run.map(lambda E: run.guarded(f"solve E={E:g}", one, E), conf.energies()):
        if res is None:
            continue
        E, kappa, F, Fr = res
        c = normalisation(pot.d, kappa)
        for a, ti in enumerate(angles):
            for b, to in enumerate(angles):
                rows.append((E, ti, to, complex(F[a, b]), complex(c * F[a, b])))
        scale = max(1.0, float(np.max(np.abs(F))))
        recip = float(np.max(np.abs(F - Fr.T)))
        run.check(f"reciprocity E={E:g}", recip <= recip_tol * scale, f"max|f(k,l)-f(-l,-k)| = {recip:.3e}")

        k = kappa * dirs[0]
        theta = dirs[-1]
        fplus = c * F[0, -1]
        try:
            errs = [abs(farfield_extract(pot, k, theta, R) - fplus) for R in radii]
        except PreconditionError as exc:
            run.check(f"farfield E={E:g}", False, str(exc))
            continue
        expected = radii[1] / radii[0]
        if errs[0] <= exact_tol * max(1.0, abs(fplus)):
            run.check(f"farfield E={E:g}", True, f"extraction exact: error {errs[0]:.3e}")
        else:
            ratio = errs[0] / errs[1] if errs[1] > 0 else math.inf
            ok = abs(ratio - expected) <= ratio_tol * expected
            run.check(f"farfield E={E:g}", ok, f"error ratio {ratio:.4g}, expected {expected:g}")
    run.csv("amplitude.csv", ["energy", "theta_in", "theta_out", *complex_columns("f"), *complex_columns("f+")], rows)


def _quadrature(conf: cfg.ExperimentConfig, d: int):
    q = conf.get("quadrature", {})
    try:
        return build_quadrature(d, q.get("M", 0), m_polar=q.get("m_polar"))
    except DomainError as exc:
        raise cfg.ConfigError(f"{conf.source}: quadrature: {exc}") from None


def cmd_soperator(run: Run) -> None:
    conf = run.conf
    pot = potential_from(conf.get("potential"), conf.source)
    quad = _quadrature(conf, pot.d)
    rank_thr = run.tol("rank_threshold", RANK_THRESHOLD)
    unit_tol = run.tol("unitarity", 1e-6 if pot.d == 3 else 1e-8)
    check_unitarity = not pot.experimental

    def one(E: float):
        S = build_soperator(pot, E, quad)
        report = singular_spectrum(S, pot.n, rank_thr)
        defect = unitarity_defect(S) if check_unitarity else None
        return E, report, defect

    rows = []
    for res in run.map(lambda E: run.guarded(f"solve E={E:g}", one, E), conf.energies()):
        if res is None:
            continue
        E, report, defect = res
        s1 = report.sigma[0] if len(report.sigma) else 0.0
        for i, s in enumerate(report.sigma):
            rows.append((E, i + 1, s, s / s1 if s1 > 0 else 0.0))
        run.check(f"rank E={E:g}", report.rank_ok,
                  f"rank {report.rank_estimate} <= n = {pot.n}; sigma_(n+1)/sigma_1 = {report.ratio(pot.n):.3e}")
        if defect is not None:
            run.check(f"unitarity E={E:g}", defect < unit_tol, f"||S*S - 1||_2 = {defect:.3e}")
    run.csv("singular_values.csv", ["energy", "index", "sigma", "sigma/sigma1"], rows)


def cmd_kernel(run: Run) -> None:
    conf = run.conf
    pot = potential_from(conf.get("potential"), conf.source)
    quad = _quadrature(conf, pot.d)
    rank_thr = run.tol("kernel_rank_threshold", KERNEL_RANK_THRESHOLD)
    res_tol = run.tol("kernel_residual", 1e-10)

    def one(E: float):
        return E, kernel_basis(pot, E, quad, rank_thr)

    rows = []
    for res in run.map(lambda E: run.guarded(f"solve E={E:g}", one, E), conf.energies()):
        if res is None:
            continue
        E, kb = res
        M = quad.size
        rows.append((E, M, pot.n, kb.charge_rank, kb.dimension, kb.residual))
        run.check(f"kernel dimension E={E:g}", kb.dimension >= M - pot.n,
                  f"dimension {kb.dimension} >= M - n = {M - pot.n}")
        run.check(f"kernel residual E={E:g}", kb.residual < res_tol, f"max ||(S-1)u|| = {kb.residual:.3e}")
        if conf.get("dump_basis", False):
            cols = [c for j in range(kb.dimension) for c in complex_columns(f"u{j + 1}")]
            run.csv(f"kernel_basis_E{E:g}.csv", ["node", *cols],
                    [(i, *(complex(v) for v in kb.basis[i])) for i in range(M)])
    run.csv("kernel.csv", ["energy", "M", "n", "charge_rank", "kernel_dimension", "residual"], rows)


def _random_spectrum(rng: np.random.Generator, N: int) -> SolitonSpectrum:
    while True:
        kap = rng.uniform(0.2, 5.0, N)
        if N == 1 or np.min(np.diff(np.sort(kap))) > 1e-6:
            return SolitonSpectrum(tuple(kap))


def cmd_soliton(run: Run) -> None:
    conf = run.conf
    kappas = conf.get("kappas")
    try:
        spec = SolitonSpectrum(tuple(kappas), tuple(conf.get("normings")) if conf.get("normings") else None)
    except DomainError as exc:
        raise cfg.ConfigError(f"{conf.source}: kappas: {exc}") from None
    t_tol = run.tol("transparency", 1e-12)

    energies = run.guarded("transparency energies", transparency_energies, spec)
    if energies is not None:
        expected = transparency_count(spec.N)
        run.csv("transparency.csv", ["N", "count", *(f"E_{m + 1}" for m in range(len(energies)))],
                [(spec.N, len(energies), *energies)])
        run.check("count law", len(energies) == expected, f"{len(energies)} energies, expected floor((N-1)/2) = {expected}")
        if energies:
            dev = max(abs(transmission_T(spec, math.sqrt(E)) - 1.0) for E in energies)
            run.check("T(k_m) = 1", dev < t_tol, f"max |T(k_m) - 1| = {dev:.3e}")

    sweep = conf.get("sweep")
    if sweep:
        r_tol = run.tol("reflection", 1e-4)
        tn_tol = run.tol("numeric_transparency", 1e-3)
        ks = np.linspace(sweep["k_min"], sweep["k_max"], sweep["count"])
        step = sweep.get("step", min(0.005, 2.0 * math.pi / (25.0 * sweep["k_max"])))
        try:
            v = sample_soliton(spec, h=step)
            T, R = scatter1d_numeric(v, ks)
        except PreconditionError as exc:
            raise cfg.ConfigError(f"{conf.source}: sweep: {exc}") from None
        run.csv("sweep.csv", ["k", "Re(T)", "Im(T)", "|R|"], [(k, complex(t), abs(r)) for k, t, r in zip(ks, T, R)])
        run.check("reflectionless", float(np.max(np.abs(R))) < r_tol, f"max |R| = {np.max(np.abs(R)):.3e}")
        if energies:
            Tm, _ = scatter1d_numeric(v, np.sqrt(energies))
            dev = float(np.max(np.abs(Tm - 1.0)))
            run.check("numeric T(k_m) = 1", dev < tn_tol, f"max |T_num(k_m) - 1| = {dev:.3e}")

    law = conf.get("count_law")
    if law:
        rng = np.random.default_rng(conf.get("seed", 0))
        rows, bad = [], 0
        for N in range(1, law.get("N_max", 12) + 1):
            for trial in range(law.get("trials", 50)):
                got = run.guarded(f"count law N={N}", transparency_energies, _random_spectrum(rng, N))
                count = -1 if got is None else len(got)
                bad += count != transparency_count(N)
                rows.append((N, trial, count, transparency_count(N)))
        run.csv("count_law.csv", ["N", "trial", "count", "expected"], rows)
        run.check("count law (random spectra)", bad == 0, f"{len(rows) - bad}/{len(rows)} spectra match")


def cmd_delta_limit(run: Run) -> None:
    conf = run.conf
    Ns = sorted(conf.get("N", [100, 200]))
    k = conf.get("k", 1.0)
    band = run.tol("ratio_band", 0.2)
    rows = []
    for alpha in conf.get("alphas"):
        if alpha == 0:
            raise cfg.ConfigError(f"{conf.source}: alphas: alpha must be non-zero")
        errs = [delta_limit_error(alpha, N, k) for N in Ns]
        rows += [(alpha, N, e) for N, e in zip(Ns, errs)]
        for (N1, e1), (N2, e2) in zip(zip(Ns, errs), zip(Ns[1:], errs[1:])):
            expected = N1 / N2
            ratio = e2 / e1 if e1 > 0 else math.inf
            lo, hi = expected * (1 - band), expected * (1 + 1.2 * band)
            run.check(f"first order alpha={alpha:g} N={N1}->{N2}", lo <= ratio <= hi,
                      f"error ratio {ratio:.4g} in [{lo:.3g}, {hi:.3g}]")
    run.csv("delta_limit.csv", ["alpha", "N", "error"], rows)


def cmd_ite(run: Run) -> None:
    conf = run.conf
    if conf.get("potential") is not None:
        pot = potential_from(conf.get("potential"), conf.source)
    elif conf.get("points") is not None:
        pts = conf.get("points")
        pot = potential_from({"dimension": len(pts[0]),
                              "scatterers": [{"position": p, "alpha": 1.0} for p in pts]}, conf.source)
    else:
        raise cfg.ConfigError(f"{conf.source}: need either 'potential' or 'points'")
    if pot.d not in (2, 3):
        raise cfg.ConfigError(f"{conf.source}: potential.dimension: witnesses need dimension 2 or 3")
    energies = [cfg.parse_complex(e) for e in conf.get("energies", [1.0, "1+0.5j"])]
    helm_tol = run.tol("helmholtz", 1e-4)
    point_tol = run.tol("point", 1e-12)
    cauchy_tol = run.tol("cauchy", 1e-12)
    rng = np.random.default_rng(conf.get("seed", 0))
    radius = enclosing_ball(pot.positions)
    inside = interior_samples(pot.positions, radius, conf.get("samples", 20), rng)
    boundary, normals = sphere_samples(pot.d, 64, radius)

    rows = []
    for E in energies:
        for M in conf.get("M"):
            if M <= pot.n:
                raise cfg.ConfigError(f"{conf.source}: M: need M > n = {pot.n}, got {M}")
            fam = vanishing_herglotz_basis(pot.positions, E, M)
            res = verify_ite_pair(pot, fam, inside, boundary, normals)
            rows.append((E, M, pot.n, fam.dimension, res.helmholtz, res.point, res.cauchy))
            tag = f"E={E:g} M={M}"
            run.check(f"witness dimension {tag}", fam.dimension == M - pot.n, f"{fam.dimension} vs M - n = {M - pot.n}")
            run.check(f"residuals {tag}", res.ok(helm_tol, point_tol, cauchy_tol),
                      f"helmholtz {res.helmholtz:.2e}, point {res.point:.2e}, cauchy {res.cauchy:.2e}")
    run.csv("ite.csv", [*complex_columns("E"), "M", "n", "witness_dimension",
                        "helmholtz_residual", "point_residual", "cauchy_residual"], rows)


def cmd_box_bound(run: Run) -> None:
    conf = run.conf
    rng = np.random.default_rng(conf.get("seed", 0))
    trials = conf.get("trials", 100)
    rows = []
    for E in conf.get("energies"):
        entry = box_eigenspace(E)
        for n in conf.get("n_points"):
            if n >= entry.multiplicity:
                raise cfg.ConfigError(
                    f"{conf.source}: n_points: n = {n} must be below the multiplicity {entry.multiplicity} of E = {E}"
                )
            ok = 0
            for t in range(trials):
                pts = rng.uniform(0.05, math.pi - 0.05, size=(n, 2))
                bound = multiplicity_lower_bound(entry, pts)
                ok += bound >= entry.multiplicity - n
                rows.append((E, entry.multiplicity, n, t, bound))
            run.check(f"bound E={E} n={n}", ok == trials, f"{ok}/{trials} trials with bound >= m - n")
    run.csv("box_bound.csv", ["E", "m", "n", "trial", "bound"], rows)


COMMANDS: dict[str, Callable[[Run], None]] = {
    "amplitude": cmd_amplitude,
    "soperator": cmd_soperator,
    "kernel": cmd_kernel,
    "soliton": cmd_soliton,
    "delta-limit": cmd_delta_limit,
    "ite": cmd_ite,
    "box-bound": cmd_box_bound,
}


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pointscatter", description="Point-scatterer scattering experiments.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--config", type=Path, help="YAML experiment config")
    p.add_argument("--out", type=Path, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--threads", type=int, default=1, help="energies processed concurrently")
    p.add_argument("--N", type=int, help="soliton: number of bound states")
    p.add_argument("--kappas", help="soliton: comma-separated kappa values")
    return p


class UsageError(Exception):
    pass


def _parse_kappas(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--kappas must be comma-separated numbers, got {text!r}") from None


def load_config(args: argparse.Namespace) -> cfg.ExperimentConfig:
    if args.command != "soliton" and (args.N is not None or args.kappas is not None):
        raise UsageError("--N and --kappas apply to the soliton command only")
    if args.config is not None:
        conf = cfg.load(args.command, args.config)
    elif args.command == "soliton":
        conf = cfg.validate("soliton", {}, "<flags>")
    else:
        raise UsageError(f"{args.command} requires --config")
    if args.command == "soliton":
        if args.kappas is not None:
            conf.data["kappas"] = _parse_kappas(args.kappas)
        elif args.N is not None and "kappas" not in conf.data:
            conf.data["kappas"] = [float(j) for j in range(1, args.N + 1)]
        kappas = conf.data.get("kappas")
        if not kappas:
            raise UsageError("soliton needs kappas, from --kappas, --N or the config")
        if args.N is not None and args.N != len(kappas):
            raise UsageError(f"--N {args.N} does not match {len(kappas)} kappas")
        conf = cfg.validate("soliton", conf.data, conf.source)
    return conf


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        conf = load_config(args)
        out = args.out or Path(os.environ.get(OUT_ENV, DEFAULT_OUT))
        out.mkdir(parents=True, exist_ok=True)
        run = Run(conf, out, args.threads)
        COMMANDS[args.command](run)
    except (UsageError, cfg.ConfigError) as exc:
        print(f"pointscatter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    run.manifest.write(out / "manifest.json")
    for v in run.manifest.verdicts:
        print(f"{'PASS' if v.passed else 'FAIL'}  {v.name}: {v.detail}")
    print(f"wrote {', '.join(run.manifest.outputs + ['manifest.json'])} to {out}")
    return EXIT_OK if run.manifest.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
