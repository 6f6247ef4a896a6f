"""One-dimensional reflectionless potentials, their transparency energies, and
a direct Numerov scattering solver used as an independent check.

For bound-state parameters ``kappa_1 > ... > kappa_N > 0`` the transmission
coefficient is ``T(k) = prod (k + i kappa_j) / (k - i kappa_j)``. Each factor
is unimodular with phase ``2 atan(kappa_j / k)``, so ``T(k) = 1`` exactly when
the total phase ``Phi(k) = 2 sum atan(kappa_j / k)`` is a multiple of ``2 pi``.
``Phi`` falls strictly from ``N pi`` to 0, giving ``floor((N-1)/2)`` roots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .greens import green_farfield_coeff
from .multipoint import MultipointPotential, solve_charges

ROOT_RTOL = 1e-13
TAIL_ZERO = 1e-14
END_TOL = 1e-12
MIN_POINTS_PER_WAVELENGTH = 20


def centred_normings(kappas) -> np.ndarray:
    """Norming constants of the even N-soliton potential.

    ``c_j^2 = 2 kappa_j prod_{l != j} |(kappa_j + kappa_l) / (kappa_j - kappa_l)|``;
    for ``kappa = (1, ..., N)`` this gives ``-N(N+1) sech^2 x``.
    """
    kap = np.asarray(kappas, dtype=float)
    c2 = np.empty_like(kap)
    for j, kj in enumerate(kap):
        others = np.delete(kap, j)
        c2[j] = 2.0 * kj * np.prod(np.abs((kj + others) / (kj - others)))
    return np.sqrt(c2)


@dataclass(frozen=True)
class SolitonSpectrum:
    """Bound states ``E_j = -kappa_j^2`` and norming constants ``c_j``.

    Kappas are stored in decreasing order; normings default to the even
    (centred) potential.
    """

    kappas: tuple[float, ...]
    normings: tuple[float, ...] | None = None

    def __post_init__(self):
        kap = np.asarray(self.kappas, dtype=float).ravel()
        if kap.size < 1:
            raise DomainError("need at least one bound state")
        if np.any(~(kap > 0)) or np.any(~np.isfinite(kap)):
            raise DomainError("kappas must be finite and positive")
        order = np.argsort(-kap, kind="stable")
        kap = kap[order]
        if np.any(np.diff(kap) == 0):
            raise DomainError("kappas must be pairwise distinct; perturb equal values by a small epsilon")
        if self.normings is None:
            c = centred_normings(kap)
        else:
            c = np.asarray(self.normings, dtype=float).ravel()
            if c.shape != kap.shape or np.any(~(c > 0)):
                raise DomainError("need one positive norming constant per kappa")
            c = c[order]
        object.__setattr__(self, "kappas", tuple(kap.tolist()))
        object.__setattr__(self, "normings", tuple(c.tolist()))

    @property
    def N(self) -> int:
        return len(self.kappas)

    @property
    def bound_energies(self) -> np.ndarray:
        return -np.asarray(self.kappas) ** 2


def transmission_T(spec: SolitonSpectrum, k):
    k_arr = np.asarray(k, dtype=float)
    if np.any(~(k_arr > 0)):
        raise DomainError("transmission_T requires k > 0")
    kap = np.asarray(spec.kappas)
    kk = k_arr[..., None]
    out = np.prod((kk + 1j * kap) / (kk - 1j * kap), axis=-1)
    return complex(out) if k_arr.ndim == 0 else out


def total_phase(spec: SolitonSpectrum, k):
    """Continuous phase ``Phi(k) = 2 sum atan(kappa_j / k)`` of ``T(k)``."""
    k_arr = np.asarray(k, dtype=float)
    out = 2.0 * np.sum(np.arctan2(np.asarray(spec.kappas), k_arr[..., None]), axis=-1)
    return float(out) if k_arr.ndim == 0 else out


def transparency_count(N: int) -> int:
    return (N - 1) // 2


def _check_monotone(spec: SolitonSpectrum, lo: float, hi: float) -> None:
    grid = np.geomspace(lo, hi, 2001)
    if np.any(np.diff(total_phase(spec, grid)) >= 0):
        raise ArithmeticError("phase of T(k) is not strictly decreasing on the bracket")


def transparency_energies(spec: SolitonSpectrum) -> list[float]:
    """Positive energies ``k^2`` with ``T(k) = 1``, ascending."""
    kap = np.asarray(spec.kappas)
    N = spec.N
    roots = []
    for m in range(1, transparency_count(N) + 1):
        target = 2.0 * math.pi * m
        # Phi(k) <= 2 sum(kappa) / k  and  Phi(k) >= N pi - 2 k sum(1/kappa)
        hi = 1.01 * kap.sum() / (math.pi * m)
        lo = 0.5 * (N * math.pi - target) / (2.0 * np.sum(1.0 / kap))
        _check_monotone(spec, lo, hi)
        f_lo, f_hi = total_phase(spec, lo) - target, total_phase(spec, hi) - target
        if not (f_lo > 0 > f_hi):
            raise ArithmeticError(f"bracket anomaly for m = {m}: Phi - 2 pi m = {f_lo}, {f_hi}")
        while hi - lo > ROOT_RTOL * hi:
            mid = 0.5 * (lo + hi)
            if total_phase(spec, mid) > target:
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return sorted(k * k for k in roots)


def left_normings(spec: SolitonSpectrum) -> np.ndarray:
    """Norming constants ``c~_j`` of the mirrored potential ``v(-x)``: ``c_j c~_j = P_j``
    where ``P_j = c_j^2`` of the even potential."""
    return centred_normings(spec.kappas) ** 2 / np.asarray(spec.normings)


def _log_det_second_derivative(kap: np.ndarray, c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``-2 (ln det(I + C(x)))''`` for ``x >= 0``.

    Uses ``-2 [2 c.M^-1 K c - (c.M^-1 c)^2]`` with ``M = diag(exp(2 kappa x)) + H``,
    ``H_ml = c_m c_l / (kappa_m + kappa_l)``. The diagonal is at least 1 for
    x >= 0, so the two terms do not cancel catastrophically.
    """
    H = np.outer(c, c) / (kap[:, None] + kap[None, :])
    out = np.zeros(len(x))
    expo = 2.0 * np.outer(x, kap)
    live = expo.min(axis=1) <= 700.0      # beyond this v underflows to 0
    if not live.any():
        return out
    Ms = np.broadcast_to(H, (int(live.sum()),) + H.shape).copy()
    idx = np.arange(len(kap))
    Ms[:, idx, idx] += np.exp(np.minimum(expo[live], 700.0))
    a = np.linalg.solve(Ms, np.broadcast_to(c, (len(Ms), len(c)))[..., None])[..., 0]
    out[live] = -2.0 * (2.0 * a @ (kap * c) - (a @ c) ** 2)
    return out


def nsoliton_potential(spec: SolitonSpectrum, x):
    """``v(x) = -2 (d/dx)^2 ln det(I + C(x))`` with
    ``C_ml = c_m c_l / (kappa_m + kappa_l) exp(-(kappa_m + kappa_l) x)``.

    Negative x is evaluated through the mirrored potential, whose data are the
    same kappas with the left norming constants. Values with ``|v| < 1e-14``
    in the tails are returned as 0.
    """
    kap = np.asarray(spec.kappas)
    x_arr = np.asarray(x, dtype=float)
    flat = x_arr.ravel()
    out = np.empty_like(flat)
    right = flat >= 0
    out[right] = _log_det_second_derivative(kap, np.asarray(spec.normings), flat[right])
    out[~right] = _log_det_second_derivative(kap, left_normings(spec), -flat[~right])
    out[np.abs(out) < TAIL_ZERO] = 0.0
    out = out.reshape(x_arr.shape)
    return float(out) if x_arr.ndim == 0 else out


@dataclass(frozen=True)
class SampledPotential1D:
    grid: np.ndarray
    values: np.ndarray
    cutoff: float = field(default=math.inf)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != vals.shape or len(g) < 5:
            raise DomainError("grid and values must be matching 1-d arrays of length >= 5")
        h = np.diff(g)
        if not np.allclose(h, h[0], rtol=1e-9, atol=0) or h[0] <= 0:
            raise DomainError("grid must be uniform and increasing")
        if max(abs(vals[:2]).max(), abs(vals[-2:]).max()) >= END_TOL:
            raise DomainError("potential must vanish (|v| < 1e-12) at both grid ends")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", vals)

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])


def sample_soliton(spec: SolitonSpectrum, h: float = 0.005, pad: float = 1.0) -> SampledPotential1D:
    """Sample the N-soliton potential on a grid wide enough for ``|v| < 1e-13`` at the ends."""
    L = 4.0 / min(spec.kappas)
    while abs(nsoliton_potential(spec, -L)) >= 1e-13 or abs(nsoliton_potential(spec, L)) >= 1e-13:
        L *= 1.25
    L += pad
    n = int(math.ceil(L / h))
    grid = h * np.arange(-n, n + 1)
    vals = nsoliton_potential(spec, grid)
    nz = np.flatnonzero(vals)
    cutoff = float(max(abs(grid[nz[0]]), abs(grid[nz[-1]]))) if nz.size else 0.0
    return SampledPotential1D(grid, vals, cutoff)


def sample_square_well(depth: float, a: float, b: float, h: float, margin: int = 4) -> SampledPotential1D:
    """``v = -depth`` on ``[a, b]`` on a grid with nodes at ``a`` and ``b``.

    Nodes on the jumps take the mean of the two sides, which keeps the
    Numerov scheme second-order accurate across the discontinuities.
    """
    n_in = int(round((b - a) / h))
    if n_in < 1 or abs(n_in * h - (b - a)) > 1e-9 * (b - a):
        raise DomainError("well width must be an integer multiple of h")
    idx = np.arange(-margin, n_in + margin + 1)
    grid = a + h * idx
    vals = np.where((idx > 0) & (idx < n_in), -depth, 0.0)
    vals[(idx == 0) | (idx == n_in)] = -0.5 * depth
    return SampledPotential1D(grid, vals, max(abs(a), abs(b)))


def numerov_wavenumber(k, h: float):
    """Wave number of the exact plane-wave solutions of the free Numerov recurrence."""
    a = (np.asarray(k) * h) ** 2 / 12.0
    return np.arccos((1.0 - 5.0 * a) / (1.0 + a)) / h


def scatter1d_numeric(v: SampledPotential1D, k):
    """Transmission and reflection of ``-psi'' + v psi = k^2 psi`` by Numerov.

    Starts from the transmitted wave on the right and integrates leftwards,
    then splits the solution on the left into incident and reflected parts
    using two adjacent nodes. Matching uses the exact discrete plane waves of
    the free recurrence, so ``v = 0`` gives ``T = 1, R = 0`` to round-off.
    Vectorised over ``k``.
    """
    k_arr = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(~(k_arr > 0)):
        raise DomainError("k must be positive")
    h = v.step
    if h > 2.0 * math.pi / (MIN_POINTS_PER_WAVELENGTH * k_arr.max()):
        raise PreconditionError(
            f"grid step {h:g} under-resolves k = {k_arr.max():g}; need at least "
            f"{MIN_POINTS_PER_WAVELENGTH} points per wavelength"
        )
    x = v.grid
    kt = numerov_wavenumber(k_arr, h)
    g = v.values[:, None] - k_arr[None, :] ** 2
    f = 1.0 - h * h * g / 12.0
    mid = 2.0 * (1.0 + 5.0 * h * h * g / 12.0)
    n = len(x)
    psi_next = np.exp(1j * kt * x[-1])
    psi_cur = np.exp(1j * kt * x[-2])
    for i in range(n - 2, 0, -1):
        psi_prev = (mid[i] * psi_cur - f[i + 1] * psi_next) / f[i - 1]
        psi_next, psi_cur = psi_cur, psi_prev
    # psi_cur = psi(x0), psi_next = psi(x1)
    e0p, e0m = np.exp(1j * kt * x[0]), np.exp(-1j * kt * x[0])
    e1p, e1m = np.exp(1j * kt * x[1]), np.exp(-1j * kt * x[1])
    det = e0p * e1m - e0m * e1p
    A = (psi_cur * e1m - psi_next * e0m) / det
    B = (e0p * psi_next - e1p * psi_cur) / det
    T, R = 1.0 / A, B / A
    if np.ndim(k) == 0:
        return complex(T[0]), complex(R[0])
    return T, R


def point_transmission(alpha: float, k: float) -> complex:
    """Transmission of a single 1D point scatterer at the origin, from the charge solve."""
    pot = MultipointPotential.from_arrays([[0.0]], [alpha])
    q = solve_charges(pot, [k]).q[0]
    return 1.0 + q * green_farfield_coeff(1, k)


def delta_coupling(alpha: float) -> float:
    """Coefficient ``c`` with ``v = c delta(x)`` equivalent to the point scatterer.

    ``-alpha [psi'(0+) - psi'(0-)] = psi(0)`` is the jump condition of
    ``c delta`` with ``c = -1/alpha``.
    """
    if alpha == 0:
        raise DomainError("alpha must be non-zero")
    return -1.0 / alpha


def delta_limit_error(alpha: float, N: int, k: float = 1.0, points_inside: int = 400) -> float:
    """``|T(v_N) - T_point|`` for the well ``v_N = -(N/(2 alpha)) 1_{[-1/N, 1/N]}``,
    whose integral is the point coupling ``-1/alpha``."""
    if alpha == 0:
        raise DomainError("alpha must be non-zero")
    if N < 10:
        raise DomainError("N must be at least 10")
    half = 1.0 / N
    depth = -delta_coupling(alpha) * N / 2.0
    well = sample_square_well(depth, -half, half, 2.0 * half / points_inside)
    t_num, _ = scatter1d_numeric(well, k)
    return abs(t_num - point_transmission(alpha, k))
