"""Scattering solution, amplitudes ``f`` and ``f+``, and far-field extraction."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .greens import green_farfield_coeff, green_plus
from .multipoint import MultipointPotential, solve_charges, solve_charges_many

ON_SHELL_RTOL = 1e-12


@dataclass(frozen=True)
class AmplitudeSample:
    k: np.ndarray
    l: np.ndarray
    f: complex
    fplus: complex


def normalisation(d: int, kappa: float) -> complex:
    """``c(d, kappa) = -pi i (-2 pi i)^((d-1)/2) kappa^((d-3)/2)``, with
    ``sqrt(-2 pi i) = sqrt(2 pi) exp(-i pi/4)``."""
    if d not in (1, 2, 3):
        raise DomainError(f"dimension must be 1, 2 or 3, got {d!r}")
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    root = math.sqrt(2.0 * math.pi) * cmath.exp(-0.25j * math.pi)
    return -math.pi * 1j * root ** (d - 1) * kappa ** ((d - 3) / 2.0)


def _vec(pot: MultipointPotential, k) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (pot.d,):
        raise DomainError(f"vector must have {pot.d} components")
    return k


def _check_on_shell(k: np.ndarray, l: np.ndarray) -> float:
    kappa = float(np.linalg.norm(k))
    if not kappa > 0:
        raise DomainError("|k| must be positive")
    if abs(np.linalg.norm(l) - kappa) > ON_SHELL_RTOL * kappa:
        raise DomainError(f"off-shell pair: |k| = {kappa!r}, |l| = {np.linalg.norm(l)!r}")
    return kappa


def scattered_wave(pot: MultipointPotential, k, x, q: np.ndarray | None = None):
    """``sum_j q_j G(x - y_j)`` at points ``x`` of shape ``(d,)`` or ``(N, d)``."""
    k = _vec(pot, k)
    kappa = float(np.linalg.norm(k))
    if q is None:
        q = solve_charges(pot, k).q
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, pot.d)
    if pot.n == 0:
        out = np.zeros(len(pts), dtype=complex)
    else:
        r = np.sqrt(((pts[:, None, :] - pot.positions[None, :, :]) ** 2).sum(axis=-1))
        if np.any(r == 0):
            raise DomainError("psi_plus is singular at a scatterer position")
        out = green_plus(pot.d, r, kappa**2) @ q
    return complex(out[0]) if single else out


def psi_plus(pot: MultipointPotential, k, x, q: np.ndarray | None = None):
    """Scattering solution ``exp(i k.x) + sum_j q_j(k) G(x - y_j)``."""
    k = _vec(pot, k)
    pts = np.asarray(x, dtype=float)
    incident = np.exp(1j * (pts.reshape(-1, pot.d) @ k))
    scat = scattered_wave(pot, k, pts, q)
    if pts.ndim == 1:
        return complex(incident[0]) + scat
    return incident + scat


def amplitude_f(pot: MultipointPotential, k, l) -> complex:
    """``f(k, l) = (2 pi)^-d sum_j q_j(k) exp(-i l.y_j)``."""
    k, l = _vec(pot, k), _vec(pot, l)
    _check_on_shell(k, l)
    if pot.n == 0:
        return 0j
    q = solve_charges(pot, k).q
    return complex(np.sum(q * np.exp(-1j * (pot.positions @ l))) / (2.0 * math.pi) ** pot.d)


def amplitude_matrix(pot: MultipointPotential, kappa: float, k_dirs, l_dirs) -> np.ndarray:
    """``F[a, b] = f(kappa k_dirs[a], kappa l_dirs[b])`` for unit direction arrays."""
    k_dirs = np.asarray(k_dirs, dtype=float).reshape(-1, pot.d)
    l_dirs = np.asarray(l_dirs, dtype=float).reshape(-1, pot.d)
    if pot.n == 0:
        return np.zeros((len(k_dirs), len(l_dirs)), dtype=complex)
    Q = solve_charges_many(pot, kappa * k_dirs)                        # (n, Nk)
    phase = np.exp(-1j * kappa * (l_dirs @ pot.positions.T))           # (Nl, n)
    return (Q.T @ phase.T) / (2.0 * math.pi) ** pot.d


def amplitude_fplus(pot: MultipointPotential, k, l) -> AmplitudeSample:
    k, l = _vec(pot, k), _vec(pot, l)
    f = amplitude_f(pot, k, l)
    return AmplitudeSample(k, l, f, normalisation(pot.d, float(np.linalg.norm(k))) * f)


def farfield_extract(pot: MultipointPotential, k, theta, R: float) -> complex:
    """``(psi(R theta) - exp(i k.R theta)) R^((d-1)/2) exp(-i kappa R)``.

    Tends to ``f+(k, kappa theta)`` with an O(1/R) error.
    """
    k, theta = _vec(pot, k), _vec(pot, theta)
    kappa = float(np.linalg.norm(k))
    if abs(np.linalg.norm(theta) - 1.0) > 1e-12:
        raise DomainError("theta must be a unit vector")
    reach = float(np.max(np.linalg.norm(pot.positions, axis=1))) if pot.n else 0.0
    if R < 100.0 * reach or R < 100.0 / kappa:
        raise PreconditionError(
            f"R = {R:g} too small: need R >= 100 max|y_j| = {100 * reach:g} and R >= 100/kappa = {100 / kappa:g}"
        )
    scat = scattered_wave(pot, k, R * theta)
    return scat * R ** ((pot.d - 1) / 2.0) * cmath.exp(-1j * kappa * R)


def richardson_constant(pot: MultipointPotential, k, theta, R: float) -> tuple[complex, float]:
    """Extrapolated ``f+`` and the constant ``C`` in ``|error| <= C / R`` from radii R, 2R."""
    e1 = farfield_extract(pot, k, theta, R)
    e2 = farfield_extract(pot, k, theta, 2.0 * R)
    limit = 2.0 * e2 - e1
    return limit, abs(e1 - limit) * R


def born_amplitude(pot: MultipointPotential, k, l) -> complex:
    """Leading weak-coupling term: ``-(2 pi)^-d sum_j exp(i (k-l).y_j) / alpha_j``."""
    k, l = _vec(pot, k), _vec(pot, l)
    return complex(-np.sum(np.exp(1j * (pot.positions @ (k - l))) / pot.alphas) / (2.0 * math.pi) ** pot.d)


def farfield_coeff_check(d: int, kappa: float) -> complex:
    """``a_d(kappa) (2 pi)^d / c(d, kappa)``; equals 1 when conventions agree."""
    return green_farfield_coeff(d, kappa) * (2.0 * math.pi) ** d / normalisation(d, kappa)
