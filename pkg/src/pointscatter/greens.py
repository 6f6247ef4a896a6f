"""Outgoing Green functions of the Helmholtz operator, normalised so that
``(Delta + E) G = delta``, for dimensions 1, 2 and 3.

    d=1:  G(r) = exp(i kappa r) / (2 i kappa)
    d=2:  G(r) = -(i/4) H0^(1)(kappa r)
    d=3:  G(r) = -exp(i kappa r) / (4 pi r)

with ``kappa = sqrt(E)``. All functions take the scalar distance ``r = |x|``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import EULER_GAMMA, hankel1_0

DIMENSIONS = (1, 2, 3)


def _check_dim(d: int) -> None:
    if d not in DIMENSIONS:
        raise DomainError(f"dimension must be 1, 2 or 3, got {d!r}")


def _check_positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")


def green_plus(d: int, r, E: float):
    """Outgoing Green function at distance ``r`` (scalar or array, r > 0)."""
    _check_dim(d)
    _check_positive("E", E)
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr > 0)):
        raise DomainError("green_plus requires r > 0")
    kappa = math.sqrt(E)
    if d == 1:
        out = np.exp(1j * kappa * r_arr) / (2j * kappa)
    elif d == 2:
        out = -0.25j * np.asarray(hankel1_0(kappa * r_arr))
    else:
        out = -np.exp(1j * kappa * r_arr) / (4.0 * math.pi * r_arr)
    return complex(out) if r_arr.ndim == 0 else out


@dataclass(frozen=True)
class GreenLocalExpansion:
    """Behaviour of G near r = 0.

    d=3: G = singular_coeff / r + regular_coeff + O(r)
    d=2: G = singular_coeff * ln r + regular_coeff + O(r^2 ln r)
    d=1: singular_coeff is the jump of dG/dx across 0 (always 1),
         regular_coeff is G(0).
    """

    d: int
    singular_coeff: complex
    regular_coeff: complex


def green_local_expansion(d: int, E: float) -> GreenLocalExpansion:
    _check_dim(d)
    _check_positive("E", E)
    kappa = math.sqrt(E)
    if d == 1:
        return GreenLocalExpansion(1, 1.0 + 0j, 1.0 / (2j * kappa))
    if d == 2:
        regular = -0.25j + (math.log(kappa / 2.0) + EULER_GAMMA) / (2.0 * math.pi)
        return GreenLocalExpansion(2, 1.0 / (2.0 * math.pi) + 0j, regular)
    return GreenLocalExpansion(3, -1.0 / (4.0 * math.pi) + 0j, -1j * kappa / (4.0 * math.pi))


def green_farfield_coeff(d: int, kappa: float) -> complex:
    """``a_d`` in ``G(x - y) ~ a_d exp(i kappa |x|) |x|^{-(d-1)/2} exp(-i kappa xhat.y)``."""
    _check_dim(d)
    _check_positive("kappa", kappa)
    if d == 1:
        return 1.0 / (2j * kappa)
    if d == 2:
        return -0.25j * math.sqrt(2.0 / (math.pi * kappa)) * cmath.exp(-0.25j * math.pi)
    return -1.0 / (4.0 * math.pi) + 0j


def helmholtz_residual(d: int, x, E: float, h: float) -> float:
    """``|(Delta_h + E) G(|x|)|`` with the centred 3-point stencil per axis."""
    _check_dim(d)
    _check_positive("h", h)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise DomainError(f"point must have {d} components")
    if np.linalg.norm(x) <= 10.0 * h:
        raise DomainError("|x| must exceed 10 h")

    def g(p):
        return green_plus(d, float(np.linalg.norm(p)), E)

    centre = g(x)
    lap = 0.0 + 0j
    for axis in range(d):
        step = np.zeros(d)
        step[axis] = h
        lap += (g(x + step) - 2.0 * centre + g(x - step)) / h**2
    return abs(lap + E * centre)
