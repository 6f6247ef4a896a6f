"""Real-argument Bessel functions J0, Y0 and the outgoing Hankel function H0^(1).

Two branches:

* ``x <= SWITCH_X``: Miller backward recurrence for J_0, J_2, J_4, ...,
  normalised with ``J0 + 2 * sum J_2k = 1``; Y0 from the Neumann series
  ``Y0 = (2/pi) (ln(x/2) + gamma) J0 - (4/pi) sum (-1)^k J_2k / k``.
* ``x > SWITCH_X``: Hankel asymptotic expansion, summed until the terms drop
  below double precision (they do long before they start to diverge once
  ``x > 20``).

Both branches hold ~1e-14 absolute accuracy on their ranges; the target is
1e-10 on (0, 50].
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329

SWITCH_X = 25.0

_RESCALE_ABOVE = 1e200


def _start_order(xmax: float) -> int:
    m = int(xmax + 20.0 + 6.0 * math.sqrt(max(xmax, 1.0)))
    return m + (m % 2)


def _miller(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """J0 and Y0 by backward recurrence; ``x`` is a positive 1-d array."""
    m = _start_order(float(x.max()))
    j_next = np.zeros_like(x)          # J_{k+1}
    j_cur = np.full_like(x, 1e-30)     # J_k, arbitrary seed at k = m
    norm = np.zeros_like(x)            # sum over even k>0 of 2 J_k, plus J_0 at the end
    neum = np.zeros_like(x)            # sum over k>=1 of (-1)^k J_2k / k
    for k in range(m, 0, -1):
        if k % 2 == 0:
            norm += 2.0 * j_cur
            half = k // 2
            neum += (-1.0) ** half * j_cur / half
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _RESCALE_ABOVE
        if big.any():
            s = np.where(big, 1.0 / _RESCALE_ABOVE, 1.0)
            j_cur *= s
            j_next *= s
            norm *= s
            neum *= s
    norm += j_cur
    j0 = j_cur / norm
    y0 = (2.0 / math.pi) * (np.log(x / 2.0) + EULER_GAMMA) * j0 - (4.0 / math.pi) * neum / norm
    return j0, y0


def _hankel_asymptotic(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """J0 and Y0 from the large-argument expansion, x > ~20."""
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    k = 0
    while True:
        k += 1
        # a_k / a_{k-1} = (2k-1)^2 / (8k)
        term = term * ((2 * k - 1) ** 2 / (8.0 * k)) / x
        if k % 2 == 1:
            q += (-1.0) ** ((k + 1) // 2) * term
        else:
            p += (-1.0) ** (k // 2) * term
        if np.max(np.abs(term)) < 1e-17 or k > 60:
            break
    amp = np.sqrt(2.0 / (math.pi * x))
    # cos(x - pi/4), sin(x - pi/4) without forming x - pi/4
    c, s = np.cos(x), np.sin(x)
    cchi = (c + s) / math.sqrt(2.0)
    schi = (s - c) / math.sqrt(2.0)
    j0 = amp * (p * cchi - q * schi)
    y0 = amp * (p * schi + q * cchi)
    return j0, y0


def _j0_y0_array(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    j0 = np.empty_like(x)
    y0 = np.empty_like(x)
    small = x <= SWITCH_X
    if small.any():
        j0[small], y0[small] = _miller(x[small])
    if (~small).any():
        j0[~small], y0[~small] = _hankel_asymptotic(x[~small])
    return j0, y0


def bessel_j0_y0(x):
    """Return ``(J0(x), Y0(x))`` for real ``x > 0`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("bessel_j0_y0 requires finite x > 0")
    flat = arr.reshape(-1)
    j0, y0 = _j0_y0_array(flat)
    if arr.ndim == 0:
        return float(j0[0]), float(y0[0])
    return j0.reshape(arr.shape), y0.reshape(arr.shape)


def bessel_j0(x):
    """J0 alone; also defined at ``x = 0``. Negative x uses evenness."""
    arr = np.abs(np.asarray(x, dtype=float))
    out = np.ones_like(arr)
    pos = arr > 0
    if pos.any():
        out[pos] = _j0_y0_array(arr[pos].reshape(-1))[0].reshape(arr[pos].shape)
    return float(out) if out.ndim == 0 else out


def hankel1_0(x):
    """Outgoing Hankel function ``H0^(1)(x) = J0(x) + i Y0(x)``, x > 0."""
    j0, y0 = bessel_j0_y0(x)
    if np.ndim(j0) == 0:
        return complex(j0, y0)
    return j0 + 1j * y0
