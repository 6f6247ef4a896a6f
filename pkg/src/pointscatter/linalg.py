"""One-sided Jacobi SVD for small dense complex matrices.

Columns are orthogonalised pairwise by complex plane rotations (Hestenes),
cyclic-by-row ordering, until every pair is orthogonal to working precision.
Jacobi computes small singular values to high relative accuracy, which is what
numerical-rank decisions rely on. Values below ``eps * ||a||_F`` are resolved
to that absolute level only. The pair loop is compiled with numba.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConvergenceError

MAX_SWEEPS = 60


@dataclass(frozen=True)
class SVDResult:
    u: np.ndarray | None     # (m, min(m, n)) left vectors, None unless requested
    s: np.ndarray            # descending singular values, length min(m, n)
    vh: np.ndarray           # (n, n) conjugate-transposed right vectors
    sweeps: int


@numba.njit(cache=True)
def _hestenes(w, v, tol, floor, max_sweeps):
    """Orthogonalise the rows of ``w`` in place, mirroring rotations on ``v``.

    Returns the number of sweeps used, or -1 if the cap was hit.
    """
    n, m = w.shape
    nv = v.shape[1]
    nrm = np.empty(n)
    for sweep in range(1, max_sweeps + 1):
        for i in range(n):
            acc = 0.0
            for k in range(m):
                acc += w[i, k].real ** 2 + w[i, k].imag ** 2
            nrm[i] = acc
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gamma = 0j
                for k in range(m):
                    gamma += w[p, k].conjugate() * w[q, k]
                g = abs(gamma)
                if g <= floor or g <= tol * np.sqrt(nrm[p] * nrm[q]):
                    continue
                rotated = True
                zeta = (nrm[q] - nrm[p]) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                # rotate (w_p, conj(phase) w_q), whose inner product is real
                cphase = gamma.conjugate() / g
                for k in range(m):
                    wp = w[p, k]
                    wq = cphase * w[q, k]
                    w[p, k] = c * wp - s * wq
                    w[q, k] = s * wp + c * wq
                for k in range(nv):
                    vp = v[p, k]
                    vq = cphase * v[q, k]
                    v[p, k] = c * vp - s * vq
                    v[q, k] = s * vp + c * vq
                nrm[p] = max(nrm[p] - t * g, 0.0)
                nrm[q] = nrm[q] + t * g
        if not rotated:
            return sweep
    return -1


def jacobi_svd(a, *, compute_uv: bool = False, tol: float | None = None,
               max_sweeps: int = MAX_SWEEPS) -> SVDResult:
    """Singular value decomposition ``a = u @ diag(s) @ vh[:len(s)]``.

    ``vh`` is square ``(n, n)``: its trailing rows span the null space of ``a``
    when ``m < n``. Raises :class:`ConvergenceError` after ``max_sweeps``.
    """
    a = np.array(a, dtype=complex, copy=True)
    if a.ndim != 2:
        raise ValueError("jacobi_svd expects a 2-d array")
    m, n = a.shape
    if tol is None:
        tol = np.finfo(float).eps * max(m, 1)
    if n == 0 or m == 0:
        return SVDResult(np.zeros((m, 0), complex), np.zeros(0), np.eye(n, dtype=complex), 0)
    # columns of ``a`` live in rows of ``w``; row i of ``v`` holds the
    # coefficients of rotated column i over the original columns
    w = np.ascontiguousarray(a.T)
    v = np.eye(n, dtype=complex)
    floor = (np.finfo(float).eps * np.linalg.norm(a)) ** 2
    sweeps = _hestenes(w, v, float(tol), float(floor), int(max_sweeps))
    if sweeps < 0:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")

    norms = np.linalg.norm(w, axis=1)
    order = np.argsort(-norms, kind="stable")
    sv = norms[order]
    vh = v[order].conj()
    k = min(m, n)
    u = None
    if compute_uv:
        u = np.zeros((m, k), dtype=complex)
        for i in range(k):
            if sv[i] > 0:
                u[:, i] = w[order[i]] / sv[i]
    return SVDResult(u, sv[:k], vh, sweeps)


def singular_values(a) -> np.ndarray:
    return jacobi_svd(a).s


def numerical_rank(s: np.ndarray, rel_threshold: float) -> int:
    if len(s) == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rel_threshold * s[0]))


def null_space(a, rel_threshold: float = 1e-10) -> tuple[np.ndarray, int]:
    """Orthonormal basis (as columns) of the null space of ``a``, and rank(a)."""
    a = np.asarray(a, dtype=complex)
    res = jacobi_svd(a)
    rank = numerical_rank(res.s, rel_threshold)
    # rows of vh are ordered by descending column norm, so the tail spans the null space
    basis = res.vh[rank:].conj().T
    return basis, rank
