"""Discretised fixed-energy scattering operator on the unit sphere.

On quadrature nodes ``theta_i`` with weights ``w_i``,

    S_ij = delta_ij - i pi kappa^(d-2) w_j f(kappa theta_j, kappa theta_i)

and the returned matrix is ``W S W^-1`` with ``W = diag(sqrt(w))``, which acts
on the discrete L2 inner product as the plain Euclidean one. Since
``f(k, l) = (2 pi)^-d sum_m q_m(k) exp(-i l.y_m)``, ``S - 1`` factors through
an ``n``-dimensional space: its rank is at most the number of scatterers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import jacobi_svd, null_space, numerical_rank
from .multipoint import MultipointPotential, solve_charges_many

RANK_THRESHOLD = 1e-8
KERNEL_RANK_THRESHOLD = 1e-10


@dataclass(frozen=True)
class SphereQuadrature:
    d: int
    nodes: np.ndarray     # (M, d) unit vectors
    weights: np.ndarray   # (M,)

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * np.asarray(values)))


@dataclass(frozen=True)
class SingularSpectrumReport:
    sigma: np.ndarray
    rank_estimate: int
    threshold: float
    n_scatterers: int

    @property
    def rank_ok(self) -> bool:
        return self.rank_estimate <= self.n_scatterers

    def ratio(self, i: int) -> float:
        """``sigma_i / sigma_1`` with 0-based ``i``; 0 when out of range or sigma_1 = 0."""
        if i >= len(self.sigma) or self.sigma[0] == 0:
            return 0.0
        return float(self.sigma[i] / self.sigma[0])


def build_quadrature(d: int, M: int = 0, *, m_polar: int | None = None) -> SphereQuadrature:
    """Quadrature on S^(d-1).

    d=1: nodes +-1 with unit weights (``M`` ignored).
    d=2: ``M >= 8`` equispaced angles, weights ``2 pi / M``.
    d=3: Gauss-Legendre in cos(polar) times uniform azimuth,
         ``M = m_polar * m_azimuth``; by default ``m_azimuth = 2 m_polar``.
    """
    if d == 1:
        return SphereQuadrature(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]))
    if d == 2:
        if M < 8:
            raise DomainError(f"circle quadrature needs M >= 8, got {M}")
        phi = 2.0 * math.pi * np.arange(M) / M
        return SphereQuadrature(2, np.column_stack([np.cos(phi), np.sin(phi)]), np.full(M, 2.0 * math.pi / M))
    if d != 3:
        raise DomainError(f"dimension must be 1, 2 or 3, got {d!r}")
    if m_polar is None:
        m_polar = int(round(math.sqrt(M / 2.0)))
    if m_polar < 2 or M % m_polar:
        raise DomainError(f"M = {M} is not m_polar * m_azimuth with m_polar = {m_polar}")
    m_azim = M // m_polar
    if m_azim < 4:
        raise DomainError("sphere quadrature needs at least 4 azimuthal nodes")
    x, wx = np.polynomial.legendre.leggauss(m_polar)
    phi = 2.0 * math.pi * np.arange(m_azim) / m_azim
    ct, ph = np.meshgrid(x, phi, indexing="ij")
    st = np.sqrt(1.0 - ct**2)
    nodes = np.column_stack([(st * np.cos(ph)).ravel(), (st * np.sin(ph)).ravel(), ct.ravel()])
    weights = np.repeat(wx, m_azim) * (2.0 * math.pi / m_azim)
    return SphereQuadrature(3, nodes, weights)


def _kappa(E: float) -> float:
    if not E > 0:
        raise DomainError(f"energy must be positive, got {E!r}")
    return math.sqrt(E)


def charge_matrix(pot: MultipointPotential, E: float, quad: SphereQuadrature) -> np.ndarray:
    """``q_j(kappa theta_i)`` as an ``(n, M)`` array."""
    return solve_charges_many(pot, _kappa(E) * quad.nodes)


def build_soperator(pot: MultipointPotential, E: float, quad: SphereQuadrature) -> np.ndarray:
    if quad.d != pot.d:
        raise DomainError("quadrature and potential dimensions differ")
    kappa = _kappa(E)
    M = quad.size
    S = np.eye(M, dtype=complex)
    if pot.n == 0:
        return S
    Q = charge_matrix(pot, E, quad)                                       # q_m(kappa theta_j)
    phase = np.exp(-1j * kappa * (quad.nodes @ pot.positions.T))          # exp(-i kappa theta_i.y_m)
    f = (phase @ Q) / (2.0 * math.pi) ** pot.d                            # f[i, j] = f(kappa theta_j, kappa theta_i)
    sw = np.sqrt(quad.weights)
    S -= 1j * math.pi * kappa ** (pot.d - 2) * (sw[:, None] * f * sw[None, :])
    return S


def singular_spectrum(S: np.ndarray, n_scatterers: int, threshold: float = RANK_THRESHOLD) -> SingularSpectrumReport:
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DomainError("scattering matrix must be square")
    sigma = jacobi_svd(S - np.eye(len(S))).s
    return SingularSpectrumReport(sigma, numerical_rank(sigma, threshold), threshold, n_scatterers)


@dataclass(frozen=True)
class KernelBasis:
    basis: np.ndarray      # (M, dim) orthonormal columns
    residual: float
    charge_rank: int

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]


def kernel_basis(pot: MultipointPotential, E: float, quad: SphereQuadrature,
                 rel_threshold: float = KERNEL_RANK_THRESHOLD) -> KernelBasis:
    """Orthonormal basis of ``{u : sum_i w_i q_j(kappa theta_i) u_i = 0 for all j}``
    in the symmetrised coordinates ``sqrt(w) u``; each such vector is annihilated
    by ``S - 1``."""
    M = quad.size
    if pot.n == 0:
        return KernelBasis(np.eye(M, dtype=complex), 0.0, 0)
    sw = np.sqrt(quad.weights)
    B = charge_matrix(pot, E, quad) * sw[None, :]
    basis, rank = null_space(B, rel_threshold)
    D = build_soperator(pot, E, quad) - np.eye(M)
    if basis.shape[1]:
        residual = float(np.max(np.linalg.norm(D @ basis, axis=0) / np.linalg.norm(basis, axis=0)))
    else:
        residual = 0.0
    return KernelBasis(basis, residual, rank)


def unitarity_defect(S: np.ndarray) -> float:
    """Spectral norm of ``S^* S - 1``."""
    S = np.asarray(S)
    s = jacobi_svd(S.conj().T @ S - np.eye(len(S))).s
    return float(s[0]) if len(s) else 0.0
