"""Multipoint zero-range potentials and their charge system ``A(|k|) q = b(k)``.

The scattering solution is ``psi(x) = exp(i k.x) + sum_m q_m G(x - y_m)``.
Near each ``y_j`` only the ``j``-th Green term is singular, so the
coefficients of the local expansion of ``psi`` are read off from
:func:`green_local_expansion`; the point condition at ``y_j`` then becomes
row ``j`` of the linear system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResonanceError
from .greens import DIMENSIONS, green_local_expansion, green_plus
from .specfun import EULER_GAMMA

MAX_SCATTERERS = 64
MIN_SEPARATION = 1e-6
RESONANCE_COND = 1e12
SOLVE_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class PointScatterer:
    y: tuple[float, ...]
    alpha: complex | float

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(float(c) for c in np.atleast_1d(self.y)))
        if not np.isfinite(self.alpha):
            raise DomainError("alpha must be finite; omit the scatterer for alpha = inf")


@dataclass(frozen=True)
class MultipointPotential:
    """``v(x) = sum_j delta_{alpha_j}(x - y_j)`` in dimension ``d``.

    Real ``alpha`` only, unless ``experimental`` is set (complex alpha gives a
    non-self-adjoint model; unitarity no longer holds).
    """

    d: int
    scatterers: tuple[PointScatterer, ...] = ()
    experimental: bool = False
    max_scatterers: int = MAX_SCATTERERS
    min_separation: float = field(init=False, default=math.inf)

    def __post_init__(self):
        if self.d not in DIMENSIONS:
            raise DomainError(f"dimension must be 1, 2 or 3, got {self.d!r}")
        scs = tuple(self.scatterers)
        object.__setattr__(self, "scatterers", scs)
        if len(scs) > self.max_scatterers:
            raise DomainError(f"at most {self.max_scatterers} scatterers allowed, got {len(scs)}")
        for s in scs:
            if len(s.y) != self.d:
                raise DomainError(f"position {s.y} does not have {self.d} components")
            if not self.experimental and np.iscomplexobj(s.alpha) and s.alpha.imag != 0:
                raise DomainError("complex alpha requires experimental=True")
        if len(scs) > 1:
            dist = _pairwise_distances(np.array([s.y for s in scs]))
            sep = float(dist[np.triu_indices(len(scs), 1)].min())
            if sep <= MIN_SEPARATION:
                raise DomainError(f"scatterers closer than {MIN_SEPARATION} (min distance {sep:g})")
            object.__setattr__(self, "min_separation", sep)

    @classmethod
    def from_arrays(cls, positions, alphas, **kwargs) -> "MultipointPotential":
        positions = np.asarray(positions, dtype=float)
        if positions.ndim == 1:
            positions = positions[:, None]
        alphas = np.broadcast_to(np.asarray(alphas), (len(positions),))
        d = kwargs.pop("d", positions.shape[1] if len(positions) else None)
        scs = tuple(PointScatterer(tuple(p), a.item()) for p, a in zip(positions, alphas))
        return cls(d, scs, **kwargs)

    @property
    def n(self) -> int:
        return len(self.scatterers)

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.y for s in self.scatterers], dtype=float).reshape(self.n, self.d)

    @property
    def alphas(self) -> np.ndarray:
        dtype = complex if self.experimental else float
        return np.array([s.alpha for s in self.scatterers], dtype=dtype)

    def translated(self, shift) -> "MultipointPotential":
        shift = np.asarray(shift, dtype=float)
        return MultipointPotential.from_arrays(
            self.positions + shift, self.alphas, d=self.d, experimental=self.experimental
        )


@dataclass(frozen=True)
class ChargeSolution:
    q: np.ndarray
    kappa: float
    k: np.ndarray
    cond: float
    residual: float


def _pairwise_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def _wave_vector(pot: MultipointPotential, k) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (pot.d,):
        raise DomainError(f"wave vector must have {pot.d} components")
    if not np.linalg.norm(k) > 0:
        raise DomainError("|k| must be positive")
    return k


def diagonal_entry(d: int, alpha, kappa: float) -> complex:
    """Closed-form ``A_jj``."""
    if d == 3:
        return alpha - 1j * kappa / (4.0 * math.pi)
    if d == 2:
        return alpha - (math.pi * 1j - 2.0 * math.log(kappa)) / (4.0 * math.pi)
    return alpha + 1.0 / (2j * kappa)


def assemble_matrix(pot: MultipointPotential, kappa: float) -> np.ndarray:
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    n = pot.n
    A = np.zeros((n, n), dtype=complex)
    if n == 0:
        return A
    iu = np.triu_indices(n, 1)
    if n > 1:
        r = _pairwise_distances(pot.positions)[iu]
        g = green_plus(pot.d, r, kappa**2)
        A[iu] = g
        A[(iu[1], iu[0])] = g
    A[np.diag_indices(n)] = [diagonal_entry(pot.d, a, kappa) for a in pot.alphas]
    return A


def assemble_rhs(pot: MultipointPotential, k) -> np.ndarray:
    k = _wave_vector(pot, k)
    return -np.exp(1j * (pot.positions @ k))


def solve_charges(pot: MultipointPotential, k) -> ChargeSolution:
    k = _wave_vector(pot, k)
    kappa = float(np.linalg.norm(k))
    A = assemble_matrix(pot, kappa)
    b = assemble_rhs(pot, k)
    if pot.n == 0:
        return ChargeSolution(np.zeros(0, complex), kappa, k, 1.0, 0.0)
    cond = float(np.real(np.linalg.cond(A, 1)))
    if not cond <= RESONANCE_COND:
        raise ResonanceError(
            f"resonant configuration: cond(A) = {cond:.3g} at |k| = {kappa:g}", cond
        )
    q = np.linalg.solve(A, b)
    residual = float(np.max(np.abs(A @ q - b)))
    if residual > SOLVE_RESIDUAL_TOL * (1.0 + np.max(np.abs(b))):
        raise ResonanceError(f"solve residual {residual:.3g} exceeds tolerance", cond)
    return ChargeSolution(q, kappa, k, cond, residual)


def solve_charges_many(pot: MultipointPotential, ks: np.ndarray) -> np.ndarray:
    """Charges for many wave vectors of common modulus; returns ``(n, len(ks))``.

    A depends on ``|k|`` only, so one factorisation serves every direction.
    """
    ks = np.asarray(ks, dtype=float).reshape(-1, pot.d)
    kappas = np.linalg.norm(ks, axis=1)
    kappa = float(kappas[0])
    if not np.allclose(kappas, kappa, rtol=1e-12, atol=0):
        raise DomainError("all wave vectors must share the same modulus")
    if pot.n == 0:
        return np.zeros((0, len(ks)), dtype=complex)
    A = assemble_matrix(pot, kappa)
    cond = float(np.real(np.linalg.cond(A, 1)))
    if not cond <= RESONANCE_COND:
        raise ResonanceError(
            f"resonant configuration: cond(A) = {cond:.3g} at |k| = {kappa:g}", cond
        )
    B = -np.exp(1j * (pot.positions @ ks.T))
    return np.linalg.solve(A, B)


def local_expansion(pot: MultipointPotential, k, sol: ChargeSolution, j: int) -> tuple[complex, complex]:
    """Expansion coefficients of ``psi`` at ``y_j``.

    d=2, 3: ``(psi_{j,-1}, psi_{j,0})``; d=1: ``(jump of psi', psi(y_j))``.
    """
    if not 0 <= j < pot.n:
        raise IndexError(f"scatterer index {j} out of range for n = {pot.n}")
    k = _wave_vector(pot, k)
    kappa = float(np.linalg.norm(k))
    loc = green_local_expansion(pot.d, kappa**2)
    y = pot.positions
    q = sol.q
    regular = np.exp(1j * (y[j] @ k)) + q[j] * loc.regular_coeff
    others = [m for m in range(pot.n) if m != j]
    if others:
        r = np.sqrt(((y[others] - y[j]) ** 2).sum(axis=1))
        regular += np.sum(q[others] * green_plus(pot.d, r, kappa**2))
    return q[j] * loc.singular_coeff, regular


def point_condition_residual(d: int, alpha, singular: complex, regular: complex) -> complex:
    """Left minus right side of the point condition at one scatterer."""
    if d == 3:
        return 4.0 * math.pi * alpha * singular - regular
    if d == 2:
        return (-2.0 * math.pi * alpha - math.log(2.0) + EULER_GAMMA) * singular - regular
    return -alpha * singular - regular


def boundary_residual(pot: MultipointPotential, k, sol: ChargeSolution) -> float:
    res = 0.0
    for j, a in enumerate(pot.alphas):
        s, r = local_expansion(pot, k, sol, j)
        res = max(res, abs(point_condition_residual(pot.d, a, s, r)))
    return res
