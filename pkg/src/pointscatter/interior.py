"""Interior transmission witnesses for multipoint potentials, and the
eigenvalue-multiplicity bound on the Dirichlet square.

A superposition of plane waves of common energy that vanishes at every
scatterer is smooth, so its singular coefficient at each point is zero and
the point condition reduces to ``psi(y_j) = 0``. Such a function solves both
the free and the perturbed equation in any domain containing the points, and
trivially shares Cauchy data with itself: this is the regular-and-vanishing
witness construction. It works for every complex energy ``E != 0``, and the
space of witnesses has dimension ``>= M - n`` for ``M`` directions.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .linalg import null_space
from .multipoint import MultipointPotential, point_condition_residual

NULL_THRESHOLD = 1e-10


@dataclass(frozen=True)
class PlaneWaveFamily:
    E: complex
    directions: np.ndarray     # (M, d) real unit vectors
    root: complex              # principal sqrt(E)
    coefficients: np.ndarray   # (M, dim): one superposition per column
    points: np.ndarray         # (n, d) points the family vanishes at
    rank: int

    @property
    def wave_vectors(self) -> np.ndarray:
        return self.root * self.directions

    @property
    def dimension(self) -> int:
        return self.coefficients.shape[1]

    def evaluate(self, x) -> np.ndarray:
        """Values of every basis superposition at points ``x`` -> ``(N, dim)``."""
        x = np.asarray(x, dtype=float).reshape(-1, self.directions.shape[1])
        return np.exp(1j * self.root * (x @ self.directions.T)) @ self.coefficients

    def gradient(self, x) -> np.ndarray:
        """Gradients -> ``(N, d, dim)``."""
        x = np.asarray(x, dtype=float).reshape(-1, self.directions.shape[1])
        waves = np.exp(1j * self.root * (x @ self.directions.T))              # (N, M)
        return np.einsum("nm,md,mk->ndk", waves, 1j * self.root * self.directions, self.coefficients)


def directions(d: int, M: int) -> np.ndarray:
    """``M`` unit vectors: equispaced on the circle, or a Fibonacci lattice on the sphere."""
    if d == 2:
        phi = 2.0 * math.pi * np.arange(M) / M
        return np.column_stack([np.cos(phi), np.sin(phi)])
    if d == 3:
        i = np.arange(M) + 0.5
        z = 1.0 - 2.0 * i / M
        phi = math.pi * (1.0 + math.sqrt(5.0)) * i
        r = np.sqrt(1.0 - z**2)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise DomainError("plane-wave witnesses are built for d = 2 or 3")


def vanishing_herglotz_basis(points, E: complex, M: int) -> PlaneWaveFamily:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = pts.shape
    if E == 0:
        raise DomainError("energy must be non-zero")
    if M <= n:
        raise PreconditionError(f"need more directions than points (M = {M}, n = {n})")
    if n > 1:
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(-1))[np.triu_indices(n, 1)]
        if dist.min() <= 0:
            raise DomainError("points must be distinct")
    theta = directions(d, M)
    root = cmath.sqrt(complex(E))
    V = np.exp(1j * root * (pts @ theta.T))                                  # (n, M)
    basis, rank = null_space(V, NULL_THRESHOLD)
    return PlaneWaveFamily(complex(E), theta, root, basis, pts, rank)


def enclosing_ball(points, margin: float = 0.1) -> float:
    """Radius of the origin-centred domain: the unit ball, enlarged if needed
    to contain every point with the given margin."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return max(1.0, float(np.max(np.linalg.norm(pts, axis=1))) + margin)


def sphere_samples(d: int, count: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Points on the boundary sphere and their outward unit normals."""
    normals = directions(d, count)
    return radius * normals, normals


def interior_samples(points, radius: float, count: int, rng: np.random.Generator, keep_away: float = 0.05) -> np.ndarray:
    """Uniform random points in the ball, at least ``keep_away`` from every scatterer."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    out = []
    while len(out) < count:
        cand = rng.uniform(-radius, radius, size=(4 * count, d))
        cand = cand[np.linalg.norm(cand, axis=1) < radius]
        dist = np.linalg.norm(cand[:, None, :] - pts[None, :, :], axis=-1).min(axis=1)
        out.extend(cand[dist > keep_away])
    return np.array(out[:count])


@dataclass(frozen=True)
class WitnessResiduals:
    helmholtz: float
    point: float
    cauchy: float

    def ok(self, helmholtz_tol: float = 1e-4, point_tol: float = 1e-12, cauchy_tol: float = 1e-12) -> bool:
        return self.helmholtz < helmholtz_tol and self.point < point_tol and self.cauchy < cauchy_tol


def verify_ite_pair(pot: MultipointPotential, family: PlaneWaveFamily, interior, boundary,
                    normals=None, h: float = 1e-3) -> WitnessResiduals:
    """Residuals certifying ``(psi, phi) = (phi, phi)`` as an interior transmission pair.

    (a) finite-difference ``|Delta phi + E phi|`` at interior points, relative to ``max |phi|``;
    (b) the point conditions of ``pot`` with singular part 0 and regular part ``phi(y_j)``;
    (c) differences of the Dirichlet and Neumann traces of ``psi`` and ``phi`` on the boundary.
    """
    if pot.d != family.directions.shape[1] or pot.n != len(family.points) or not np.allclose(
        pot.positions, family.points, rtol=0, atol=1e-14
    ):
        raise DomainError("plane-wave family was not built for this potential's points")
    interior = np.atleast_2d(np.asarray(interior, dtype=float))
    boundary = np.atleast_2d(np.asarray(boundary, dtype=float))
    if normals is None:
        normals = boundary / np.linalg.norm(boundary, axis=1, keepdims=True)
    d = pot.d

    centre = family.evaluate(interior)
    lap = np.zeros_like(centre)
    for axis in range(d):
        step = np.zeros(d)
        step[axis] = h
        lap += (family.evaluate(interior + step) - 2.0 * centre + family.evaluate(interior - step)) / h**2
    scale = max(float(np.max(np.abs(centre))), 1e-300)
    helm = float(np.max(np.abs(lap + family.E * centre))) / scale

    at_points = family.evaluate(pot.positions)                              # (n, dim)
    point_res = 0.0
    for j, a in enumerate(pot.alphas):
        res = point_condition_residual(d, a, 0.0, at_points[j])
        point_res = max(point_res, float(np.max(np.abs(res))))

    # psi is phi itself: the same superposition with no singular terms added
    psi_vals, phi_vals = family.evaluate(boundary), family.evaluate(boundary)
    psi_dn = np.einsum("nd,ndk->nk", normals, family.gradient(boundary))
    phi_dn = np.einsum("nd,ndk->nk", normals, family.gradient(boundary))
    cauchy = float(max(np.max(np.abs(psi_vals - phi_vals)), np.max(np.abs(psi_dn - phi_dn))))
    return WitnessResiduals(helm, point_res, cauchy)


@dataclass(frozen=True)
class BoxSpectrumEntry:
    """Dirichlet eigenvalue ``E = p^2 + q^2`` of the square ``(0, pi)^2``."""

    E: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def multiplicity(self) -> int:
        return len(self.pairs)

    def eigenfunctions(self, x) -> np.ndarray:
        """``sin(p x) sin(q y)`` for every pair, at points ``x`` -> ``(N, m)``."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        p = np.array([pq[0] for pq in self.pairs])
        q = np.array([pq[1] for pq in self.pairs])
        return np.sin(np.outer(x[:, 0], p)) * np.sin(np.outer(x[:, 1], q))


def box_eigenspace(E: int) -> BoxSpectrumEntry:
    if int(E) != E or E < 1:
        raise DomainError("box energy must be a positive integer")
    E = int(E)
    pairs = []
    p = 1
    while p * p < E:
        r = E - p * p
        q = math.isqrt(r)
        if q >= 1 and q * q == r:
            pairs.append((p, q))
        p += 1
    return BoxSpectrumEntry(E, tuple(pairs))


def multiplicity_lower_bound(entry: BoxSpectrumEntry, points) -> int:
    """Dimension of the eigenfunctions vanishing at every point.

    Each such combination satisfies the point conditions (regular, zero at
    ``y_j``), so it stays an eigenfunction once the scatterers are added.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, m = len(pts), entry.multiplicity
    if n >= m:
        raise PreconditionError(f"need fewer points than the multiplicity (n = {n}, m = {m})")
    if np.any(pts <= 0) or np.any(pts >= math.pi):
        raise PreconditionError("points must lie strictly inside (0, pi)^2")
    basis, _ = null_space(entry.eigenfunctions(pts), NULL_THRESHOLD)
    return basis.shape[1]
