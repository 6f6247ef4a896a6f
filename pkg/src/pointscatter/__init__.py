"""Exactly solvable scattering by finitely many point scatterers in dimensions 1, 2 and 3,
with numerical checks of transparency and transmission-eigenvalue properties."""
from .errors import ConvergenceError, DomainError, PreconditionError, ResonanceError
from .multipoint import MultipointPotential, PointScatterer, solve_charges

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "MultipointPotential",
    "PointScatterer",
    "PreconditionError",
    "ResonanceError",
    "__version__",
    "solve_charges",
]
