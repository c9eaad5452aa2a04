"""Exception hierarchy shared by the services and the command layer."""
from __future__ import annotations

from typing import Optional, Sequence


class GridSpectraError(Exception):
    """Base class for every error raised by gridspectra."""


class DomainError(GridSpectraError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class ConfigError(GridSpectraError, ValueError):
    """An environment setting could not be interpreted."""


class CapacityError(GridSpectraError):
    """A dense operation was requested for a grid above the dense cap."""


class VerificationError(GridSpectraError):
    """An analytic result disagreed with the oracle."""


class SolverError(GridSpectraError, RuntimeError):
    """Root bracketing, convergence or residual checks failed."""

    def __init__(
        self,
        message: str,
        *,
        z: Optional[Sequence[int]] = None,
        best_residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ) -> None:
        self.z = tuple(z) if z is not None else None
        self.best_residual = best_residual
        self.iterations = iterations
        details = []
        if self.z is not None:
            details.append(f"z={list(self.z)}")
        if best_residual is not None:
            details.append(f"best residual {best_residual:.3e}")
        if iterations is not None:
            details.append(f"{iterations} iterations")
        super().__init__(f"{message} ({', '.join(details)})" if details else message)

    def with_index(self, z: Sequence[int]) -> "SolverError":
        """Return a copy of this error that names the eigen index it came from."""
        if self.z is not None:
            return self
        base = str(self).split(" (", 1)[0]
        return SolverError(base, z=z, best_residual=self.best_residual, iterations=self.iterations)
