"""Subcommand handlers: parse flags, call services, render the document."""
from __future__ import annotations

from typing import Optional

from ..services.errors import ConfigError, DomainError, GridSpectraError

EXIT_OK = 0
EXIT_USAGE = 2      # bad flags, bad values, bad environment
EXIT_FAILURE = 3    # solver, capacity or verification failure


class CommandFailure(Exception):
    """A handler failed; ``output`` is still written when present."""

    def __init__(self, exit_code: int, message: str, output: Optional[str] = None) -> None:
        super().__init__(message)
        self.exit_code = exit_code
        self.output = output


def as_failure(exc: GridSpectraError) -> CommandFailure:
    if isinstance(exc, (DomainError, ConfigError)):
        return CommandFailure(EXIT_USAGE, str(exc))
    # SolverError, CapacityError, VerificationError
    return CommandFailure(EXIT_FAILURE, str(exc))
