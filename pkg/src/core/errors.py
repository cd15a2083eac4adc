"""
src/core/errors.py — Exception hierarchy

Every failure raised by the solvers derives from SpectralError so that
callers (the CLI in particular) can map families of failures onto exit
codes without catching bare exceptions.
"""

from __future__ import annotations

from typing import Optional


class SpectralError(Exception):
    """Base class for all diracwave errors."""


class DomainError(SpectralError, ValueError):
    """Invalid input: non-finite λ, a outside (0, π), non-coprime p/q, β = 0, N < 1."""


class OverflowRangeError(SpectralError, OverflowError):
    """A value exceeds the double-precision range even after scaling."""


class ConvergenceError(SpectralError, RuntimeError):
    """An iterative method (roots, Newton, phase tracking) did not converge."""


class MultiplicityError(SpectralError, RuntimeError):
    """An apparent root of multiplicity three or more was found."""


class NotAnEigenvalueError(DomainError):
    """Mode construction requested at a point that is not (or not a double) eigenvalue."""


class PoleError(DomainError):
    """The resolvent / Green kernel was requested on the spectrum."""


class SingularGramError(SpectralError, ArithmeticError):
    """Gram matrix of root vectors is numerically singular."""

    def __init__(self, message: str, pair: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class IdentityViolation(SpectralError, AssertionError):
    """A trace identity or verdict contradicts the analytic rule."""


# ── CLI exit codes ─────────────────────────────────────────────────

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_IDENTITY = 3


def exit_code_for(exc: BaseException) -> int:
    """Map an exception onto the documented CLI exit status."""
    if isinstance(exc, IdentityViolation):
        return EXIT_IDENTITY
    if isinstance(exc, DomainError) and not isinstance(exc, (NotAnEigenvalueError, PoleError)):
        return EXIT_USAGE
    if isinstance(exc, SpectralError):
        return EXIT_SOLVER
    return EXIT_USAGE
