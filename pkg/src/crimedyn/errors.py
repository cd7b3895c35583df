"""Exception hierarchy.

Each class maps to one CLI exit code so that front ends can translate failures
without inspecting messages.
"""


class CrimeDynError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParameterError(CrimeDynError, ValueError):
    """Input failed validation (missing key, out-of-range value, bad flag)."""

    exit_code = 2


class InadmissibleError(CrimeDynError, ValueError):
    """Inputs are well-formed but mathematically inadmissible.

    Raised for a non-positive ``Lambda``, for finite-difference perturbations
    that leave the admissible parameter set, and for quantities undefined at
    the given parameters (e.g. the critical threshold with ``alpha = 0``).
    """

    exit_code = 3


class NumericalError(CrimeDynError, ArithmeticError):
    """A numerical procedure failed (step underflow, no convergence, ...)."""

    exit_code = 4


class IntegrationError(NumericalError):
    """Time integration aborted; carries the solver statistics gathered so far."""

    def __init__(self, message, *, t=None, steps_accepted=0, steps_rejected=0, min_step=None):
        super().__init__(message)
        self.t = t
        self.steps_accepted = steps_accepted
        self.steps_rejected = steps_rejected
        self.min_step = min_step

    def __str__(self):
        base = super().__str__()
        return (
            f"{base} (t={self.t}, accepted={self.steps_accepted}, "
            f"rejected={self.steps_rejected}, min_step={self.min_step})"
        )
