"""Exception hierarchy shared by every layer of the package.

Each exception carries a short machine-readable ``code`` so that transport
layers (HTTP service, CLI) can map failures onto a stable error enum without
string-matching messages.
"""

from __future__ import annotations


class DelayDesignError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "internal"


class InvalidInput(DelayDesignError):
    """A caller-supplied value violates a documented precondition."""

    code = "bad_input"


class SingularSystem(DelayDesignError):
    """The linear system tying coefficients to root conditions is
    numerically singular (condition estimate above threshold, or a
    non-finite factorization)."""

    code = "singular_system"

    def __init__(self, message: str, condition_estimate: float | None = None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class NoAdmissiblePoint(DelayDesignError):
    """No parameter value in the searched window satisfies the dominance
    condition; the admissibility contour is the diagnostic to look at."""

    code = "no_admissible_point"


class ContourTooClose(DelayDesignError):
    """A root lies too close to an integration contour for the winding
    quadrature to be trusted.  Callers perturb the window and retry."""

    code = "contour_too_close"


class RootOnBoundary(DelayDesignError):
    """Perturb-and-retry exhausted: a root appears pinned to the window
    boundary."""

    code = "root_on_boundary"


class ConvergenceFailure(DelayDesignError):
    """Subdivision or iterative refinement failed to settle within its
    iteration budget."""

    code = "internal"


class InvalidPerturbation(DelayDesignError):
    """A sensitivity sweep would push the delay to zero or below."""

    code = "invalid_perturbation"


class BlowUp(DelayDesignError):
    """The simulated trajectory left the representable range."""

    code = "blow_up"

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time


class AssignedRootMissing(DelayDesignError):
    """The root set handed to a dominance check does not contain the root
    the caller claims to have placed."""

    code = "bad_input"


class DeadlineExceeded(DelayDesignError):
    """A cooperative deadline expired mid-computation.  ``partial`` holds
    whatever progress metadata the interrupted operation could provide."""

    code = "deadline_exceeded"

    def __init__(self, message: str, partial: dict | None = None):
        super().__init__(message)
        self.partial = partial or {}
