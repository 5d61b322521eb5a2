"""Design workbench for single-delay linear differential equations.

Given the characteristic function delta(s) = P(s) + exp(-s tau) Q(s), this
package solves for delayed-feedback coefficients that place dominant real
roots, verifies the resulting spectrum by argument-principle root finding,
sweeps the spectrum against delay perturbations, and simulates trajectories
by the method of steps.
"""

from ._kernels import backend_name
from .design import (
    AdmissibilityContour,
    DelayGiven,
    DesignResult,
    RootGiven,
    admissibility_contour,
    admissibility_residual,
    refine_contour_vertex,
    solve_b_given,
    solve_control_mid,
    solve_generic_crrid,
    solve_generic_mid,
)
from .deadline import Deadline
from .errors import (
    AssignedRootMissing,
    BlowUp,
    ContourTooClose,
    ConvergenceFailure,
    DeadlineExceeded,
    DelayDesignError,
    InvalidInput,
    InvalidPerturbation,
    NoAdmissiblePoint,
    RootOnBoundary,
    SingularSystem,
)
from .quasipoly import (
    ComplexRectangle,
    Quasipolynomial,
    evaluate,
    evaluate_derivative,
    log_scale,
    scale,
)
from .rootfinder import (
    DominanceReport,
    Root,
    RootSet,
    SensitivitySweep,
    certify_dominance,
    count_roots,
    find_roots,
    sensitivity_sweep,
    winding_integral,
)
from .simulate import (
    Constant,
    Exponential,
    InitialCondition,
    Polynomial,
    Trajectory,
    Trigonometric,
    eval_initial,
    initial_from_dict,
    initial_to_dict,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "Quasipolynomial",
    "ComplexRectangle",
    "evaluate",
    "evaluate_derivative",
    "scale",
    "log_scale",
    "DelayGiven",
    "RootGiven",
    "DesignResult",
    "solve_generic_mid",
    "solve_generic_crrid",
    "solve_b_given",
    "solve_control_mid",
    "admissibility_residual",
    "AdmissibilityContour",
    "admissibility_contour",
    "refine_contour_vertex",
    "Root",
    "RootSet",
    "DominanceReport",
    "SensitivitySweep",
    "count_roots",
    "winding_integral",
    "find_roots",
    "certify_dominance",
    "sensitivity_sweep",
    "Constant",
    "Polynomial",
    "Exponential",
    "Trigonometric",
    "InitialCondition",
    "eval_initial",
    "initial_from_dict",
    "initial_to_dict",
    "simulate",
    "Trajectory",
    "Deadline",
    "DelayDesignError",
    "InvalidInput",
    "SingularSystem",
    "NoAdmissiblePoint",
    "ContourTooClose",
    "RootOnBoundary",
    "ConvergenceFailure",
    "InvalidPerturbation",
    "BlowUp",
    "AssignedRootMissing",
    "DeadlineExceeded",
]
