"""Fixed-point maximization of the nuclear-norm potential.

For a symmetric positive definite M, the concave potential
J(v) = 2 Tr((D_v^{1/2} M D_v^{1/2})^{1/2}) - sum(v) has a unique maximizer
over positive vectors: the fixed point of v -> diag((D_v^{1/2} M
D_v^{1/2})^{1/2}). Maximizing J is the same problem as projecting M onto
the positive diagonal matrices in the Bures-Wasserstein metric.

The package provides the potential and its surrogate machinery
(``potential``), three solvers sharing one residual metric (``solvers``),
a scikit-learn style estimator (``estimator``), falsification and Jacobian
analysis tools (``verify``), the dense symmetric kernels they stand on
(``spectral``), and a CLI (``cli``).
"""

from .estimator import DiagonalBuresProjection
from .exceptions import (
    BFPError,
    DimensionMismatchError,
    LineSearchError,
    MatrixParseError,
    NoConvergenceError,
    NonFiniteError,
    NotPDError,
    NotPositiveError,
    NotPSDError,
    RankDeficientError,
    StepTooLargeError,
    ValidationError,
)
from .potential import (
    Surrogate,
    build_surrogate,
    bures_wasserstein_sq,
    grad_J,
    phi,
    potential_J,
    scalar_gain,
    surrogate_optimum,
    surrogate_value,
    transport_map_diag,
)
from .solvers import (
    ALGORITHMS,
    ArmijoParams,
    SolverConfig,
    SolveTrace,
    residual,
    solve,
    solve_gradient_ascent,
    solve_jump,
    solve_phi,
)
from .spectral import eigh, nuclear_norm, polar, sym_sqrt, trace_sqrt
from .verify import (
    AdversarialReport,
    JacobianPair,
    JacobianReport,
    SuiteResult,
    adversarial_search,
    fd_jacobian,
    gain,
    instance_generator,
    jacobian_relation_check,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ALGORITHMS",
    "AdversarialReport",
    "ArmijoParams",
    "BFPError",
    "DiagonalBuresProjection",
    "DimensionMismatchError",
    "JacobianPair",
    "JacobianReport",
    "LineSearchError",
    "MatrixParseError",
    "NoConvergenceError",
    "NonFiniteError",
    "NotPDError",
    "NotPositiveError",
    "NotPSDError",
    "RankDeficientError",
    "SolverConfig",
    "SolveTrace",
    "StepTooLargeError",
    "SuiteResult",
    "Surrogate",
    "ValidationError",
    "adversarial_search",
    "build_surrogate",
    "bures_wasserstein_sq",
    "eigh",
    "fd_jacobian",
    "gain",
    "grad_J",
    "instance_generator",
    "jacobian_relation_check",
    "nuclear_norm",
    "phi",
    "polar",
    "potential_J",
    "residual",
    "run_suite",
    "scalar_gain",
    "solve",
    "solve_gradient_ascent",
    "solve_jump",
    "solve_phi",
    "surrogate_optimum",
    "surrogate_value",
    "sym_sqrt",
    "trace_sqrt",
    "transport_map_diag",
]
