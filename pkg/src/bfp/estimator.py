"""Estimator interface around the fixed-point solvers.

Wraps the solvers in the scikit-learn fit/get_params protocol so the
projection composes with clone, parameter search and pipeline tooling.
The input follows the "precomputed" convention: ``fit`` receives the
symmetric positive-definite matrix itself, not a data sample.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import check_random_state

from .potential import bures_wasserstein_sq
from .solvers import ALGORITHMS, ArmijoParams, SolverConfig, solve
from .validation import check_positive_definite, check_positive_vector

__all__ = ["DiagonalBuresProjection"]


class DiagonalBuresProjection(BaseEstimator):
    """Closest positive diagonal matrix in the Bures-Wasserstein metric.

    Fitting finds the positive vector v such that diag(v) minimizes the
    squared Bures-Wasserstein distance to the input matrix, by maximizing
    the equivalent concave potential
    J(v) = 2 Tr((Dv^1/2 M Dv^1/2)^1/2) - sum(v).

    Parameters
    ----------
    algorithm : {"phi", "jump", "gradient_ascent"}, default="jump"
        Iteration used to reach the fixed point. "jump" and "phi" are the
        multiplicative updates; "jump" needs asymptotically half as many
        iterations. "gradient_ascent" is the backtracking baseline.
    tol : float, default=1e-8
        Convergence threshold on the relative fixed-point residual.
    max_iters : int, default=100000
        Iteration budget. Exhausting it raises ConvergenceWarning and
        leaves ``converged_`` False.
    v0 : "ones", "rand" or array of shape (n,), default="ones"
        Starting point. "rand" draws uniformly from [0.1, 1.1) using
        ``random_state``; an explicit array must be strictly positive.
    armijo : ArmijoParams or None, default=None
        Line-search parameters, only consulted by "gradient_ascent".
        None means the defaults.
    random_state : int, RandomState instance or None, default=None
        Only used when ``v0="rand"``.

    Attributes
    ----------
    v_ : ndarray of shape (n,)
        Diagonal of the fitted projection.
    objective_ : float
        Potential J at ``v_``.
    n_iter_ : int
        Update steps taken.
    converged_ : bool
        Whether the residual reached ``tol`` within budget.
    trace_ : SolveTrace
        Full per-iteration history of the fit.
    n_features_in_ : int
        Side length of the fitted matrix.
    """

    def __init__(
        self,
        algorithm="jump",
        tol=1e-8,
        max_iters=100_000,
        v0="ones",
        armijo=None,
        random_state=None,
    ):
        self.algorithm = algorithm
        self.tol = tol
        self.max_iters = max_iters
        self.v0 = v0
        self.armijo = armijo
        self.random_state = random_state

    def _starting_point(self, n):
        if isinstance(self.v0, str):
            if self.v0 == "ones":
                return np.ones(n)
            if self.v0 == "rand":
                rs = check_random_state(self.random_state)
                return rs.uniform(0.1, 1.1, n)
            raise ValueError(
                f"v0 must be 'ones', 'rand' or an array, got {self.v0!r}"
            )
        v0 = check_positive_vector(self.v0, "v0")
        if v0.shape != (n,):
            raise ValueError(f"v0 has shape {v0.shape}, expected ({n},)")
        return v0

    def fit(self, X, y=None):
        """Project the matrix X onto the positive diagonal matrices.

        Parameters
        ----------
        X : ndarray of shape (n, n)
            Symmetric positive-definite matrix (the "precomputed" input
            convention; X is the matrix itself, not samples).
        y : ignored
            Present for interface compatibility.
        """
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}"
            )
        X = check_positive_definite(X, "X")
        n = X.shape[0]
        cfg = SolverConfig(
            algorithm=self.algorithm,
            tol=self.tol,
            max_iters=self.max_iters,
            armijo=self.armijo if self.armijo is not None else ArmijoParams(),
        )
        trace = solve(X, self._starting_point(n), cfg)
        if not trace.converged:
            warnings.warn(
                f"residual {trace.final_residual:.3e} still above tol={self.tol:g} "
                f"after {trace.iterations} iterations; increase max_iters",
                ConvergenceWarning,
            )
        self.n_features_in_ = n
        self.v_ = trace.final_v
        self.objective_ = trace.final_j
        self.n_iter_ = trace.iterations
        self.converged_ = trace.converged
        self.trace_ = trace
        return self

    def score(self, X, y=None):
        """Negative squared Bures-Wasserstein distance from diag(v_) to X.

        Higher is better; the fitted matrix scores
        ``objective_ - trace(X)``.
        """
        if not hasattr(self, "v_"):
            raise ValueError("estimator is not fitted; call fit first")
        X = check_positive_definite(X, "X")
        if X.shape[0] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[0]} rows, fitted for {self.n_features_in_}"
            )
        return -bures_wasserstein_sq(np.diag(self.v_), X)
