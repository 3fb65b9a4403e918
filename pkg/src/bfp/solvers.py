"""Iterative maximizers of the nuclear-norm potential.

Three algorithms share one convergence framework and one metric, the
relative fixed-point residual ||phi(v) - v||_inf / max(1, ||v||_inf):

* ``phi``: the multiplicative fixed-point update v <- phi(v), a damped
  half-step in log-domain. Monotone ascent, parameter free.
* ``jump``: v <- phi(v)**2 / v, the full step to the surrogate optimum
  (equivalently a unit-step Wasserstein gradient descent step on the
  diagonal manifold). Monotone ascent, asymptotically twice as fast.
* ``gradient_ascent``: Euclidean ascent with Armijo backtracking, the
  baseline the geometric updates are benchmarked against.

Every solver records J, the residual and per-step wall time for each
iterate and returns the history as a ``SolveTrace``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import LineSearchError
from .potential import phi, potential_J
from .validation import (
    check_dimensions,
    check_positive_definite,
    check_positive_vector,
)

__all__ = [
    "ALGORITHMS",
    "ArmijoParams",
    "SolverConfig",
    "SolveTrace",
    "residual",
    "solve",
    "solve_phi",
    "solve_jump",
    "solve_gradient_ascent",
]

ALGORITHMS = ("phi", "jump", "gradient_ascent")

# Warm-started Armijo trials never exceed init_step * 2**MAX_STEP_DOUBLINGS.
MAX_STEP_DOUBLINGS = 10


@dataclass(frozen=True)
class ArmijoParams:
    """Backtracking line-search parameters for gradient ascent."""

    init_step: float = 1.0
    shrink: float = 0.5
    c1: float = 1e-4
    max_backtracks: int = 60

    def __post_init__(self):
        if not self.init_step > 0:
            raise ValueError("init_step must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0.0 < self.c1 < 1.0:
            raise ValueError("c1 must lie in (0, 1)")
        if self.max_backtracks < 0:
            raise ValueError("max_backtracks must be nonnegative")


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver configuration.

    ``tol`` is compared against the relative fixed-point residual, the same
    metric for every algorithm so iteration counts are comparable.
    """

    algorithm: str = "phi"
    tol: float = 1e-8
    max_iters: int = 100_000
    armijo: ArmijoParams = field(default_factory=ArmijoParams)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}"
            )
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class SolveTrace:
    """Per-iteration record of one solver run.

    ``j_values[k]``, ``residuals[k]`` and ``step_ms[k]`` describe iterate k,
    with iterate 0 the starting point; ``final_v`` is the last iterate.
    """

    algorithm: str
    j_values: np.ndarray
    residuals: np.ndarray
    step_ms: np.ndarray
    final_v: np.ndarray
    converged: bool

    @property
    def iterations(self):
        """Number of update steps taken."""
        return len(self.j_values) - 1

    @property
    def final_j(self):
        return float(self.j_values[-1])

    @property
    def final_residual(self):
        return float(self.residuals[-1])

    @property
    def iterates(self):
        """Rows (iteration index, J, residual, step milliseconds)."""
        return list(
            zip(range(len(self.j_values)), self.j_values, self.residuals, self.step_ms)
        )


def residual(m, v):
    """Relative fixed-point residual ||phi(v) - v||_inf / max(1, ||v||_inf)."""
    fv = phi(m, v)
    v = np.asarray(v, dtype=float)
    return float(np.abs(fv - v).max() / max(1.0, np.abs(v).max()))


def _validate_problem(m, v0):
    m = check_positive_definite(m, "M")
    v = check_positive_vector(v0, "v0").copy()
    check_dimensions(m, v)
    return m, v


class _Recorder:
    """Accumulates the per-iterate history and assembles the trace."""

    def __init__(self, algorithm):
        self.algorithm = algorithm
        self.j_values = []
        self.residuals = []
        self.step_ms = []
        self._t_prev = time.perf_counter()

    def record(self, j, res):
        t_now = time.perf_counter()
        self.step_ms.append((t_now - self._t_prev) * 1e3)
        self._t_prev = t_now
        self.j_values.append(j)
        self.residuals.append(res)

    def trace(self, final_v, converged):
        return SolveTrace(
            algorithm=self.algorithm,
            j_values=np.asarray(self.j_values),
            residuals=np.asarray(self.residuals),
            step_ms=np.asarray(self.step_ms),
            final_v=final_v,
            converged=converged,
        )


def _evaluate(m, v):
    """phi(v), the residual at v, and J(v) from one eigendecomposition.

    Tr of the PSD square root equals the sum of its diagonal, so J comes
    for free once phi is known.
    """
    fv = phi(m, v)
    res = float(np.abs(fv - v).max() / max(1.0, np.abs(v).max()))
    j = 2.0 * float(fv.sum()) - float(v.sum())
    return fv, res, j


def _solve_multiplicative(m, v0, cfg, jump):
    m, v = _validate_problem(m, v0)
    rec = _Recorder("jump" if jump else "phi")
    converged = False
    while True:
        fv, res, j = _evaluate(m, v)
        rec.record(j, res)
        if res <= cfg.tol:
            converged = True
            break
        if len(rec.j_values) > cfg.max_iters:
            break
        v = fv * fv / v if jump else fv
    return rec.trace(final_v=v, converged=converged)


def solve_phi(m, v0, cfg=None):
    """Iterate v <- phi(M, v) until the residual drops below ``cfg.tol``.

    Ascends the potential monotonically and converges to its unique
    maximizer from any strictly positive start. Exhausting ``max_iters``
    returns a trace with ``converged=False`` rather than raising.
    """
    cfg = cfg or SolverConfig()
    return _solve_multiplicative(m, v0, cfg, jump=False)


def solve_jump(m, v0, cfg=None):
    """Iterate the jump update v <- phi(M, v)**2 / v.

    Converges to the same fixed point as ``solve_phi``, asymptotically in
    half as many iterations.
    """
    cfg = cfg or SolverConfig()
    return _solve_multiplicative(m, v0, cfg, jump=True)


def solve_gradient_ascent(m, v0, cfg=None):
    """Euclidean gradient ascent with Armijo backtracking.

    Each step moves along the gradient with a step size found by
    backtracking until the candidate stays strictly positive and satisfies
    the Armijo sufficient-increase condition
    J(v + eta g) >= J(v) + c1 eta ||g||^2. Accepted steps warm-start the
    next trial at twice their size, capped at init_step * 2**10.

    Raises
    ------
    LineSearchError
        If ``max_backtracks`` shrinks never produce an acceptable step; the
        exception carries the partial trace.
    """
    cfg = cfg or SolverConfig(algorithm="gradient_ascent")
    armijo = cfg.armijo
    m, v = _validate_problem(m, v0)
    rec = _Recorder("gradient_ascent")
    step_cap = armijo.init_step * 2.0**MAX_STEP_DOUBLINGS
    eta_next = armijo.init_step
    converged = False
    while True:
        fv, res, j = _evaluate(m, v)
        rec.record(j, res)
        if res <= cfg.tol:
            converged = True
            break
        if len(rec.j_values) > cfg.max_iters:
            break
        g = fv / v - 1.0
        g_sq = float(g @ g)
        # Reference value through the same evaluation path as the candidates;
        # mixing J formulas here would let roundoff veto every step once the
        # true per-step gain falls near the noise floor.
        j_ref = potential_J(m, v)
        eta = eta_next
        accepted = None
        for _ in range(armijo.max_backtracks + 1):
            candidate = v + eta * g
            # Positivity guard first: J is only defined on the open orthant.
            # A step too small to change v in float64 counts as a failed
            # trial, not an accepted no-op.
            if (candidate > 0.0).all() and not np.array_equal(candidate, v):
                if potential_J(m, candidate) >= j_ref + armijo.c1 * eta * g_sq:
                    accepted = candidate
                    break
            eta *= armijo.shrink
        if accepted is None:
            raise LineSearchError(
                f"no acceptable step after {armijo.max_backtracks} backtracks "
                f"at iteration {len(rec.j_values) - 1}",
                trace=rec.trace(final_v=v, converged=False),
            )
        v = accepted
        eta_next = min(2.0 * eta, step_cap)
    return rec.trace(final_v=v, converged=converged)


_SOLVERS = {
    "phi": solve_phi,
    "jump": solve_jump,
    "gradient_ascent": solve_gradient_ascent,
}


def solve(m, v0, cfg):
    """Run the solver selected by ``cfg.algorithm``."""
    return _SOLVERS[cfg.algorithm](m, v0, cfg)
