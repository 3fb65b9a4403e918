"""Falsification and analysis tooling.

Three kinds of scrutiny for the fixed-point theory:

* an adversarial search that actively tries to break monotone ascent by
  minimizing the one-step gain over problem instances,
* finite-difference Jacobians of the two update maps at the fixed point,
  checking the linear relation J_jump = 2 J_phi - I and local contraction,
* randomized property suites (ascent, surrogate, Jacobian, distance
  identity) runnable in bulk from the command line.

Instances are drawn by ``instance_generator``: M = L L^T + 1e-5 I with L
standard normal, v uniform on [0.1, 1.1), both from one seeded generator.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import NoConvergenceError, StepTooLargeError, ValidationError
from .potential import (
    bures_wasserstein_sq,
    build_surrogate,
    phi,
    potential_J,
    scalar_gain,
    surrogate_optimum,
    surrogate_value,
)
from .solvers import ArmijoParams, SolverConfig, solve_jump, solve_phi
from .validation import (
    check_positive_definite,
    check_positive_vector,
    check_dimensions,
)

__all__ = [
    "AdversarialReport",
    "JacobianPair",
    "JacobianReport",
    "SuiteResult",
    "SUITES",
    "gain",
    "instance_generator",
    "adversarial_search",
    "fd_jacobian",
    "jacobian_relation_check",
    "run_suite",
]

# Search parameters for adversarial_search: objective-evaluation budget per
# start, and the cap on the parameter-space step length of one descent move.
EVALS_PER_START = 2000
STEP_BOUND = 1e3

SUITES = ("ascent", "surrogate", "jacobian", "bw")


def gain(m, v):
    """One-step gain of the multiplicative update: J(phi(v)) - J(v).

    Nonnegative up to roundoff for every positive definite M and positive
    v; the adversarial search below tries to drive it negative.
    """
    fv = phi(m, v)
    return potential_J(m, fv) - potential_J(m, v)


def instance_generator(n, seed):
    """Random test instance: (M, v) with M = L L^T + 1e-5 I, v in [0.1, 1.1).

    L has i.i.d. standard normal entries. Deterministic per (n, seed).
    """
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    ell = rng.standard_normal((n, n))
    m = ell @ ell.T + 1e-5 * np.eye(n)
    v = rng.random(n) + 0.1
    return m, v


# ---------------------------------------------------------------------------
# Adversarial search

@dataclass(frozen=True)
class AdversarialReport:
    """Outcome of a multi-start gain minimization.

    ``min_gain`` is the smallest gain observed across every objective
    evaluation of every start; ``argmin`` is the (M, v) instance attaining
    it and re-evaluates to ``min_gain`` exactly.
    """

    min_gain: float
    argmin: tuple
    evaluations: int
    starts: int


def _gain_of_parameters(theta, n):
    """Gain at v = exp(u), M = L L^T + 1e-5 I; +inf where undefined.

    Overflow, underflow to a zero coordinate and numerically indefinite M
    all map to +inf so the minimizer simply avoids them.
    """
    u = theta[:n]
    with np.errstate(over="ignore"):
        v = np.exp(u)
    if not np.isfinite(v).all() or (v <= 0.0).any():
        return math.inf
    ell = theta[n:].reshape(n, n)
    m = ell @ ell.T + 1e-5 * np.eye(n)
    try:
        return gain(m, v)
    except (ValidationError, NoConvergenceError, np.linalg.LinAlgError):
        return math.inf


def _search_single_start(n, seed, start_index, evals_per_start, armijo):
    """Gradient descent on the gain from one seeded random start.

    Finite-difference gradients, Armijo backtracking, step length capped at
    STEP_BOUND. Returns (best value, best parameters, evaluations used);
    deterministic in (seed, start_index).
    """
    rng = np.random.default_rng([seed, start_index])
    theta = rng.standard_normal(n + n * n)
    d = theta.size

    used = 0
    best_val = math.inf
    best_theta = None

    def evaluate(t):
        nonlocal used, best_val, best_theta
        used += 1
        val = _gain_of_parameters(t, n)
        if val < best_val:
            best_val = val
            best_theta = t.copy()
        return val

    current = evaluate(theta)
    eta_next = armijo.init_step
    eta_cap = armijo.init_step * 2.0**10
    while used + 2 * d + 1 <= evals_per_start:
        h = 1e-6 * max(1.0, float(np.abs(theta).max()))
        g = np.empty(d)
        for i in range(d):
            step = np.zeros(d)
            step[i] = h
            g[i] = (evaluate(theta + step) - evaluate(theta - step)) / (2.0 * h)
        if not np.isfinite(g).all():
            break
        g_sq = float(g @ g)
        g_norm = math.sqrt(g_sq)
        if g_norm <= 1e-12:
            break
        eta = min(eta_next, STEP_BOUND / g_norm)
        accepted = None
        for _ in range(armijo.max_backtracks + 1):
            if used >= evals_per_start:
                break
            candidate = theta - eta * g
            val = evaluate(candidate)
            if val <= current - armijo.c1 * eta * g_sq:
                accepted = (candidate, val)
                break
            eta *= armijo.shrink
        if accepted is None:
            break
        theta, current = accepted
        eta_next = min(2.0 * eta, eta_cap)
    return best_val, best_theta, used


def adversarial_search(n, starts, seed, evals_per_start=EVALS_PER_START):
    """Try to falsify monotone ascent by minimizing the gain.

    Parameterizes v = exp(u) and M = L L^T + 1e-5 I so every parameter
    vector is a valid instance, then runs ``starts`` independent
    finite-difference gradient descents on the gain from seeded random
    points. A failed or stuck descent just contributes what it saw; search
    failure is reflected in the report, never raised.

    Returns
    -------
    AdversarialReport
        Global minimum over all evaluations of all starts. A negative
        ``min_gain`` beyond roundoff would be a counterexample.
    """
    if n < 1:
        raise ValidationError(f"n must be at least 1, got {n}")
    if starts < 1:
        raise ValidationError(f"starts must be at least 1, got {starts}")
    armijo = ArmijoParams()
    best_val = math.inf
    best_theta = None
    total = 0
    for start_index in range(starts):
        val, theta, used = _search_single_start(
            n, seed, start_index, evals_per_start, armijo
        )
        total += used
        if val < best_val:
            best_val = val
            best_theta = theta
    if best_theta is None:
        return AdversarialReport(
            min_gain=math.inf, argmin=None, evaluations=total, starts=starts
        )
    v = np.exp(best_theta[:n])
    ell = best_theta[n:].reshape(n, n)
    m = ell @ ell.T + 1e-5 * np.eye(n)
    return AdversarialReport(
        min_gain=best_val, argmin=(m, v), evaluations=total, starts=starts
    )


# ---------------------------------------------------------------------------
# Jacobian analysis

class JacobianPair(NamedTuple):
    """Finite-difference Jacobians of the two updates at the same point."""

    j_phi: np.ndarray
    j_psi: np.ndarray
    fd_step: float


@dataclass(frozen=True)
class JacobianReport:
    """Jacobian pair at a converged fixed point plus deviation diagnostics.

    ``eig_phi`` and ``eig_psi`` are the eigenvalue real parts in ascending
    order; ``relation_deviation`` is the max-norm of
    j_psi - (2 j_phi - I); ``eigenvalue_deviation`` compares the sorted
    spectra against the map x -> 2x - 1.
    """

    pair: JacobianPair
    v_star: np.ndarray
    relation_deviation: float
    eig_phi: np.ndarray
    eig_psi: np.ndarray
    eigenvalue_deviation: float
    eigenvalues_match: bool
    max_imaginary: float
    spectral_radius_phi: float


def _jump_map(m, v):
    fv = phi(m, v)
    return fv * fv / v


_MAPS = {"phi": phi, "jump": _jump_map}


def fd_jacobian(map_name, m, v, h):
    """Central-difference Jacobian of one update map.

    Column i is (map(v + h e_i) - map(v - h e_i)) / (2h).

    Parameters
    ----------
    map_name : {"phi", "jump"}
    m : (n, n) array_like
        Symmetric positive definite matrix.
    v : (n,) array_like
        Strictly positive evaluation point.
    h : float
        Step size; must satisfy h <= min(v) / 2 so the perturbed points
        stay strictly positive.

    Raises
    ------
    StepTooLargeError
        If ``h`` exceeds min(v) / 2.
    """
    if map_name not in _MAPS:
        raise ValidationError(
            f"map_name must be one of {tuple(_MAPS)}, got {map_name!r}"
        )
    m = check_positive_definite(m, "M")
    v = check_positive_vector(v)
    check_dimensions(m, v)
    if not h > 0:
        raise ValidationError(f"h must be positive, got {h}")
    if h > float(v.min()) / 2.0:
        raise StepTooLargeError(
            f"step {h:g} exceeds min(v)/2 = {v.min() / 2.0:g}; "
            "perturbed points would leave the positive orthant"
        )
    update = _MAPS[map_name]
    n = v.size
    jac = np.empty((n, n))
    for i in range(n):
        step = np.zeros(n)
        step[i] = h
        jac[:, i] = (update(m, v + step) - update(m, v - step)) / (2.0 * h)
    return jac


def jacobian_relation_check(m, tol_fp=1e-12, tol_jac=1e-5):
    """Check J_jump = 2 J_phi - I at the fixed point of ``m``.

    Solves for the fixed point to residual ``tol_fp``, computes both
    finite-difference Jacobians there with step 1e-5 * min(v*), and
    compares them entrywise and through their sorted eigenvalue real
    parts (the relation maps eigenvalues by x -> 2x - 1).

    Returns
    -------
    JacobianReport

    Raises
    ------
    NoConvergenceError
        If the fixed-point solve exhausts its budget.
    """
    m = check_positive_definite(m, "M")
    n = m.shape[0]
    trace = solve_jump(m, np.ones(n), SolverConfig(tol=tol_fp))
    if not trace.converged:
        raise NoConvergenceError(
            f"fixed point not reached: residual {trace.final_residual:g} "
            f"after {trace.iterations} iterations"
        )
    v_star = trace.final_v
    h = 1e-5 * float(v_star.min())
    j_phi = fd_jacobian("phi", m, v_star, h)
    j_psi = fd_jacobian("jump", m, v_star, h)
    deviation = float(np.abs(j_psi - (2.0 * j_phi - np.eye(n))).max())

    eig_phi = np.linalg.eigvals(j_phi)
    eig_psi = np.linalg.eigvals(j_psi)
    max_imag = float(max(np.abs(eig_phi.imag).max(), np.abs(eig_psi.imag).max()))
    re_phi = np.sort(eig_phi.real)
    re_psi = np.sort(eig_psi.real)
    # x -> 2x - 1 is increasing, so sorted spectra stay aligned.
    eig_dev = float(np.abs(re_psi - (2.0 * re_phi - 1.0)).max())
    return JacobianReport(
        pair=JacobianPair(j_phi=j_phi, j_psi=j_psi, fd_step=h),
        v_star=v_star,
        relation_deviation=deviation,
        eig_phi=re_phi,
        eig_psi=re_psi,
        eigenvalue_deviation=eig_dev,
        eigenvalues_match=eig_dev <= tol_jac,
        max_imaginary=max_imag,
        spectral_radius_phi=float(np.abs(eig_phi).max()),
    )


# ---------------------------------------------------------------------------
# Property suites

@dataclass
class SuiteResult:
    """Pass/fail tally of one property suite."""

    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)


_SUITE_DIMS = {
    "ascent": (1, 2, 3, 4, 6, 8, 12, 16),
    "surrogate": (1, 2, 3, 4, 6, 8),
    "jacobian": (2, 3, 4, 5, 6, 8, 10, 12),
    "bw": (1, 2, 3, 4, 6, 8, 16),
}


def _ascent_trial(n, seed):
    m, v0 = instance_generator(n, seed)
    msgs = []
    j0 = potential_J(m, v0)
    g0 = gain(m, v0)
    if g0 < -1e-10 * (1.0 + abs(j0)):
        msgs.append(f"one-step gain {g0:.3e} is negative beyond tolerance")
    cfg = SolverConfig(tol=1e-8, max_iters=150)
    for solver, label in ((solve_phi, "phi"), (solve_jump, "jump")):
        tr = solver(m, v0, cfg)
        if tr.iterations:
            diffs = np.diff(tr.j_values)
            rel = diffs / (1.0 + np.abs(tr.j_values[:-1]))
            worst = float(rel.min())
            if worst < -1e-10:
                msgs.append(f"{label}: J decreased by {-worst:.3e} relative")
        if not (tr.final_v > 0.0).all():
            msgs.append(f"{label}: iterate left the positive orthant")
    return msgs


def _surrogate_trial(n, seed):
    m, v = instance_generator(n, seed)
    msgs = []
    sur = build_surrogate(m, v)
    j_v = potential_J(m, v)
    g_v = surrogate_value(sur, v)
    scale = 1.0 + abs(j_v)
    if abs(g_v - j_v) > 1e-9 * scale:
        msgs.append(f"tangency violated: |G(v;v) - J(v)| = {abs(g_v - j_v):.3e}")
    target = surrogate_optimum(sur)
    fv = phi(m, v)
    gm = np.sqrt(v * target)
    gm_err = float(np.abs(fv - gm).max()) / max(1.0, float(np.abs(fv).max()))
    if gm_err > 1e-9:
        msgs.append(f"geometric-mean identity off by {gm_err:.3e}")
    j_t = potential_J(m, target)
    g_t = surrogate_value(sur, target)
    if j_t < g_t - 1e-9 * scale:
        msgs.append(f"surrogate exceeds J at its optimum by {g_t - j_t:.3e}")
    if g_t < g_v - 1e-9 * scale:
        msgs.append(f"surrogate decreased toward its optimum by {g_v - g_t:.3e}")
    rng = np.random.default_rng([seed, 17])
    w = v * rng.uniform(0.5, 2.0, size=n)
    if potential_J(m, w) < surrogate_value(sur, w) - 1e-9 * scale:
        msgs.append("surrogate exceeds J at a random point")
    z = (v / target) ** 0.25
    lower = float((target * scalar_gain(z)).sum())
    if gain(m, v) < lower - 1e-9:
        msgs.append("gain falls below its per-coordinate surrogate decomposition")
    return msgs


def _jacobian_trial(n, seed):
    m, _ = instance_generator(n, seed)
    rep = jacobian_relation_check(m, tol_fp=1e-12, tol_jac=1e-5)
    msgs = []
    if rep.relation_deviation > 1e-5:
        msgs.append(f"relation deviation {rep.relation_deviation:.3e} > 1e-5")
    if not rep.eigenvalues_match:
        msgs.append(f"eigenvalue map off by {rep.eigenvalue_deviation:.3e}")
    if rep.max_imaginary > 1e-6:
        msgs.append(f"imaginary eigenvalue parts up to {rep.max_imaginary:.3e}")
    if rep.spectral_radius_phi >= 1.0:
        msgs.append(f"spectral radius {rep.spectral_radius_phi:.6f} >= 1")
    return msgs


def _bw_trial(n, seed):
    m, v = instance_generator(n, seed)
    msgs = []
    d_v = np.diag(v)
    d2 = bures_wasserstein_sq(d_v, m)
    tr_m = float(np.trace(m))
    j_v = potential_J(m, v)
    scale = 1.0 + abs(tr_m)
    if abs(d2 - (tr_m - j_v)) > 1e-9 * scale:
        msgs.append(
            f"distance identity off by {abs(d2 - (tr_m - j_v)):.3e} "
            f"(d2={d2:.6e}, TrM - J={tr_m - j_v:.6e})"
        )
    if bures_wasserstein_sq(m, m) > 1e-9 * scale:
        msgs.append("self-distance is not zero")
    if abs(bures_wasserstein_sq(m, d_v) - d2) > 1e-9 * scale:
        msgs.append("distance is not symmetric")
    return msgs


_TRIALS = {
    "ascent": _ascent_trial,
    "surrogate": _surrogate_trial,
    "jacobian": _jacobian_trial,
    "bw": _bw_trial,
}


def _run_one(name, trials, seed):
    dims = _SUITE_DIMS[name]
    trial = _TRIALS[name]
    result = SuiteResult(name=name)
    for t in range(trials):
        n = dims[t % len(dims)]
        s = seed + t
        msgs = trial(n, s)
        if msgs:
            result.failed += 1
            result.failures.extend(f"n={n} seed={s}: {msg}" for msg in msgs)
        else:
            result.passed += 1
    return result


def run_suite(name, trials=200, seed=0):
    """Run one named property suite, or all of them.

    Parameters
    ----------
    name : {"ascent", "surrogate", "jacobian", "bw", "all"}
    trials : int
        Trials per suite; instance dimensions cycle through a fixed
        schedule and the trial's instance is ``instance_generator(n,
        seed + trial_index)``, so any failure line reproduces directly.
    seed : int

    Returns
    -------
    list of SuiteResult
    """
    if trials < 1:
        raise ValidationError(f"trials must be at least 1, got {trials}")
    if name == "all":
        names = SUITES
    elif name in SUITES:
        names = (name,)
    else:
        raise ValidationError(
            f"unknown suite {name!r}; expected one of {SUITES + ('all',)}"
        )
    return [_run_one(nm, trials, seed) for nm in names]
