"""The nuclear-norm potential, its gradient, the phi map and the MM surrogate.

For a symmetric positive definite matrix M and a strictly positive vector v,
the potential is

    J(v) = 2 * Tr((D_v^{1/2} M D_v^{1/2})^{1/2}) - sum(v)

where D_v = diag(v). Its unique maximizer is the fixed point of the
multiplicative update ``phi``. The separable surrogate built here minorizes
J, touches it at the anchor with matching gradient, and reduces the ascent
analysis to a scalar quartic gain polynomial.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import DimensionMismatchError, NotPDError, NotPSDError
from .spectral import _checked_psd_eigvals, polar, sym_sqrt, trace_sqrt
from .validation import (
    check_dimensions,
    check_positive_vector,
    check_symmetric_matrix,
    symmetrize,
)

__all__ = [
    "Surrogate",
    "potential_J",
    "phi",
    "grad_J",
    "build_surrogate",
    "surrogate_value",
    "surrogate_optimum",
    "scalar_gain",
    "bures_wasserstein_sq",
    "transport_map_diag",
]


class Surrogate(NamedTuple):
    """Separable minorizer sum_i (2 c_i sqrt(v_i) - v_i) anchored at a point.

    ``coefficients`` is the vector c; ``anchor`` is the point where the
    surrogate touches the potential with matching value and gradient.
    """

    coefficients: np.ndarray
    anchor: np.ndarray


def _congruence(m, v):
    """D_v^{1/2} M D_v^{1/2}, exactly symmetric for symmetric m."""
    s = np.sqrt(v)
    return m * np.outer(s, s)


def _validated(m, v):
    m = check_symmetric_matrix(m, "M")
    v = check_positive_vector(v)
    check_dimensions(m, v)
    return m, v


def potential_J(m, v):
    """Evaluate the potential J(v) = 2 Tr((D_v^{1/2} M D_v^{1/2})^{1/2}) - sum(v).

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric positive definite matrix.
    v : (n,) array_like
        Strictly positive vector.

    Returns
    -------
    float

    Raises
    ------
    DimensionMismatchError
        If shapes do not agree.
    NotPDError
        If ``m`` is materially indefinite (detected on the congruence
        D_v^{1/2} M D_v^{1/2}, which shares the inertia of ``m``).
    """
    m, v = _validated(m, v)
    inner = _congruence(m, v)
    w = _checked_psd_eigvals(inner, exc_type=NotPDError, name="M")
    return 2.0 * float(np.sqrt(np.maximum(w, 0.0)).sum()) - float(v.sum())


def phi(m, v):
    """One multiplicative fixed-point update: diag((D_v^{1/2} M D_v^{1/2})^{1/2}).

    Maps the open positive orthant into itself when M is positive definite;
    its unique fixed point is the maximizer of ``potential_J``.
    """
    m, v = _validated(m, v)
    try:
        root = sym_sqrt(_congruence(m, v))
    except NotPSDError as exc:
        raise NotPDError(str(exc)) from exc
    return np.diagonal(root).copy()


def grad_J(m, v):
    """Gradient of the potential: phi(M, v) / v - 1, element-wise."""
    return phi(m, v) / np.asarray(v, dtype=float) - 1.0


def build_surrogate(m, v_k, m_sqrt=None):
    """Construct the separable minorizer of the potential anchored at ``v_k``.

    Takes the polar decomposition U @ P of M^{1/2} D_{v_k}^{1/2} and freezes
    the orthogonal factor, which linearizes the nuclear-norm term; the
    resulting coefficients are c_i = [U.T @ M^{1/2}]_{ii}.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric positive definite matrix.
    v_k : (n,) array_like
        Strictly positive anchor point.
    m_sqrt : (n, n) ndarray, optional
        Precomputed symmetric square root of ``m``. It is constant per
        problem, so callers iterating on ``v_k`` may cache it.

    Returns
    -------
    Surrogate
    """
    m, v_k = _validated(m, v_k)
    if m_sqrt is None:
        try:
            m_sqrt = sym_sqrt(m)
        except NotPSDError as exc:
            raise NotPDError(str(exc)) from exc
    a_k = m_sqrt * np.sqrt(v_k)  # column scaling: M^{1/2} @ D_{v_k}^{1/2}
    factors = polar(a_k)
    c = np.einsum("ji,ji->i", factors.unitary, m_sqrt)
    return Surrogate(coefficients=c, anchor=v_k)


def surrogate_value(surrogate, v):
    """Evaluate the surrogate sum_i (2 c_i sqrt(v_i) - v_i) at ``v``."""
    c = surrogate.coefficients
    v = check_positive_vector(v)
    if v.shape != c.shape:
        raise DimensionMismatchError(
            f"surrogate has {c.shape[0]} coefficients but vector has length {v.shape[0]}"
        )
    return float((2.0 * c * np.sqrt(v) - v).sum())


def surrogate_optimum(surrogate):
    """Global maximizer of the surrogate: c squared, element-wise."""
    return surrogate.coefficients**2


def scalar_gain(z):
    """Gain polynomial z**4 - 3 z**2 + 2 z for z > 0.

    Equals z (z - 1)**2 (z + 2) in exact arithmetic: nonnegative on the
    positive axis, zero exactly at the fixed point z = 1. Accepts scalars
    or arrays (element-wise).
    """
    z = np.asarray(z, dtype=float)
    out = z**4 - 3.0 * z**2 + 2.0 * z
    return out if out.ndim else float(out)


def bures_wasserstein_sq(a, b):
    """Squared Bures-Wasserstein distance between symmetric PSD matrices.

    d^2(A, B) = Tr(A) + Tr(B) - 2 Tr((A^{1/2} B A^{1/2})^{1/2}),
    the squared 2-Wasserstein distance between centered Gaussians with
    covariances A and B. Results negative by at most 1e-9 relative to
    Tr(A) + Tr(B) are clamped to zero; anything lower raises.
    """
    a = check_symmetric_matrix(a, "A")
    b = check_symmetric_matrix(b, "B")
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"A is {a.shape[0]}x{a.shape[0]} but B is {b.shape[0]}x{b.shape[0]}"
        )
    a_sqrt = sym_sqrt(a)
    cross = trace_sqrt(symmetrize(a_sqrt @ b @ a_sqrt))
    tr_a = float(np.trace(a))
    tr_b = float(np.trace(b))
    value = tr_a + tr_b - 2.0 * cross
    if value < 0.0:
        if value < -1e-9 * (abs(tr_a) + abs(tr_b)):
            raise NotPSDError(
                f"squared distance {value:g} is negative beyond numerical noise"
            )
        value = 0.0
    return value


def transport_map_diag(m, v):
    """Diagonal of the optimal transport map from D_v toward M, restricted
    to the diagonal manifold: phi(M, v) / v element-wise.

    At the fixed point this is the all-ones vector; applying the map to D_v
    by congruence and reading the diagonal gives the jump update
    phi(v)**2 / v.
    """
    m, v = _validated(m, v)
    return phi(m, v) / v
