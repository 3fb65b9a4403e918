"""Dense symmetric linear algebra kernel.

Eigendecomposition, PSD matrix square roots, polar decomposition and the
nuclear norm, for desk-scale dense real matrices. Everything is a pure
function of its inputs.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import NoConvergenceError, NotPSDError, RankDeficientError
from .validation import check_square_matrix, check_symmetric_matrix, symmetrize

__all__ = [
    "SpectralDecomposition",
    "PolarFactors",
    "eigh",
    "sym_sqrt",
    "trace_sqrt",
    "polar",
    "nuclear_norm",
]

# Eigenvalues more negative than this (relative to the Frobenius norm) mean
# the input is materially indefinite rather than PSD-up-to-roundoff.
INDEFINITE_RTOL = 1e-8

# Smallest singular-value ratio accepted by `polar` before the orthogonal
# factor stops being numerically well defined.
RANK_RTOL = 1e-12

# Eigenvalue floor applied inside `sym_sqrt` before taking square roots.
DEFAULT_EIGENVALUE_FLOOR = 1e-14


class SpectralDecomposition(NamedTuple):
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class PolarFactors(NamedTuple):
    """Orthogonal factor ``unitary`` and PSD factor ``psd`` with A = unitary @ psd."""

    unitary: np.ndarray
    psd: np.ndarray


def eigh(a):
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix; symmetrized by averaging before factorization.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues in ascending order and the orthogonal matrix whose
        columns are the matching eigenvectors.
    """
    a = check_symmetric_matrix(a)
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigendecomposition failed: {exc}") from exc
    return SpectralDecomposition(eigenvalues=w, eigenvectors=q)


def _checked_psd_eigvals(a, exc_type=NotPSDError, name="matrix"):
    """Eigenvalues of a symmetric matrix, rejecting materially indefinite input."""
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigendecomposition failed: {exc}") from exc
    norm = float(np.linalg.norm(a))
    if w[0] < -INDEFINITE_RTOL * norm:
        raise exc_type(
            f"{name} is not positive semidefinite "
            f"(smallest eigenvalue {w[0]:g}, Frobenius norm {norm:g})"
        )
    return w


def sym_sqrt(a, floor=DEFAULT_EIGENVALUE_FLOOR):
    """Symmetric PSD square root of a symmetric PSD matrix.

    Eigenvalues are clipped from below at ``floor`` before the root is
    taken, which absorbs roundoff-level negatives on nearly singular input.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric PSD matrix (tiny negative eigenvalues tolerated).
    floor : float
        Nonnegative eigenvalue floor.

    Returns
    -------
    (n, n) ndarray
        Symmetric PSD matrix S with S @ S equal to the eigenvalue-clipped
        input.

    Raises
    ------
    NotPSDError
        If the smallest eigenvalue is materially negative.
    """
    a = check_symmetric_matrix(a)
    w, q = eigh(a)
    norm = float(np.linalg.norm(a))
    if w[0] < -INDEFINITE_RTOL * norm:
        raise NotPSDError(
            f"matrix is not positive semidefinite "
            f"(smallest eigenvalue {w[0]:g}, Frobenius norm {norm:g})"
        )
    s = (q * np.sqrt(np.maximum(w, floor))) @ q.T
    return symmetrize(s)


def trace_sqrt(a):
    """Trace of the PSD square root: sum of sqrt(max(eigenvalue, 0)).

    Cheaper than ``sym_sqrt`` when only the trace is needed (no
    eigenvectors are formed).
    """
    a = check_symmetric_matrix(a)
    w = _checked_psd_eigvals(a)
    return float(np.sqrt(np.maximum(w, 0.0)).sum())


def polar(a):
    """Polar decomposition A = U @ P with U orthogonal and P symmetric PSD.

    Refuses numerically rank-deficient input (smallest singular value below
    ``RANK_RTOL`` times the largest), where the orthogonal factor is not
    unique, rather than completing it arbitrarily.

    Returns
    -------
    PolarFactors
    """
    a = check_square_matrix(a)
    # SVD route: backward stable, so the factors keep full orthogonality
    # even when cond(a) is large (forming a.T @ a would square it).
    u, s, vt = np.linalg.svd(a)
    if s[0] == 0.0 or s[-1] < RANK_RTOL * s[0]:
        raise RankDeficientError(
            f"matrix is numerically rank deficient "
            f"(singular values range {s[-1]:g} .. {s[0]:g}); "
            "the orthogonal polar factor is not unique"
        )
    unitary = u @ vt
    psd = symmetrize(vt.T @ (s[:, None] * vt))
    return PolarFactors(unitary=unitary, psd=psd)


def nuclear_norm(a):
    """Nuclear norm (sum of singular values) of a square real matrix.

    Evaluated as the trace of the PSD square root of A.T @ A.
    """
    a = check_square_matrix(a)
    return trace_sqrt(a.T @ a)
