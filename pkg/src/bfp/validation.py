"""Input validation helpers.

All public entry points funnel their array arguments through these
functions, so the numerical code below them can assume float64 arrays
with the documented properties (symmetry, strict positivity, finiteness)
and never re-checks them.
"""

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NonFiniteError,
    NotPDError,
    NotPositiveError,
)

__all__ = [
    "symmetrize",
    "check_symmetric_matrix",
    "check_square_matrix",
    "check_positive_vector",
    "check_positive_definite",
    "check_dimensions",
]


def symmetrize(a):
    """Return the symmetric part (a + a.T) / 2."""
    return 0.5 * (a + a.T)


def check_square_matrix(a, name="matrix"):
    """Validate that ``a`` is a finite real square matrix; return it as float64."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(
            f"{name} must be square, got shape {a.shape}"
        )
    if a.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be at least 1x1")
    if not np.isfinite(a).all():
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    return a


def check_symmetric_matrix(a, name="matrix"):
    """Validate and symmetrize a square matrix.

    Symmetry is enforced by averaging with the transpose, so callers never
    see asymmetric rounding noise.
    """
    return symmetrize(check_square_matrix(a, name))


def check_positive_vector(v, name="v"):
    """Validate that ``v`` is a finite, strictly positive 1-D vector."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatchError(
            f"{name} must be a 1-D vector of length >= 1, got shape {v.shape}"
        )
    if not np.isfinite(v).all():
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    if not (v > 0).all():
        bad = int(np.argmin(v))
        raise NotPositiveError(
            f"{name}[{bad}] = {v[bad]!r} is not strictly positive"
        )
    return v


def check_positive_definite(m, name="matrix"):
    """Validate symmetry and strict positive definiteness via eigenvalues.

    Intended for boundary checks (solver entry, CLI, estimator fit); the
    inner numerical kernels only re-raise on material indefiniteness.
    """
    m = check_symmetric_matrix(m, name)
    smallest = float(np.linalg.eigvalsh(m)[0])
    if smallest <= 0.0:
        raise NotPDError(
            f"{name} is not positive definite (smallest eigenvalue {smallest:g})"
        )
    return m


def check_dimensions(m, v):
    """Check that matrix ``m`` and vector ``v`` have matching dimension."""
    if m.shape[0] != v.shape[0]:
        raise DimensionMismatchError(
            f"matrix is {m.shape[0]}x{m.shape[1]} but vector has length {v.shape[0]}"
        )
