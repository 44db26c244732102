"""Dense SPD and triangular kernels.

Everything here is a thin, checked wrapper over LAPACK (``potrf``, ``potri``,
``trtri``).  Inputs are never modified.  Triangular outputs have their unused
half set to exact zeros so structure can be asserted with ``np.array_equal``.

Symmetric inputs are *not* checked for symmetry; only the lower triangle is
read by the factorizations.
"""

import numpy as np
from scipy.linalg import lapack

from .errors import DimensionMismatch, NotPositiveDefinite, SingularTriangular

__all__ = [
    "cholesky_lower",
    "invert_upper_triangular",
    "invert_lower_triangular",
    "spd_inverse",
    "upper_cholesky_of",
    "inverse_cholesky_upper",
    "symmetrize",
]


def _square(m, name="matrix"):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    return m


def symmetrize(m):
    """Return ``(m + m.T) / 2``."""
    return 0.5 * (m + m.T)


def cholesky_lower(m):
    """Lower Cholesky factor ``L`` with ``L @ L.T == m`` and positive diagonal.

    Raises:
        NotPositiveDefinite: a pivot is ``<= 0`` or the input is not finite.
    """
    m = _square(m)
    if not np.all(np.isfinite(m)):
        raise NotPositiveDefinite("matrix has non-finite entries")
    c, info = lapack.dpotrf(m, lower=1, clean=1)
    if info > 0:
        raise NotPositiveDefinite(f"leading minor of order {info} is not positive definite")
    if info < 0:  # pragma: no cover - argument error inside LAPACK
        raise ValueError(f"dpotrf: illegal value in argument {-info}")
    return c


def _invert_triangular(t, lower):
    t = _square(t, "triangular matrix")
    d = np.diag(t)
    if not np.all(np.isfinite(d)) or np.any(d == 0.0):
        raise SingularTriangular("triangular matrix has a zero or non-finite diagonal entry")
    inv, info = lapack.dtrtri(t, lower=int(lower))
    if info != 0:
        raise SingularTriangular(f"dtrtri failed with info={info}")
    return np.tril(inv) if lower else np.triu(inv)


def invert_upper_triangular(u):
    """Inverse of an upper-triangular matrix (strict lower part ignored)."""
    return _invert_triangular(u, lower=False)


def invert_lower_triangular(lo):
    """Inverse of a lower-triangular matrix (strict upper part ignored)."""
    return _invert_triangular(lo, lower=True)


def spd_inverse(m):
    """Inverse of a symmetric positive definite matrix via its Cholesky factor.

    The result is exactly symmetric.
    """
    c = cholesky_lower(m)
    inv, info = lapack.dpotri(c, lower=1)
    if info != 0:
        raise NotPositiveDefinite(f"dpotri failed with info={info}")
    low = np.tril(inv)
    return low + np.tril(low, -1).T


def upper_cholesky_of(m):
    """Upper-triangular ``V`` with ``V @ V.T == m``.

    This is not the transpose of the usual factor.  Reversing the row and
    column order turns ``m`` into ``J m J`` whose lower factor ``L`` gives
    ``m = (J L J)(J L J).T`` with ``J L J`` upper triangular.
    """
    m = _square(m)
    low = cholesky_lower(m[::-1, ::-1])
    return np.ascontiguousarray(low[::-1, ::-1])


def inverse_cholesky_upper(m):
    """Upper-triangular ``F`` with ``F @ F.T == inv(m)``.

    Computed as the transpose of the inverted lower Cholesky factor:
    ``m = L L^T`` gives ``inv(m) = L^-T L^-1``.
    """
    low = cholesky_lower(m)
    return np.ascontiguousarray(invert_lower_triangular(low).T)
