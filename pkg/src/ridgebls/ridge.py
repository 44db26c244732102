"""Ridge solution, ridge inverse and the initial states of the two incremental solvers."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch
from .linalg import inverse_cholesky_upper, spd_inverse

__all__ = [
    "RecursiveState",
    "SqrtState",
    "check_lambda",
    "standard_ridge_solution",
    "ridge_inverse",
    "init_recursive_state",
    "init_sqrt_state",
    "assemble_partitioned_ridge_inverse",
]


def check_lambda(lam):
    lam = float(lam)
    if not (np.isfinite(lam) and lam > 0.0):
        raise ValueError(f"ridge parameter must be a positive finite number, got {lam!r}")
    return lam


def _as_matrix(x, name):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {x.shape}")
    return x


def _check_pair(a, y):
    a = _as_matrix(a, "A")
    y = _as_matrix(y, "Y")
    if a.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"A has {a.shape[0]} rows but Y has {y.shape[0]}")
    return a, y


def _hermitian(a, lam):
    g = a.T @ a
    g[np.diag_indices_from(g)] += lam
    return g


@dataclass(frozen=True)
class RecursiveState:
    """Inverse ``q = inv(A^T A + lam I)`` and ridge weights ``w`` for the rows seen so far."""

    q: np.ndarray
    w: np.ndarray
    lam: float

    @property
    def k(self):
        return self.q.shape[0]

    @property
    def c(self):
        return self.w.shape[1]


@dataclass(frozen=True)
class SqrtState:
    """Upper-triangular ``f`` with ``f f^T = inv(A^T A + lam I)`` and ridge weights ``w``."""

    f: np.ndarray
    w: np.ndarray
    lam: float

    @property
    def k(self):
        return self.f.shape[0]

    @property
    def c(self):
        return self.w.shape[1]


def standard_ridge_solution(a, y, lam):
    """Direct ridge solution ``inv(A^T A + lam I) A^T Y``.

    Solved with a fresh Cholesky solve, independent of the incremental paths;
    this is the reference every incremental result is compared against.
    """
    a, y = _check_pair(a, y)
    lam = check_lambda(lam)
    return scipy.linalg.solve(_hermitian(a, lam), a.T @ y, assume_a="pos")


def ridge_inverse(a, lam):
    """Explicit ridge inverse ``inv(A^T A + lam I) A^T`` (k x l).

    The solvers never form this; it exists for validation and for the
    generalized-inverse baseline, which stores it.
    """
    a = _as_matrix(a, "A")
    lam = check_lambda(lam)
    return scipy.linalg.solve(_hermitian(a, lam), a.T, assume_a="pos")


def init_recursive_state(a, y, lam):
    a, y = _check_pair(a, y)
    lam = check_lambda(lam)
    q = spd_inverse(_hermitian(a, lam))
    return RecursiveState(q=q, w=q @ (a.T @ y), lam=lam)


def init_sqrt_state(a, y, lam):
    a, y = _check_pair(a, y)
    lam = check_lambda(lam)
    f = inverse_cholesky_upper(_hermitian(a, lam))
    return SqrtState(f=f, w=f @ (f.T @ (a.T @ y)), lam=lam)


def assemble_partitioned_ridge_inverse(ridge_inv_l, b_tilde, a_p):
    """Ridge inverse of ``[A_l; A_p]`` from that of ``A_l`` and the gain ``b_tilde``.

    Returns ``[R_l - B A_p R_l | B]`` where ``R_l`` is the k x l ridge inverse of
    ``A_l`` and ``B = Q A_p^T inv(I + A_p Q A_p^T)``.
    """
    r = _as_matrix(ridge_inv_l, "ridge_inv_l")
    b = _as_matrix(b_tilde, "b_tilde")
    a_p = _as_matrix(a_p, "A_p")
    k = r.shape[0]
    if b.shape != (k, a_p.shape[0]) or a_p.shape[1] != k:
        raise DimensionMismatch(
            f"expected b_tilde {(k, a_p.shape[0])} and A_p (p, {k}); got {b.shape} and {a_p.shape}"
        )
    return np.hstack([r - b @ (a_p @ r), b])
