"""Incremental output-weight updates when new input rows arrive.

Three solvers share the same call shape ``update(state, batch) -> state``:

* :func:`update_recursive` keeps ``Q = inv(A^T A + lam I)`` and updates it with
  the matrix inversion lemma.
* :func:`update_sqrt` keeps an upper-triangular ``F`` with ``F F^T = Q`` and
  multiplies it by an upper-triangular correction factor.
* :func:`update_generalized_existing` is the earlier stepwise algorithm, which
  grows an approximate pseudoinverse of every row seen so far.

Both proposed solvers reproduce the direct ridge solution exactly (up to
rounding) for any positive ``lam``.  The baseline only does so as
``lam -> 0``.  States are immutable, and every update returns a new one.
"""

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import blas

from .errors import DimensionMismatch, NumericalBreakdown
from .linalg import inverse_cholesky_upper, spd_inverse, symmetrize, upper_cholesky_of
from .ridge import RecursiveState, SqrtState, check_lambda, ridge_inverse

__all__ = [
    "Branch",
    "IncrementBatch",
    "BaselineState",
    "select_branch",
    "ridge_gain",
    "update_recursive",
    "update_sqrt",
    "init_baseline_state",
    "existing_gain",
    "update_generalized_existing",
    "DEFAULT_C_PINV_LAMBDA",
]

# Ridge parameter used to approximate the pseudoinverse of C in the baseline.
DEFAULT_C_PINV_LAMBDA = 1e-8


class Branch(enum.Enum):
    LARGE_BATCH = "large"  # p >= k: invert a k x k matrix
    SMALL_BATCH = "small"  # p < k: invert a p x p matrix


def select_branch(p, k):
    """Pick the cheaper formulation; the tie ``p == k`` goes to the large-batch form."""
    if p < 1 or k < 1:
        raise ValueError(f"p and k must be >= 1, got p={p}, k={k}")
    return Branch.LARGE_BATCH if p >= k else Branch.SMALL_BATCH


@dataclass(frozen=True)
class IncrementBatch:
    """New expanded-input rows ``a_p`` (p x k) and their targets ``y_p`` (p x c)."""

    a_p: np.ndarray
    y_p: np.ndarray

    def __post_init__(self):
        a_p = np.asarray(self.a_p, dtype=np.float64)
        y_p = np.asarray(self.y_p, dtype=np.float64)
        if y_p.ndim == 1:
            y_p = y_p[:, None]
        if a_p.ndim != 2 or y_p.ndim != 2:
            raise DimensionMismatch("a_p and y_p must be 2-D")
        if a_p.shape[0] < 1 or a_p.shape[0] != y_p.shape[0]:
            raise DimensionMismatch(
                f"batch needs p >= 1 matching rows, got a_p {a_p.shape} and y_p {y_p.shape}"
            )
        object.__setattr__(self, "a_p", a_p)
        object.__setattr__(self, "y_p", y_p)

    @property
    def p(self):
        return self.a_p.shape[0]


def _check_batch(k, c, batch):
    if batch.a_p.shape[1] != k or batch.y_p.shape[1] != c:
        raise DimensionMismatch(
            f"state expects (p, {k}) inputs and (p, {c}) targets, "
            f"got {batch.a_p.shape} and {batch.y_p.shape}"
        )
    return batch.a_p, batch.y_p


def _eye_plus(m):
    out = m.copy()
    out[np.diag_indices_from(out)] += 1.0
    return out


def _solve_general(m, rhs):
    try:
        x = scipy.linalg.solve(m, rhs, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalBreakdown(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise NumericalBreakdown("non-finite result from linear solve")
    return x


def ridge_gain(q, a_p):
    """Gain ``Q A_p^T inv(I_p + A_p Q A_p^T)`` (k x p) for appending rows ``a_p``."""
    qa = q @ a_p.T
    return qa @ spd_inverse(_eye_plus(a_p @ qa))


def update_recursive(state: RecursiveState, batch: IncrementBatch, branch: Branch | None = None) -> RecursiveState:
    """Absorb ``batch`` into ``Q`` and ``W``.

    ``branch`` forces a formulation; both are exact for any ``p``, the
    default just picks the one with the smaller inverse.
    """
    a_p, y_p = _check_batch(state.k, state.c, batch)
    p, k = a_p.shape
    q = state.q
    resid = y_p - a_p @ state.w
    if (branch or select_branch(p, k)) is Branch.LARGE_BATCH:
        # Q' = inv(I + Q A^T A) Q ; W' = W + Q' A^T (Y - A W)
        m = _eye_plus((q @ a_p.T) @ a_p)
        q_new = symmetrize(_solve_general(m, q))
        w_new = state.w + q_new @ (a_p.T @ resid)
    else:
        qa = q @ a_p.T
        b = qa @ spd_inverse(_eye_plus(a_p @ qa))
        q_new = symmetrize(q - b @ qa.T)
        w_new = state.w + b @ resid
    return RecursiveState(q=q_new, w=w_new, lam=state.lam)


def _triu_left(f, b, trans=False):
    """``f @ b`` (or ``f.T @ b``) for upper-triangular ``f``."""
    return blas.dtrmm(1.0, f, b, trans_a=int(trans))


def update_sqrt(state: SqrtState, batch: IncrementBatch, branch: Branch | None = None) -> SqrtState:
    """Absorb ``batch`` into ``F`` and ``W``; the new factor is ``F V`` with ``V`` upper triangular."""
    a_p, y_p = _check_batch(state.k, state.c, batch)
    p, k = a_p.shape
    f = state.f
    resid = y_p - a_p @ state.w
    s = _triu_left(f, np.ascontiguousarray(a_p.T), trans=True)  # F^T A_p^T, k x p
    if (branch or select_branch(p, k)) is Branch.LARGE_BATCH:
        v = inverse_cholesky_upper(_eye_plus(s @ s.T))
        f_new = blas.dtrmm(1.0, v, f, side=1)  # F V
        g = a_p.T @ resid
        w_new = state.w + _triu_left(f_new, _triu_left(f_new, g, trans=True))
    else:
        s_tilde = s @ spd_inverse(_eye_plus(s.T @ s))
        v = upper_cholesky_of(symmetrize(_eye_plus(-(s_tilde @ s.T))))
        f_new = blas.dtrmm(1.0, v, f, side=1)
        w_new = state.w + _triu_left(f, s_tilde @ resid)
    return SqrtState(f=f_new, w=w_new, lam=state.lam)


@dataclass(frozen=True)
class BaselineState:
    """State of the generalized-inverse stepwise algorithm.

    Keeps every expanded-input row (``a_l``) and the approximate pseudoinverse
    ``a_l_pinv`` (k x l), so memory grows linearly with the number of samples.
    """

    a_l: np.ndarray
    a_l_pinv: np.ndarray
    w: np.ndarray
    lam: float

    @property
    def k(self):
        return self.a_l.shape[1]

    @property
    def c(self):
        return self.w.shape[1]

    @property
    def nbytes(self):
        return self.a_l.nbytes + self.a_l_pinv.nbytes + self.w.nbytes


def init_baseline_state(a, y, lam):
    a = np.asarray(a, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if a.ndim != 2 or y.ndim != 2 or a.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"A {a.shape} and Y {y.shape} must be 2-D with equal rows")
    lam = check_lambda(lam)
    pinv = ridge_inverse(a, lam)
    return BaselineState(a_l=a.copy(), a_l_pinv=pinv, w=pinv @ y, lam=lam)


def _c_is_zero(c, a_p, lam, c_zero_tol):
    scale = max(1.0, float(np.max(np.abs(a_p))))
    tol = np.sqrt(lam) if c_zero_tol is None else c_zero_tol
    return float(np.max(np.abs(c))) <= tol * scale


def existing_gain(a_l, a_l_pinv, a_p, lam, c_zero_tol=None, c_pinv_lambda=DEFAULT_C_PINV_LAMBDA):
    """Gain matrix ``B`` (k x p) of the stepwise baseline.

    Returns ``(B, D^T, c_is_zero)``.

    With ``D^T = A_p A_l^+`` and ``C = A_p^T - A_l^T D``: when C is treated as
    zero, ``B = Dbar inv(I + A_p Dbar)`` (p < k) or ``inv(I + Dbar A_p) Dbar``
    (p >= k) with ``Dbar = A_l^+ D``.  Otherwise ``B = (C^T)^+``, which is k x p.

    With the ridge-approximated ``A_l^+`` one has ``C = lam Q A_p^T`` exactly,
    so C never vanishes numerically.  By default C counts as zero when
    ``max|C| <= sqrt(lam) * max(1, max|A_p|)``.  That separates the
    ridge-approximation residue (about ``lam / sigma^2``) from directions
    outside the row space of ``A_l`` (order one).  Pass ``c_zero_tol`` to use
    a fixed factor instead of ``sqrt(lam)``.
    """
    p, k = a_p.shape
    d_t = a_p @ a_l_pinv
    c = a_p.T - a_l.T @ d_t.T
    zero = _c_is_zero(c, a_p, lam, c_zero_tol)
    if zero:
        d_bar = a_l_pinv @ d_t.T
        if select_branch(p, k) is Branch.LARGE_BATCH:
            b = _solve_general(_eye_plus(d_bar @ a_p), d_bar)
        else:
            b = d_bar @ spd_inverse(symmetrize(_eye_plus(a_p @ d_bar)))
    else:
        b = ridge_inverse(c.T, c_pinv_lambda)
    return b, d_t, zero


def update_generalized_existing(
    state: BaselineState,
    batch: IncrementBatch,
    c_zero_tol=None,
    c_pinv_lambda=DEFAULT_C_PINV_LAMBDA,
) -> BaselineState:
    a_p, y_p = _check_batch(state.k, state.c, batch)
    b, d_t, _ = existing_gain(
        state.a_l, state.a_l_pinv, a_p, state.lam, c_zero_tol=c_zero_tol, c_pinv_lambda=c_pinv_lambda
    )
    w_new = state.w + b @ (y_p - a_p @ state.w)
    pinv_new = np.hstack([state.a_l_pinv - b @ d_t, b])
    if not np.all(np.isfinite(w_new)):
        raise NumericalBreakdown("non-finite weights in baseline update")
    return BaselineState(
        a_l=np.vstack([state.a_l, a_p]), a_l_pinv=pinv_new, w=w_new, lam=state.lam
    )
