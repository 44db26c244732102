import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ridgebls.errors import NotPositiveDefinite, SingularTriangular
from ridgebls.linalg import (
    cholesky_lower,
    inverse_cholesky_upper,
    invert_upper_triangular,
    spd_inverse,
    upper_cholesky_of,
)

from conftest import random_spd

M2 = np.array([[2.0, 1.0], [1.0, 1.0]])


def adjugate_inverse_2x2(m):
    (a, b), (c, d) = m
    return np.array([[d, -b], [-c, a]]) / (a * d - b * c)


class TestCholeskyLower:
    def test_identity(self):
        np.testing.assert_array_equal(cholesky_lower(np.eye(2)), np.eye(2))

    def test_scalar(self):
        np.testing.assert_array_equal(cholesky_lower([[4.0]]), [[2.0]])

    def test_hand_case(self):
        np.testing.assert_allclose(cholesky_lower([[4.0, 2.0], [2.0, 2.0]]), [[2.0, 0.0], [1.0, 1.0]], atol=1e-15)

    def test_strict_upper_is_zero(self, rng):
        low = cholesky_lower(random_spd(rng, 7))
        assert np.array_equal(np.triu(low, 1), np.zeros((7, 7)))
        assert np.all(np.diag(low) > 0)

    @pytest.mark.parametrize(
        "m",
        [
            [[1.0, 2.0], [2.0, 1.0]],
            [[0.0]],
            [[-1.0]],
            [[np.nan, 0.0], [0.0, 1.0]],
            [[np.inf]],
        ],
    )
    def test_not_positive_definite(self, m):
        with pytest.raises(NotPositiveDefinite):
            cholesky_lower(m)

    def test_input_untouched(self, rng):
        m = random_spd(rng, 5)
        before = m.copy()
        cholesky_lower(m)
        np.testing.assert_array_equal(m, before)


class TestInvertUpper:
    def test_identity(self):
        np.testing.assert_array_equal(invert_upper_triangular(np.eye(2)), np.eye(2))

    def test_diagonal(self):
        np.testing.assert_array_equal(invert_upper_triangular(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))

    def test_unit_bidiagonal(self):
        np.testing.assert_array_equal(invert_upper_triangular([[1.0, 1.0], [0.0, 1.0]]), [[1.0, -1.0], [0.0, 1.0]])

    @pytest.mark.parametrize("d", [0.0, np.nan, np.inf])
    def test_singular(self, d):
        with pytest.raises(SingularTriangular):
            invert_upper_triangular([[1.0, 2.0], [0.0, d]])

    def test_product_is_identity(self, rng):
        u = np.triu(rng.standard_normal((9, 9))) + 4 * np.eye(9)
        inv = invert_upper_triangular(u)
        np.testing.assert_allclose(u @ inv, np.eye(9), atol=1e-12)
        assert np.array_equal(np.tril(inv, -1), np.zeros((9, 9)))


class TestSpdInverse:
    def test_identity(self):
        np.testing.assert_array_equal(spd_inverse(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(spd_inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]), rtol=1e-15)

    def test_adjugate(self):
        expected = adjugate_inverse_2x2(M2)
        np.testing.assert_allclose(expected, [[1.0, -1.0], [-1.0, 2.0]])
        np.testing.assert_allclose(spd_inverse(M2), expected, atol=1e-14)

    def test_exactly_symmetric(self, rng):
        inv = spd_inverse(random_spd(rng, 12))
        assert np.array_equal(inv, inv.T)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            spd_inverse([[1.0, 3.0], [3.0, 1.0]])


class TestUpperCholesky:
    def test_identity(self):
        np.testing.assert_array_equal(upper_cholesky_of(np.eye(2)), np.eye(2))

    def test_diagonal(self):
        np.testing.assert_array_equal(upper_cholesky_of(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_back_substitution_case(self):
        # V = [[a, b], [0, d]]: d^2 = 1, b d = 1, a^2 + b^2 = 2  ->  a = b = d = 1
        np.testing.assert_allclose(upper_cholesky_of(M2), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)

    def test_differs_from_conventional_factor(self):
        assert not np.allclose(upper_cholesky_of(M2), cholesky_lower(M2).T)


class TestInverseCholeskyUpper:
    def test_identity(self):
        np.testing.assert_array_equal(inverse_cholesky_upper(np.eye(2)), np.eye(2))

    def test_diagonal(self):
        np.testing.assert_allclose(inverse_cholesky_upper(np.diag([4.0, 9.0])), np.diag([0.5, 1.0 / 3.0]), rtol=1e-15)

    def test_back_substitution_case(self):
        # F F^T = inv(M2) = [[1, -1], [-1, 2]]: d = sqrt2, b = -1/sqrt2, a = 1/sqrt2
        r = np.sqrt(2.0)
        np.testing.assert_allclose(inverse_cholesky_upper(M2), [[1 / r, -1 / r], [0.0, r]], atol=1e-15)


spd_cases = st.tuples(st.integers(1, 50), st.integers(0, 2**32 - 1))


def _rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@settings(max_examples=40, deadline=None)
@given(spd_cases)
def test_cholesky_reconstructs(case):
    n, seed = case
    m = random_spd(np.random.default_rng(seed), n)
    low = cholesky_lower(m)
    assert _rel(low @ low.T, m) < 1e-10


@settings(max_examples=40, deadline=None)
@given(spd_cases)
def test_upper_cholesky_reconstructs(case):
    n, seed = case
    m = random_spd(np.random.default_rng(seed), n)
    v = upper_cholesky_of(m)
    assert _rel(v @ v.T, m) < 1e-10
    assert np.array_equal(np.tril(v, -1), np.zeros((n, n)))


@settings(max_examples=40, deadline=None)
@given(spd_cases)
def test_inverse_cholesky_inverts(case):
    n, seed = case
    m = random_spd(np.random.default_rng(seed), n)
    f = inverse_cholesky_upper(m)
    assert np.abs(f @ f.T @ m - np.eye(n)).max() < 1e-9
    assert np.array_equal(np.tril(f, -1), np.zeros((n, n)))


@settings(max_examples=40, deadline=None)
@given(spd_cases)
def test_triangular_inverse_is_involution(case):
    n, seed = case
    rng = np.random.default_rng(seed)
    # off-diagonals scaled by 1/n keep the condition number bounded
    u = np.triu(rng.uniform(-1, 1, (n, n))) / n
    u[np.diag_indices(n)] = rng.uniform(1.0, 2.0, n)
    twice = invert_upper_triangular(invert_upper_triangular(u))
    assert np.abs(twice - u).max() <= 1e-12 * max(1.0, np.abs(u).max())
