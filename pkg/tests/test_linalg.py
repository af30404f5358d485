"""Tests for the symmetric linear-algebra primitives and the eigen oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqalloc.errors import ConvergenceError, DimensionMismatchError
from seqalloc.iep import interlaces
from seqalloc.linalg import (
    check_orthonormal,
    eig_oracle,
    eigvals_oracle,
    plane_rotation,
    rank1_add,
)

from conftest import random_orthonormal


class TestRank1Add:
    def test_hand_worked_two_by_two(self):
        # trace must grow by ||c||^2 = 2 and the determinant work out to 8
        a = np.diag([3.0, 1.0])
        c = np.array([math.sqrt(0.5), math.sqrt(1.5)])
        out = rank1_add(a, c)
        expected = np.array(
            [[3.5, math.sqrt(3.0) / 2.0], [math.sqrt(3.0) / 2.0, 2.5]]
        )
        np.testing.assert_allclose(out, expected, rtol=0, atol=1e-15)
        assert abs(np.trace(out) - 6.0) < 1e-14
        assert abs(np.linalg.det(out) - 8.0) < 1e-13

    def test_zero_update(self):
        out = rank1_add(np.eye(2), np.zeros(2))
        np.testing.assert_array_equal(out, np.eye(2))

    def test_scalar_case(self):
        out = rank1_add(np.zeros((1, 1)), np.array([2.0]))
        np.testing.assert_array_equal(out, [[4.0]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            rank1_add(np.eye(3), np.ones(2))

    def test_result_exactly_symmetric(self, rng):
        a = rng.standard_normal((5, 5))
        a = (a + a.T) / 2
        c = rng.standard_normal(5)
        out = rank1_add(a, c)
        assert np.array_equal(out, out.T)

    @settings(derandomize=True, max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**31))
    def test_forward_interlacing(self, n, seed):
        # Weyl's direction: the updated spectrum interlaces the original.
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, n))
        a = (a + a.T) / 2
        c = rng.standard_normal(n)
        lam = eigvals_oracle(a)
        lam_hat = eigvals_oracle(rank1_add(a, c))
        scale = max(1.0, float(np.max(np.abs(lam_hat))))
        assert interlaces(lam, lam_hat, tol=1e-10 * scale)


class TestEigOracle:
    def test_diagonal_input(self):
        values, basis = eig_oracle(np.diag([9.0, 9.0]))
        np.testing.assert_array_equal(values, [9.0, 9.0])
        check_orthonormal(basis)

    def test_two_by_two_from_trace_and_det(self):
        a = np.array([[3.5, math.sqrt(3.0) / 2.0], [math.sqrt(3.0) / 2.0, 2.5]])
        # independent 2x2 solution: roots of t^2 - (tr) t + det
        tr, det = np.trace(a), np.linalg.det(a)
        disc = math.sqrt(tr * tr - 4.0 * det)
        expected = np.array([(tr + disc) / 2.0, (tr - disc) / 2.0])
        values, basis = eig_oracle(a)
        np.testing.assert_allclose(values, expected, atol=1e-12)
        np.testing.assert_allclose(values, [4.0, 2.0], atol=1e-12)
        np.testing.assert_allclose(basis @ np.diag(values) @ basis.T, a, atol=1e-12)

    def test_construct_then_decompose_roundtrip(self, rng):
        d = np.sort(rng.uniform(-5.0, 5.0, 8))[::-1]
        q = random_orthonormal(rng, 8)
        a = q @ np.diag(d) @ q.T
        a = (a + a.T) / 2
        values, basis = eig_oracle(a)
        np.testing.assert_allclose(values, d, atol=1e-10)
        np.testing.assert_allclose(basis @ np.diag(values) @ basis.T, a, atol=1e-10)

    def test_spectrum_sorted_and_basis_orthonormal(self, rng):
        a = rng.standard_normal((12, 12))
        a = (a + a.T) / 2
        values, basis = eig_oracle(a)
        assert np.all(values[:-1] >= values[1:])
        check_orthonormal(basis, tol=1e-10)

    def test_nonconvergence_raises_with_residual(self, rng):
        a = rng.standard_normal((6, 6))
        a = (a + a.T) / 2
        with pytest.raises(ConvergenceError) as err:
            eig_oracle(a, tol=1e-12, max_sweeps=1)
        assert err.value.residual > 0

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            eig_oracle(np.array([[1.0, 2.0], [0.0, 1.0]]))


class TestPlaneRotation:
    def test_identity_rotation(self, rng):
        u = random_orthonormal(rng, 4)
        out = plane_rotation(u, 1, 1.0, 0.0)
        np.testing.assert_array_equal(out, u)

    def test_quarter_turn(self):
        out = plane_rotation(np.eye(2), 0, 0.0, 1.0)
        np.testing.assert_array_equal(out[:, 0], [0.0, 1.0])
        np.testing.assert_array_equal(out[:, 1], [-1.0, 0.0])

    def test_orthonormality_preserved(self, rng):
        u = random_orthonormal(rng, 6)
        out = plane_rotation(u, 2, 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
        gram = out.T @ out
        assert np.max(np.abs(gram - np.eye(6))) < 1e-14

    def test_other_columns_untouched(self, rng):
        u = random_orthonormal(rng, 5)
        out = plane_rotation(u, 1, 0.6, 0.8)
        for j in (0, 3, 4):
            assert np.array_equal(out[:, j], u[:, j])

    def test_bad_rotation_pair(self):
        with pytest.raises(ValueError):
            plane_rotation(np.eye(3), 0, 0.9, 0.9)

    def test_plane_out_of_range(self):
        with pytest.raises(IndexError):
            plane_rotation(np.eye(3), 2, 1.0, 0.0)

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(
        st.integers(min_value=2, max_value=10),
        st.integers(min_value=0, max_value=2**31),
        st.floats(min_value=0.0, max_value=2.0 * math.pi),
    )
    def test_gram_preserved_for_any_angle(self, n, seed, angle):
        rng = np.random.default_rng(seed)
        u = random_orthonormal(rng, n)
        plane = int(rng.integers(0, n - 1))
        out = plane_rotation(u, plane, math.cos(angle), math.sin(angle), tol=1e-9)
        gram_in = u.T @ u
        gram_out = out.T @ out
        assert np.max(np.abs(gram_out - gram_in)) <= 2.0 * np.finfo(float).eps * n + 1e-15
