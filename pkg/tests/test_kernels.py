"""Tests for the vectorized transform matrix, kernel extraction, membership
predicates, and the minimal-order scan."""

import math

import numpy as np
import pytest

from opcheck import kernels as kn
from opcheck import matcore as mc
from opcheck import transforms as tf
from opcheck.errors import DimensionMismatch, ToleranceInconsistency
from opcheck.generators import rng_for

P = mc.DEFAULT_POLICY
TK = tf.TransformKind
JORDAN2 = np.array([[1, 1], [0, 1]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)


def _cgauss(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)


class TestTransformMatrix:
    def test_identity_pair_is_zero(self):
        for n in (1, 2, 3):
            tm = kn.transform_matrix(TK.TRIANGLE, mc.eye(n), mc.eye(n), 2)
            assert tm.shape == (n * n, n * n)
            assert mc.frob(tm) <= 1e-13

    def test_scalar_case(self):
        tm = kn.transform_matrix(
            TK.TRIANGLE, np.array([[3.0]], dtype=complex), np.array([[2.0]], dtype=complex), 1
        )
        np.testing.assert_allclose(tm, [[5.0]], atol=1e-14)

    def test_matches_direct_transform(self):
        rng = rng_for(0, 100)
        for _ in range(8):
            n = int(rng.integers(1, 6))
            m = int(rng.integers(1, 5))
            b, a = _cgauss(rng, n), _cgauss(rng, n)
            for kind in TK:
                tm = kn.transform_matrix(kind, b, a, m)
                for _ in range(100):
                    x = _cgauss(rng, n)
                    lhs = tm @ mc.vectorize(x)
                    rhs = mc.vectorize(tf.transform(kind, b, a, x, m))
                    assert np.abs(lhs - rhs).max() <= P.rtol * tf.defect_scale(b, a, x, m)

    def test_rejects_mismatched_shapes(self):
        with pytest.raises(DimensionMismatch):
            kn.transform_matrix(TK.DELTA, mc.eye(2), mc.eye(3), 1)


class TestKernel:
    def test_scalar_cancellation(self):
        basis = kn.kernel(
            TK.TRIANGLE, np.array([[0.5]], dtype=complex), np.array([[2.0]], dtype=complex), 1, P
        )
        assert basis.dim == 1

    def test_diag_two_zero_has_trivial_kernel(self):
        a = np.diag([2.0, 0.0]).astype(complex)
        assert kn.kernel(TK.TRIANGLE, a, a, 1, P).dim == 0

    def test_rank_one_projection_kernel(self):
        a = mc.block_diag(mc.eye(1), E12)
        basis = kn.kernel(TK.TRIANGLE, mc.adjoint(a), a, 1, P)
        assert basis.dim == 1
        e11 = mc.zeros(3, 3)
        e11[0, 0] = 1.0
        np.testing.assert_allclose(basis.basis[0], e11, atol=1e-10)

    def test_zero_map_gives_full_kernel(self):
        basis = kn.kernel(TK.TRIANGLE, mc.eye(3), mc.eye(3), 2, P)
        assert basis.dim == 9

    def test_basis_orthonormal(self):
        a = np.diag([2.0, 0.5, 1.0]).astype(complex)
        basis = kn.kernel(TK.TRIANGLE, a, a, 1, P)
        assert basis.dim >= 1
        for i, x in enumerate(basis.basis):
            for j, y in enumerate(basis.basis):
                inner = np.vdot(mc.vectorize(y), mc.vectorize(x))
                target = 1.0 if i == j else 0.0
                assert abs(inner - target) <= 1e-10

    def test_soundness_and_completeness(self):
        # every basis element is annihilated; anything orthogonal to the
        # kernel is not
        rng = rng_for(1, 101)
        a = np.diag([2.0, 0.5, -1.0]).astype(complex)
        b = mc.adjoint(mc.inverse(a, P))
        for m in (1, 2):
            basis = kn.kernel(TK.TRIANGLE, b, a, m, P)
            assert 0 < basis.dim < 9
            thr = tf.defect_threshold(P, b, a, mc.eye(3), m)
            for x in basis.basis:
                assert mc.frob(tf.triangle(b, a, x, m)) <= thr
            for _ in range(10):
                y = _cgauss(rng, 3)
                for x in basis.basis:
                    y -= np.vdot(mc.vectorize(x), mc.vectorize(y)) * x
                if mc.frob(y) < 1e-6:
                    continue
                y /= mc.frob(y)
                assert mc.frob(tf.triangle(b, a, y, m)) > thr

    def test_sample_is_in_kernel_and_deterministic(self):
        a = np.diag([2.0, 0.5]).astype(complex)
        basis = kn.kernel(TK.DELTA, a, a, 2, P)
        x1 = basis.sample(rng_for(7, 1))
        x2 = basis.sample(rng_for(7, 1))
        np.testing.assert_array_equal(x1, x2)
        assert abs(mc.frob(x1) - 1.0) <= 1e-12
        assert mc.frob(tf.delta(a, a, x1, 2)) <= tf.defect_threshold(P, a, a, x1, 2)

    def test_sample_empty_kernel_rejected(self):
        a = np.diag([2.0, 0.0]).astype(complex)
        basis = kn.kernel(TK.TRIANGLE, a, a, 1, P)
        with pytest.raises(ValueError):
            basis.sample(rng_for(0, 0))

    def test_json_document(self):
        a = np.diag([2.0, 0.5]).astype(complex)
        doc = kn.kernel(TK.TRIANGLE, mc.adjoint(mc.inverse(a, P)), a, 1, P).to_json()
        assert doc["kind"] == "triangle" and doc["dim"] == len(doc["basis"])


class TestMembership:
    def test_identity_pair_always_member(self):
        rng = rng_for(2, 102)
        x = _cgauss(rng, 3)
        assert kn.is_left_x_m_invertible(mc.eye(3), mc.eye(3), x, 2, P)

    def test_jordan_isometry_orders(self):
        b = mc.adjoint(JORDAN2)
        assert kn.is_left_x_m_invertible(b, JORDAN2, mc.eye(2), 3, P)
        assert not kn.is_left_x_m_invertible(b, JORDAN2, mc.eye(2), 2, P)

    def test_adjoint_membership(self):
        rng = rng_for(3, 103)
        a = _cgauss(rng, 3)
        assert kn.is_x_m_adjoint(a, a, mc.eye(3), 2, P)
        h = (a + mc.adjoint(a)) / 2
        assert kn.is_x_m_adjoint(mc.adjoint(h), h, mc.eye(3), 1, P)
        assert not kn.is_x_m_adjoint(mc.adjoint(E12), E12, mc.eye(2), 2, P)


class TestMinimalOrder:
    def test_jordan_delta_order_three(self):
        res = kn.minimal_order(TK.DELTA, mc.adjoint(JORDAN2), JORDAN2, mc.eye(2), 5, P)
        assert res.member and res.minimal_order == 3

    def test_jordan_triangle_order_three(self):
        res = kn.minimal_order(TK.TRIANGLE, mc.adjoint(JORDAN2), JORDAN2, mc.eye(2), 5, P)
        assert res.member and res.minimal_order == 3

    def test_selfadjoint_order_one(self):
        rng = rng_for(4, 104)
        g = _cgauss(rng, 3)
        h = (g + mc.adjoint(g)) / 2
        res = kn.minimal_order(TK.DELTA, mc.adjoint(h), h, mc.eye(3), 4, P)
        assert res.minimal_order == 1

    def test_nilpotent_never_isometric(self):
        res = kn.minimal_order(TK.TRIANGLE, mc.adjoint(E12), E12, mc.eye(2), 5, P)
        assert not res.member and res.minimal_order is None
        assert all(r > t for r, t in zip(res.residuals, res.thresholds))

    def test_bound_validated(self):
        with pytest.raises(ValueError):
            kn.minimal_order(TK.DELTA, E12, E12, mc.eye(2), 0, P)

    def test_tolerance_inconsistency_detected(self):
        # weight = exact kernel element plus a tiny component along an
        # expanding direction (defect grows 3x per order); under a flat
        # absolute-only policy the early orders pass and later ones fail,
        # which must surface as an error instead of a bogus minimal order
        a = np.diag([2.0, 0.5]).astype(complex)
        e11 = mc.zeros(2, 2)
        e11[0, 0] = 1.0
        e12 = mc.zeros(2, 2)
        e12[0, 1] = 1.0  # in the kernel: 2 * x * 0.5 - x = 0
        x = e12 + 1e-12 * e11
        flat = mc.NumericPolicy(atol=2e-11, rtol=0.0)
        with pytest.raises(ToleranceInconsistency):
            kn.minimal_order(TK.TRIANGLE, a, a, x, 6, flat)

    def test_result_json(self):
        res = kn.minimal_order(TK.DELTA, mc.adjoint(JORDAN2), JORDAN2, mc.eye(2), 4, P)
        doc = res.to_json()
        assert doc["minimal_order"] == 3 and len(doc["residuals"]) == 4
