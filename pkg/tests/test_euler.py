import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import analysis, corpus_labels
from ptframe4.euler import (
    EulerAngles,
    angle_ode_residuals,
    curvature_relation_residuals,
    extract_euler_angles,
    frame_rotation_matrix,
    rotation_matrix,
)
from ptframe4.exceptions import NotRotationError, TangentMismatchError
from ptframe4.frenet import FrameSample


def test_identity():
    a = extract_euler_angles(np.eye(3))
    assert (a.theta, a.phi, a.psi, a.gimbal) == (0.0, 0.0, 0.0, False)


def test_rotation_in_first_two_normals():
    a = extract_euler_angles(rotation_matrix(0.0, 0.0, math.pi / 3))
    assert a.theta == pytest.approx(0.0, abs=1e-15)
    assert a.phi == pytest.approx(0.0, abs=1e-15)
    assert a.psi == pytest.approx(math.pi / 3, abs=1e-15)


def test_gimbal():
    R = rotation_matrix(math.pi / 2, 0.4, 0.9)
    assert R[2, 0] == pytest.approx(-1.0)
    a = extract_euler_angles(R)
    assert a.gimbal and a.phi == 0.0
    assert a.theta == pytest.approx(math.pi / 2)
    np.testing.assert_allclose(a.matrix(), R, atol=1e-12)


def test_gimbal_negative():
    R = rotation_matrix(-math.pi / 2, 0.4, 0.9)
    a = extract_euler_angles(R)
    assert a.gimbal and a.theta == pytest.approx(-math.pi / 2)
    np.testing.assert_allclose(a.matrix(), R, atol=1e-12)


def test_not_rotation():
    with pytest.raises(NotRotationError):
        extract_euler_angles(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotRotationError):
        extract_euler_angles(2 * np.eye(3))
    with pytest.raises(NotRotationError):
        extract_euler_angles(np.eye(2))


@settings(max_examples=300, deadline=None)
@given(
    st.floats(-1.5698, 1.5698),
    st.floats(-math.pi, math.pi, exclude_min=True),
    st.floats(-math.pi, math.pi, exclude_min=True),
)
def test_roundtrip(theta, phi, psi):
    a = extract_euler_angles(rotation_matrix(theta, phi, psi))
    assert abs(a.theta - theta) <= 1e-8
    assert abs(math.remainder(a.phi - phi, 2 * math.pi)) <= 1e-8
    assert abs(math.remainder(a.psi - psi, 2 * math.pi)) <= 1e-8


def test_frenet_hinted_start_is_identity():
    a = analysis("helix3")
    R = frame_rotation_matrix(a.frenet[0], a.pt[0])
    np.testing.assert_allclose(R, np.eye(3), atol=1e-15)


def test_helix3_psi_linear():
    a = analysis("helix3", 257)
    g = a.angles
    np.testing.assert_allclose(g.theta, 0.0, atol=1e-9)
    np.testing.assert_allclose(g.phi, 0.0, atol=1e-9)
    expected = np.angle(np.exp(-0.5j * g.s))
    np.testing.assert_allclose(np.angle(np.exp(1j * (g.psi - expected))), 0.0, atol=1e-8)
    j = int(np.argmin(np.abs(g.s - math.pi)))
    assert g.s[j] == pytest.approx(math.pi)
    assert g.psi[j] == pytest.approx(-math.pi / 2, abs=1e-8)


def test_helix3_k_at_quarter_turn():
    angles = EulerAngles(0.0, 0.0, -math.pi / 2)
    r = curvature_relation_residuals(0.5, angles, [0.0, 0.5, 0.0])
    np.testing.assert_allclose(r, 0.0, atol=1e-15)


def test_zero_kappa_residual_is_k():
    r = curvature_relation_residuals(0.0, EulerAngles(0.3, 0.2, 0.1), [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(r, 0.0)


def test_tangent_mismatch():
    F = FrameSample(0.0, np.eye(4))
    G = FrameSample(0.0, np.eye(4)[[1, 0, 2, 3]] * [[1], [-1], [1], [1]])
    with pytest.raises(TangentMismatchError):
        frame_rotation_matrix(F, G)


@pytest.mark.parametrize("label", corpus_labels())
def test_rotations_in_so3(label):
    a = analysis(label)
    for j in np.flatnonzero(a.frenet.valid):
        R = frame_rotation_matrix(a.frenet[j], a.pt[j])
        assert np.abs(R.T @ R - np.eye(3)).max() <= 1e-8
        assert abs(np.linalg.det(R) - 1) <= 1e-8


@pytest.mark.parametrize("label", corpus_labels())
def test_k_residuals(label):
    a = analysis(label)
    r = a.residuals
    usable = a.angles.defined & ~a.angles.gimbal
    bound = 1e-6 * np.maximum(a.frenet_curvatures.kappa, 1.0)
    for name in ("r_k1", "r_k2", "r_k3"):
        vals = getattr(r, name)
        assert np.all(np.abs(vals[usable]) <= bound[usable])
        assert np.all(np.isnan(vals[~usable]))


def test_helix3_angle_ode():
    a = analysis("helix3", 1025)
    r = a.residuals
    inner = slice(1, -1)
    assert np.nanmax(np.abs(r.r_theta[inner])) <= 1e-9
    assert np.nanmax(np.abs(r.r_tau[inner])) <= 1e-5


def test_masked_curve_gives_not_applicable():
    a = analysis("line", 33)
    r = angle_ode_residuals(a.angles, a.frenet_curvatures)
    for name in r.FIELDS:
        assert np.all(np.isnan(getattr(r, name)))


def test_generic_curve_reports_residuals():
    a = analysis("trig11")
    r = a.residuals
    assert np.isfinite(r.r_theta[1:-1]).any()
    assert np.isfinite(r.r_tau[1:-1]).all()
