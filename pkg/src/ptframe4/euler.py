"""Euler angles relating the Frenet normals to the parallel transport normals.

The rotation is ``R = Rz(psi) Ry(theta) Rx(phi)`` and its rows are the
Frenet normals ``N, B1, B2`` written in the basis ``M1, M2, M3``::

    N  = cos(theta)cos(psi) M1 + (sin(phi)sin(theta)cos(psi) - cos(phi)sin(psi)) M2 + ...
    B2 = -sin(theta) M1 + sin(phi)cos(theta) M2 + cos(phi)cos(theta) M3
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NotRotationError, TangentMismatchError
from .frenet import FrameSample, FrameSeries, FrenetCurvatures
from .ptframe import PTCurvatures

GIMBAL_TOL = 1e-6
DENOM_TOL = 1e-6


@dataclass(frozen=True)
class EulerAngles:
    theta: float
    phi: float
    psi: float
    gimbal: bool = False

    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.theta, self.phi, self.psi)


@dataclass(frozen=True)
class RelationResiduals:
    """Residuals of the curvature and angle-derivative relations.

    Each field is an array over samples; NaN marks "not applicable".
    """

    s: np.ndarray
    r_k1: np.ndarray
    r_k2: np.ndarray
    r_k3: np.ndarray
    r_theta: np.ndarray
    r_tau: np.ndarray
    r_sigma: np.ndarray
    r_constraint: np.ndarray

    FIELDS = ("r_k1", "r_k2", "r_k3", "r_theta", "r_tau", "r_sigma", "r_constraint")


def rotation_matrix(theta, phi, psi) -> np.ndarray:
    ct, st = np.cos(theta), np.sin(theta)
    cf, sf = np.cos(phi), np.sin(phi)
    cp, sp = np.cos(psi), np.sin(psi)
    return np.array(
        [
            [ct * cp, -cf * sp + sf * st * cp, sf * sp + cf * st * cp],
            [ct * sp, cf * cp + sf * st * sp, -sf * cp + cf * st * sp],
            [-st, sf * ct, cf * ct],
        ]
    )


def frame_rotation_matrix(frenet: FrameSample, pt: FrameSample) -> np.ndarray:
    """``R[i, j] = <Frenet normal i, PT normal j>``."""
    if frenet.tangent @ pt.tangent < 1.0 - 1e-8:
        raise TangentMismatchError(
            f"frames at s={frenet.s!r} do not share a tangent (<T, T> = {frenet.tangent @ pt.tangent!r})"
        )
    return frenet.normals @ pt.normals.T


def _wrap(angle: float) -> float:
    """Map into (-pi, pi]."""
    return float(np.pi) if angle <= -np.pi else float(angle)


def extract_euler_angles(R) -> EulerAngles:
    """Invert ``R = Rz(psi) Ry(theta) Rx(phi)``.

    Near gimbal lock (``|cos theta| < 1e-6``) ``phi`` is set to 0 and ``psi``
    absorbs the remaining rotation.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        raise NotRotationError("expected a finite 3x3 matrix")
    if np.abs(R.T @ R - np.eye(3)).max() > 1e-6 or np.linalg.det(R) <= 0:
        raise NotRotationError("matrix is not a proper rotation")
    theta = float(np.arcsin(np.clip(-R[2, 0], -1.0, 1.0)))
    if abs(np.cos(theta)) < GIMBAL_TOL:
        theta = float(np.copysign(np.pi / 2, theta))
        psi = np.arctan2(-R[0, 1], R[1, 1])
        return EulerAngles(theta, 0.0, _wrap(psi), True)
    phi = np.arctan2(R[2, 1], R[2, 2])
    psi = np.arctan2(R[1, 0], R[0, 0])
    return EulerAngles(theta, _wrap(phi), _wrap(psi), False)


def predicted_k(kappa, theta, phi, psi) -> np.ndarray:
    """``kappa`` times the N row of the rotation; works on scalars or arrays."""
    ct, st = np.cos(theta), np.sin(theta)
    cf, sf = np.cos(phi), np.sin(phi)
    cp, sp = np.cos(psi), np.sin(psi)
    return np.stack(
        [
            kappa * ct * cp,
            kappa * (sf * st * cp - cf * sp),
            kappa * (cf * st * cp + sf * sp),
        ],
        axis=-1,
    )


def curvature_relation_residuals(kappa: float, angles: EulerAngles, k) -> np.ndarray:
    """``(r_k1, r_k2, r_k3)``: measured k minus the value predicted from kappa and the angles."""
    k = np.asarray(k, dtype=float)
    return k - predicted_k(kappa, angles.theta, angles.phi, angles.psi)


@dataclass(frozen=True)
class AngleSeries:
    """Euler angles per sample; NaN where the Frenet frame is missing."""

    s: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    gimbal: np.ndarray
    defined: np.ndarray

    def __len__(self) -> int:
        return len(self.s)


def euler_series(frenet: FrameSeries, pt: FrameSeries) -> AngleSeries:
    """Angles between aligned Frenet and parallel transport frame series."""
    n = len(frenet)
    out = np.full((3, n), np.nan)
    gimbal = np.zeros(n, dtype=bool)
    defined = frenet.valid.copy()
    for j in np.flatnonzero(defined):
        R = frame_rotation_matrix(frenet[j], pt[j])
        a = extract_euler_angles(R)
        out[:, j] = a.theta, a.phi, a.psi
        gimbal[j] = a.gimbal
    return AngleSeries(frenet.s.copy(), out[0], out[1], out[2], gimbal, defined)


def _unwrap_runs(values: np.ndarray) -> np.ndarray:
    """Unwrap each contiguous run of finite values separately."""
    out = values.copy()
    finite = np.isfinite(values)
    edges = np.flatnonzero(np.diff(np.concatenate([[0], finite.astype(int), [0]])))
    for start, stop in zip(edges[::2], edges[1::2]):
        out[start:stop] = np.unwrap(values[start:stop])
    return out


def _central_diff(values: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Derivative on the (possibly nonuniform) grid; NaN unless both neighbours are finite."""
    d = np.full_like(values, np.nan)
    if len(values) < 3:
        return d
    h0 = s[1:-1] - s[:-2]
    h1 = s[2:] - s[1:-1]
    v0, v1, v2 = values[:-2], values[1:-1], values[2:]
    d[1:-1] = (-h1 / (h0 * (h0 + h1))) * v0 + ((h1 - h0) / (h0 * h1)) * v1 + (h0 / (h1 * (h0 + h1))) * v2
    return d


def angle_ode_residuals(angles: AngleSeries, frenet: FrenetCurvatures) -> RelationResiduals:
    """Diagnostic residuals of the angle-derivative relations.

    Angle derivatives come from central differences of unwrapped angles.
    The residuals are reported for inspection only:

    * ``r_theta = theta' - sigma / sqrt(kappa^2 + tau^2)``
    * ``r_tau = tau - (-psi' + phi' sin(theta))``
    * ``r_sigma = sigma - theta' / sin(psi)``
    * ``r_constraint = phi' cos(theta) + theta' cot(psi)``
    """
    s = angles.s
    usable = angles.defined & ~angles.gimbal
    theta = np.where(usable, angles.theta, np.nan)
    phi = _unwrap_runs(np.where(usable, angles.phi, np.nan))
    psi = _unwrap_runs(np.where(usable, angles.psi, np.nan))
    dtheta = _central_diff(theta, s)
    dphi = _central_diff(phi, s)
    dpsi = _central_diff(psi, s)

    kappa = frenet.kappa
    tau = np.where(frenet.tau_defined, frenet.tau, np.nan)
    sigma = np.where(frenet.sigma_defined, frenet.sigma, np.nan)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(kappa**2 + tau**2)
        sin_psi = np.sin(psi)
        small_root = ~(root >= DENOM_TOL)
        small_sin = ~(np.abs(sin_psi) >= DENOM_TOL)
        r_theta = np.where(small_root, np.nan, dtheta - sigma / root)
        r_tau = tau - (-dpsi + dphi * np.sin(theta))
        r_sigma = np.where(small_sin, np.nan, sigma - dtheta / sin_psi)
        r_constraint = np.where(small_sin, np.nan, dphi * np.cos(theta) + dtheta * np.cos(psi) / sin_psi)

    nan = np.full(len(s), np.nan)
    return RelationResiduals(s.copy(), nan, nan.copy(), nan.copy(), r_theta, r_tau, r_sigma, r_constraint)


def relation_residuals(
    angles: AngleSeries, frenet: FrenetCurvatures, k: PTCurvatures
) -> RelationResiduals:
    """All residuals: curvature formulas at every usable sample plus the angle diagnostics."""
    ode = angle_ode_residuals(angles, frenet)
    rk = np.full((len(angles), 3), np.nan)
    usable = angles.defined & ~angles.gimbal
    rk[usable] = k.k[usable] - predicted_k(
        frenet.kappa[usable],
        angles.theta[usable],
        angles.phi[usable],
        angles.psi[usable],
    )
    return RelationResiduals(
        ode.s, rk[:, 0], rk[:, 1], rk[:, 2], ode.r_theta, ode.r_tau, ode.r_sigma, ode.r_constraint
    )
