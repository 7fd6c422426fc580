"""Spherical, normal, rectifying and osculating curves.

A curve lies on a sphere exactly when its parallel transport curvatures
satisfy ``a k1 + b k2 + c k3 + 1 = 0`` for constants ``a, b, c``; the
rectifying and osculating cases are the two-term relations
``c2 k2 + c3 k3 + 1 = 0`` and ``l2 k1 + l3 k3 + 1 = 0``.  Verdicts come from
least-squares fits of these relations.  A direct sphere fit and the
constancy of the anchor vectors serve as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curvegeom import CurveSampling
from .exceptions import DegenerateGeometryError, InputError, TooFewSamplesError
from .frenet import FrameSeries, check_aligned
from .ptframe import PTCurvatures

MODES = {
    "spherical": (0, 1, 2),
    "rectifying": (1, 2),
    "osculating": (0, 2),
}
MIN_FIT_SAMPLES = 8
SV_CUTOFF = 1e-10


@dataclass(frozen=True)
class LinearRelationFit:
    mode: str
    coefficients: np.ndarray
    rms_residual: float
    rank_deficient: bool

    @property
    def plane_distance(self) -> float | None:
        """Distance from the origin of the plane ``coeff . x + 1 = 0``."""
        norm = float(np.linalg.norm(self.coefficients))
        return 1.0 / norm if norm > 0 else None

    def full_coefficients(self) -> np.ndarray:
        """Coefficients spread over (k1, k2, k3), zero where the mode omits a term."""
        out = np.zeros(3)
        out[list(MODES[self.mode])] = self.coefficients
        return out


@dataclass(frozen=True)
class SphereFit:
    center: np.ndarray
    radius: float
    rms_residual: float


@dataclass
class ClassificationReport:
    spherical: bool
    normal: bool
    rectifying: bool
    osculating: bool
    fits: dict
    sphere: SphereFit | None = None
    anchor_constancy: float | None = None
    radius_identity_gap: float | None = None
    anchor_drifts: dict = field(default_factory=dict)
    anchors: np.ndarray | None = None
    sphere_verdict: bool | None = None

    @property
    def verdicts(self) -> dict:
        return {
            "spherical": self.spherical,
            "normal": self.normal,
            "rectifying": self.rectifying,
            "osculating": self.osculating,
        }

    def to_dict(self) -> dict:
        def arr(x):
            return None if x is None else [float(v) for v in np.ravel(x)]

        return {
            **self.verdicts,
            "fits": {
                mode: {
                    "coefficients": arr(fit.coefficients),
                    "rms_residual": float(fit.rms_residual),
                    "rank_deficient": bool(fit.rank_deficient),
                    "plane_distance": fit.plane_distance,
                }
                for mode, fit in self.fits.items()
            },
            "sphere": None
            if self.sphere is None
            else {
                "center": arr(self.sphere.center),
                "radius": float(self.sphere.radius),
                "rms_residual": float(self.sphere.rms_residual),
            },
            "sphere_verdict": self.sphere_verdict,
            "anchors": arr(self.anchors),
            "anchor_constancy": self.anchor_constancy,
            "anchor_drifts": {k: float(v) for k, v in self.anchor_drifts.items()},
            "radius_identity_gap": self.radius_identity_gap,
        }


def _k_array(k) -> np.ndarray:
    return k.k if isinstance(k, PTCurvatures) else np.asarray(k, dtype=float)


def fit_linear_relation(k, mode: str) -> LinearRelationFit:
    """Least-squares constants for the relation ``coeff . k_mode + 1 = 0``.

    Solved through the SVD of the design matrix with singular values below
    ``1e-10`` times the largest one discarded; the minimal-norm solution is
    returned when that happens.
    """
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; use one of {tuple(MODES)}")
    K = _k_array(k)
    if len(K) < MIN_FIT_SAMPLES:
        raise TooFewSamplesError(f"relation fit needs at least {MIN_FIT_SAMPLES} samples, got {len(K)}")
    D = K[:, MODES[mode]]
    rhs = -np.ones(len(D))
    U, sv, Vt = np.linalg.svd(D, full_matrices=False)
    keep = sv > SV_CUTOFF * sv[0] if sv[0] > 0 else np.zeros_like(sv, dtype=bool)
    coeff = Vt[keep].T @ ((U[:, keep].T @ rhs) / sv[keep])
    resid = D @ coeff + 1.0
    return LinearRelationFit(
        mode,
        coeff,
        float(np.sqrt(np.mean(resid**2))),
        bool(not keep.all()),
    )


def fit_sphere_direct(samp_or_points) -> SphereFit:
    """Sphere through the sample positions by linear least squares.

    Solves ``|x|^2 = 2 <x, P> + (r^2 - |P|^2)`` inside the affine hull of the
    points, so curves confined to a lower-dimensional flat (a planar circle)
    get the smallest sphere containing them.  Raises
    :class:`DegenerateGeometryError` when the points are collinear.
    """
    X = samp_or_points.positions if isinstance(samp_or_points, CurveSampling) else np.asarray(samp_or_points, dtype=float)
    if len(X) < 6:
        raise DegenerateGeometryError(f"sphere fit needs at least 6 points, got {len(X)}")
    c0 = X.mean(axis=0)
    Y = X - c0
    _, sv, Vt = np.linalg.svd(Y, full_matrices=False)
    scale = max(sv[0], 1e-300)
    basis = Vt[sv > 1e-9 * scale]
    dim = len(basis)
    if dim < 2:
        raise DegenerateGeometryError(f"points span an affine subspace of dimension {dim}; no sphere")
    Z = Y @ basis.T
    A = np.hstack([2.0 * Z, np.ones((len(Z), 1))])
    b = np.sum(Z**2, axis=1)
    sol, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < dim + 1:
        raise DegenerateGeometryError(f"sphere design matrix has rank {rank} < {dim + 1}")
    pz, c = sol[:dim], sol[dim]
    r2 = c + pz @ pz
    if r2 <= 0:
        raise DegenerateGeometryError("fitted squared radius is not positive")
    radius = float(np.sqrt(r2))
    center = c0 + pz @ basis
    dist = np.linalg.norm(X - center, axis=1)
    return SphereFit(center, radius, float(np.sqrt(np.mean((dist - radius) ** 2))))


def _relation_ok(fit: LinearRelationFit, k_rms: float, tol: float) -> bool:
    return fit.rms_residual <= tol * (1.0 + k_rms)


def classify_curve(
    samp: CurveSampling,
    frames: FrameSeries,
    k: PTCurvatures,
    tol: float = 1e-6,
    sphere_tol: float = 1e-6,
) -> ClassificationReport:
    """Classify a curve from its parallel transport data.

    ``tol`` is relative to the curvature scale: a relation holds when its RMS
    residual is at most ``tol * (1 + RMS kappa)``.  ``sphere_tol`` scales the
    direct sphere fit's RMS distance residual by the radius.
    """
    check_aligned(frames, samp)
    K = _k_array(k)
    k_rms = float(np.sqrt(np.mean(np.sum(K**2, axis=1))))
    fits = {mode: fit_linear_relation(K, mode) for mode in MODES}
    verdict = {mode: _relation_ok(fit, k_rms, tol) for mode, fit in fits.items()}

    X = samp.positions
    M = frames.vectors[:, 1:]
    report = ClassificationReport(
        spherical=verdict["spherical"],
        normal=verdict["spherical"],
        rectifying=verdict["rectifying"],
        osculating=verdict["osculating"],
        fits=fits,
    )

    try:
        sphere = fit_sphere_direct(samp)
    except DegenerateGeometryError:
        sphere = None
    if sphere is not None:
        report.sphere_verdict = sphere.rms_residual <= sphere_tol * sphere.radius
    else:
        report.sphere_verdict = False

    if (verdict["spherical"] or fits["spherical"].rank_deficient) and sphere is not None:
        report.sphere = sphere
        anchors = np.einsum("jik,jk->ji", M, X - sphere.center)
        report.anchors = anchors[0]
        report.anchor_drifts["spherical"] = float(np.abs(anchors - anchors[0]).max())
        report.radius_identity_gap = float(abs(sphere.radius**2 - anchors[0] @ anchors[0]))

    for mode in ("rectifying", "osculating"):
        if verdict[mode]:
            c = fits[mode].full_coefficients()
            anchor = X - np.einsum("i,jik->jk", c, M)
            report.anchor_drifts[mode] = float(np.linalg.norm(anchor - anchor[0], axis=1).max())

    if report.anchor_drifts:
        report.anchor_constancy = max(report.anchor_drifts.values())
    return report
