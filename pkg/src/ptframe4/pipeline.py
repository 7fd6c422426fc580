"""End-to-end analysis of one curve: both frames, curvatures and angles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvegeom import CurveSampling
from .euler import AngleSeries, RelationResiduals, euler_series, relation_residuals
from .frenet import FrameSeries, FrenetCurvatures, frenet_apparatus, frenet_frames
from .ptframe import PTCurvatures, initial_frame, propagate_pt, pt_curvatures


@dataclass(frozen=True)
class CurveAnalysis:
    sampling: CurveSampling
    frenet: FrameSeries
    frenet_curvatures: FrenetCurvatures
    pt: FrameSeries
    k: PTCurvatures
    angles: AngleSeries
    residuals: RelationResiduals


def analyze(samp: CurveSampling, method: str = "rk4", init: str = "frenet") -> CurveAnalysis:
    fr = frenet_frames(samp)
    fc = frenet_apparatus(fr, samp)
    pt = propagate_pt(samp, initial_frame(samp, init), method)
    k = pt_curvatures(samp, pt)
    angles = euler_series(fr, pt)
    return CurveAnalysis(samp, fr, fc, pt, k, angles, relation_residuals(angles, fc, k))


def frame_angle(A, B) -> float:
    """Largest rotation angle between two orthonormal frames."""
    gap = np.linalg.norm(np.asarray(A) - np.asarray(B), 2)
    return float(2.0 * np.arcsin(min(1.0, gap / 2.0)))


def compare_methods(samp: CurveSampling, init: str = "frenet") -> tuple[float, float]:
    """(max over samples, terminal) rotation angle between rk4 and double reflection."""
    f0 = initial_frame(samp, init)
    a = propagate_pt(samp, f0, "rk4").vectors
    b = propagate_pt(samp, f0, "double-reflection").vectors
    angles = [frame_angle(x, y) for x, y in zip(a, b)]
    return max(angles), angles[-1]
