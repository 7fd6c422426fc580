"""Frenet frame {T, N, B1, B2} and the curvatures kappa, tau, sigma in E^4."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvegeom import CurveSampling
from .exceptions import DegenerateFrameError, MismatchedSeriesError
from .jets import JetVec4

DEGENERACY_TOL = 1e-9

FRENET = "frenet"
PARALLEL = "parallel-transport"


@dataclass(frozen=True)
class FrameSample:
    """Orthonormal 4-frame at arclength ``s``; rows are T and three normals."""

    s: float
    vectors: np.ndarray
    flavor: str = FRENET

    @property
    def tangent(self) -> np.ndarray:
        return self.vectors[0]

    @property
    def normals(self) -> np.ndarray:
        return self.vectors[1:]


@dataclass(frozen=True)
class FrameSeries:
    """Frames along a sampling.

    ``levels[j]`` is 0 where the frame is complete, otherwise the Frenet
    degeneracy level; rows that could not be built are NaN.
    """

    s: np.ndarray
    vectors: np.ndarray
    flavor: str
    levels: np.ndarray | None = None

    def __post_init__(self):
        if self.levels is None:
            object.__setattr__(self, "levels", np.zeros(len(self.s), dtype=int))

    def __len__(self) -> int:
        return len(self.s)

    def __getitem__(self, j) -> FrameSample:
        if self.levels[j]:
            raise DegenerateFrameError(self.levels[j], 0.0, float(self.s[j]))
        return FrameSample(float(self.s[j]), self.vectors[j], self.flavor)

    @property
    def valid(self) -> np.ndarray:
        return self.levels == 0

    @classmethod
    def from_samples(cls, frames) -> "FrameSeries":
        frames = list(frames)
        return cls(
            np.array([f.s for f in frames]),
            np.stack([f.vectors for f in frames]),
            frames[0].flavor,
        )


@dataclass(frozen=True)
class FrenetCurvatures:
    """Per-sample kappa, tau, sigma; entries outside the masks are NaN."""

    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    sigma: np.ndarray
    tau_defined: np.ndarray
    sigma_defined: np.ndarray

    def __len__(self) -> int:
        return len(self.s)


def cross4(a, b, c) -> np.ndarray:
    """Vector ``d`` orthogonal to ``a, b, c`` with ``det[a, b, c, d] = |d|^2``.

    Works on single vectors or on stacks of shape ``(..., 4)``.
    """
    rows = np.stack(np.broadcast_arrays(a, b, c), axis=-2)
    out = np.empty(rows.shape[:-2] + (4,))
    for i in range(4):
        minor = np.delete(rows, i, axis=-1)
        out[..., i] = (-1) ** (3 + i) * np.linalg.det(minor)
    return out


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _gram_schmidt_levels(d1, d2, d3):
    """Stacked Frenet construction; returns (vectors, levels, residual norms)."""
    T = d1 / np.linalg.norm(d1, axis=-1, keepdims=True)
    u2 = d2 - _dot(d2, T)[..., None] * T
    r2 = np.linalg.norm(u2, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        N = u2 / r2[..., None]
        u3 = d3 - _dot(d3, T)[..., None] * T - _dot(d3, N)[..., None] * N
        r3 = np.linalg.norm(u3, axis=-1)
        B1 = u3 / r3[..., None]
    levels = np.where(r2 < DEGENERACY_TOL, 2, np.where(r3 < DEGENERACY_TOL, 3, 0))
    N = np.where((levels == 2)[..., None], np.nan, N)
    B1 = np.where((levels != 0)[..., None], np.nan, B1)
    with np.errstate(invalid="ignore"):
        B2 = cross4(T, N, B1)
    vectors = np.stack([T, N, B1, B2], axis=-2)
    return vectors, levels, r2, r3


def _as_deriv_array(derivs) -> np.ndarray:
    if isinstance(derivs, JetVec4):
        return derivs.d
    return np.asarray(derivs, dtype=float)


def gram_schmidt_frame(derivs, s: float = 0.0) -> FrameSample:
    """Frenet frame at one point from arclength derivatives.

    ``derivs`` is a :class:`JetVec4` (or ``(5, 4)`` array) whose entries 1..3
    are the first three arclength derivatives of the position.  Raises
    :class:`DegenerateFrameError` when a Gram-Schmidt residual drops below
    the degeneracy tolerance.
    """
    d = _as_deriv_array(derivs)
    vectors, level, r2, r3 = _gram_schmidt_levels(d[1], d[2], d[3])
    if level:
        raise DegenerateFrameError(int(level), float(r2 if level == 2 else r3), s)
    return FrameSample(float(s), vectors, FRENET)


def frenet_frames(samp: CurveSampling) -> FrameSeries:
    """Frenet frames along a sampling; degenerate samples are flagged, not raised."""
    vectors, levels, _, _ = _gram_schmidt_levels(samp.sderiv(1), samp.sderiv(2), samp.sderiv(3))
    return FrameSeries(samp.arclens.copy(), vectors, FRENET, levels)


def frenet_residuals(samp: CurveSampling) -> tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt residual norms at levels 2 and 3 for every sample."""
    _, _, r2, r3 = _gram_schmidt_levels(samp.sderiv(1), samp.sderiv(2), samp.sderiv(3))
    return r2, r3


def check_aligned(frames: FrameSeries, samp: CurveSampling):
    if len(frames) != len(samp):
        raise MismatchedSeriesError(
            f"frame series has {len(frames)} samples, curve has {len(samp)}"
        )
    if not np.allclose(frames.s, samp.arclens, rtol=0.0, atol=1e-12 * max(1.0, samp.arclens[-1])):
        raise MismatchedSeriesError("frame series and curve use different arclength grids")


def frenet_apparatus(frames: FrameSeries, samp: CurveSampling) -> FrenetCurvatures:
    """kappa, tau, sigma read off the Frenet construction.

    ``kappa = |alpha''|``; ``tau`` is the level-3 residual divided by kappa;
    ``sigma`` is the B2 component of ``alpha''''`` divided by ``kappa tau``,
    which carries the sign of ``<B1', B2>``.
    """
    if frames.flavor != FRENET:
        raise MismatchedSeriesError("frenet_apparatus needs Frenet frames")
    check_aligned(frames, samp)
    d2, d3, d4 = samp.sderiv(2), samp.sderiv(3), samp.sderiv(4)
    T, N, B2 = frames.vectors[:, 0], frames.vectors[:, 1], frames.vectors[:, 3]
    kappa = np.linalg.norm(d2, axis=1)

    tau_defined = frames.levels != 2
    sigma_defined = frames.levels == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        u3 = d3 - _dot(d3, T)[:, None] * T - _dot(d3, N)[:, None] * N
        tau = np.where(tau_defined, np.linalg.norm(u3, axis=1) / kappa, np.nan)
        sigma = np.where(sigma_defined, _dot(d4, B2) / (kappa * tau), np.nan)
    return FrenetCurvatures(frames.s.copy(), kappa, tau, sigma, tau_defined, sigma_defined)
