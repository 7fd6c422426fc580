"""Parallel transport frame {T, M1, M2, M3} in E^4.

The normals are relatively parallel: ``M_i' = -k_i T`` with
``k_i = <T', M_i>``.  Two propagation schemes are provided, a classical RK4
integration with per-step re-orthonormalization and the discrete double
reflection scheme, so that each can be checked against the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvegeom import CurveSampling
from .curvespec import evaluate, parse_expressions, probe_exprs
from .exceptions import (
    HintMismatchError,
    InputError,
    MismatchedSeriesError,
    NotUnitError,
    ProfileDomainError,
    TangentMismatchError,
    ZeroStepError,
)
from .frenet import FRENET, PARALLEL, FrameSample, FrameSeries, check_aligned, frenet_frames
from .jets import Jet

UNIT_TOL = 1e-9
TANGENT_TOL = 1e-8
METHODS = ("rk4", "double-reflection")


@dataclass(frozen=True)
class PTCurvatures:
    """Parallel transport curvatures ``k[j] = (k1, k2, k3)`` at arclength ``s[j]``."""

    s: np.ndarray
    k: np.ndarray

    def __len__(self) -> int:
        return len(self.s)

    @property
    def k1(self):
        return self.k[:, 0]

    @property
    def k2(self):
        return self.k[:, 1]

    @property
    def k3(self):
        return self.k[:, 2]

    @property
    def kappa(self):
        return np.sqrt(np.sum(self.k**2, axis=1))


@dataclass(frozen=True)
class KProfile:
    """Curvature functions ``k1(s), k2(s), k3(s)`` on a closed interval."""

    exprs: tuple
    domain: tuple = (0.0, 10.0)

    def __post_init__(self):
        if len(self.exprs) != 3:
            raise InputError("a curvature profile needs three expressions")
        object.__setattr__(self, "exprs", tuple(self.exprs))
        object.__setattr__(self, "domain", tuple(float(v) for v in self.domain))
        probe_exprs(self.exprs, self.domain)

    def jets(self, s) -> np.ndarray:
        """Derivatives 0..4 of each ``k_i`` at ``s``; shape ``(5, 3, ...)``."""
        sj = Jet.variable(np.asarray(s, dtype=float))
        out = [np.broadcast_to(evaluate(e, sj).d, (5,) + np.shape(s)) for e in self.exprs]
        return np.stack(out, axis=1)


def parse_profile(text: str, domain=(0.0, 10.0)) -> KProfile:
    """Parse ``"k1, k2, k3"`` expressions of ``s`` into a :class:`KProfile`."""
    return KProfile(tuple(parse_expressions(text, 3)), domain)


def constant_profile(k, domain=(0.0, 10.0)) -> KProfile:
    from .curvespec import Neg, Num

    exprs = tuple(Neg(Num(-float(v))) if v < 0 else Num(float(v)) for v in k)
    return KProfile(exprs, domain)


# -- helpers ----------------------------------------------------------------


def orthonormality_defect(vectors) -> np.ndarray:
    """``max |F F^T - I|`` for a frame or a stack of frames."""
    vectors = np.asarray(vectors)
    gram = vectors @ np.swapaxes(vectors, -1, -2)
    return np.abs(gram - np.eye(vectors.shape[-1])).max(axis=(-1, -2))


def _orthonormalize_against(M: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the rows of ``M`` against the fixed unit vector ``T``."""
    out = np.empty_like(M)
    for i in range(len(M)):
        v = M[i] - (M[i] @ T) * T
        for j in range(i):
            v = v - (v @ out[j]) * out[j]
        out[i] = v / np.sqrt(v @ v)
    return out


def _fix_orientation(frame: np.ndarray) -> np.ndarray:
    if np.linalg.det(frame) < 0:
        frame = frame.copy()
        frame[-1] = -frame[-1]
    return frame


# -- initialization ---------------------------------------------------------


def init_pt_frame(T0, hint: FrameSample | None = None, s: float = 0.0) -> FrameSample:
    """Initial parallel transport frame with tangent ``T0``.

    With a Frenet ``hint`` the normals start as ``N, B1, B2`` so the Euler
    angles vanish at the start.  Otherwise ``T0`` is completed by Gram-Schmidt
    over the coordinate axes, starting with the axis least aligned with
    ``T0`` and continuing in index order; the last normal is flipped if
    needed so the frame is positively oriented.
    """
    T0 = np.asarray(T0, dtype=float)
    if abs(np.linalg.norm(T0) - 1.0) > UNIT_TOL:
        raise NotUnitError(f"initial tangent has norm {np.linalg.norm(T0)!r}, expected 1")
    if hint is not None:
        if np.abs(hint.vectors[0] - T0).max() > UNIT_TOL:
            raise HintMismatchError("hint frame tangent differs from T0")
        return FrameSample(hint.s, np.array(hint.vectors, dtype=float), PARALLEL)

    return FrameSample(float(s), _complete_frame(T0, [T0]), PARALLEL)


def _complete_frame(T0: np.ndarray, rows: list) -> np.ndarray:
    pivot = int(np.argmin(np.abs(T0)))
    order = [pivot] + [i for i in range(4) if i != pivot]
    rows = list(rows)
    for axis in order:
        v = np.eye(4)[axis]
        for r in rows:
            v = v - (v @ r) * r
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            rows.append(v / norm)
        if len(rows) == 4:
            break
    return _fix_orientation(np.array(rows))


def initial_frame(samp: CurveSampling, init: str = "frenet") -> FrameSample:
    """Initial frame for propagating along ``samp``.

    ``init="frenet"`` uses the Frenet frame at the first sample as a hint.
    Where only the principal normal exists (third derivative inside the
    osculating plane, e.g. a circle) the frame starts with ``M1 = N`` and is
    completed as in the pivoted construction.  Without a principal normal, or
    with ``init="pivot"``, the pivoted construction is used throughout.
    """
    T0 = samp.tangents[0]
    if init == "frenet":
        fr = frenet_frames(samp)
        if fr.levels[0] == 0:
            return init_pt_frame(T0, FrameSample(fr.s[0], fr.vectors[0], FRENET), s=fr.s[0])
        if fr.levels[0] == 3:
            rows = _complete_frame(T0, [T0, fr.vectors[0, 1]])
            return FrameSample(float(fr.s[0]), rows, PARALLEL)
    elif init != "pivot":
        raise InputError(f"unknown init {init!r}; use 'frenet' or 'pivot'")
    return init_pt_frame(T0, s=samp.arclens[0])


# -- propagation ------------------------------------------------------------


def _hermite_mid(f0, f1, d0, d1, c0, c1, h):
    """Quintic Hermite interpolant at the interval midpoint."""
    return (
        0.5 * (f0 + f1)
        + (5.0 / 32.0) * h[:, None] * (d0 - d1)
        + (1.0 / 64.0) * (h**2)[:, None] * (c0 + c1)
    )


def _transport_rhs(M, T, A):
    return -np.outer(M @ A, T)


def _propagate_rk4(samp: CurveSampling, M: np.ndarray) -> np.ndarray:
    s = samp.arclens
    T, A, J, Q = samp.sderiv(1), samp.sderiv(2), samp.sderiv(3), samp.sderiv(4)
    h = np.diff(s)
    T_mid = _hermite_mid(T[:-1], T[1:], A[:-1], A[1:], J[:-1], J[1:], h)
    A_mid = _hermite_mid(A[:-1], A[1:], J[:-1], J[1:], Q[:-1], Q[1:], h)

    out = np.empty((len(s), 3, 4))
    out[0] = M
    for j in range(len(s) - 1):
        hj = h[j]
        k1 = _transport_rhs(M, T[j], A[j])
        k2 = _transport_rhs(M + 0.5 * hj * k1, T_mid[j], A_mid[j])
        k3 = _transport_rhs(M + 0.5 * hj * k2, T_mid[j], A_mid[j])
        k4 = _transport_rhs(M + hj * k3, T[j + 1], A[j + 1])
        M = M + (hj / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        M = _orthonormalize_against(M, T[j + 1])
        out[j + 1] = M
    return out


def _reflect(v, x, c):
    """Reflect the rows of ``x`` across the hyperplane normal to ``v`` (``c = |v|^2``)."""
    return x - np.outer((2.0 / c) * (x @ v), v)


def _propagate_double_reflection(samp: CurveSampling, M: np.ndarray) -> np.ndarray:
    x, T = samp.positions, samp.tangents
    out = np.empty((len(x), 3, 4))
    out[0] = M
    for j in range(len(x) - 1):
        v1 = x[j + 1] - x[j]
        c1 = v1 @ v1
        ML = _reflect(v1, M, c1)
        TL = T[j] - (2.0 / c1) * (v1 @ T[j]) * v1
        v2 = T[j + 1] - TL
        c2 = v2 @ v2
        M = _reflect(v2, ML, c2) if c2 > 1e-300 else ML
        out[j + 1] = M
    return out


def propagate_pt(samp: CurveSampling, frame0: FrameSample, method: str = "rk4") -> FrameSeries:
    """Parallel transport frames at every sample of ``samp``.

    The tangent row is copied from the sampling; only the normals are
    propagated.  ``method`` is ``"rk4"`` or ``"double-reflection"`` (``"dr"``).
    """
    if method == "dr":
        method = "double-reflection"
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; use one of {METHODS}")
    T = samp.tangents
    if np.abs(frame0.vectors[0] - T[0]).max() > TANGENT_TOL:
        raise TangentMismatchError("frame0 tangent differs from the curve tangent at the first sample")
    h = np.diff(samp.arclens)
    steps = np.linalg.norm(np.diff(samp.positions, axis=0), axis=1)
    bad = np.flatnonzero((h <= 0) | (steps == 0))
    if bad.size:
        raise ZeroStepError(int(bad[0]) + 1, samp.arclens[bad[0] + 1])

    M0 = np.array(frame0.vectors[1:], dtype=float)
    if method == "rk4":
        normals = _propagate_rk4(samp, M0)
    else:
        normals = _propagate_double_reflection(samp, M0)
    vectors = np.concatenate([T[:, None, :], normals], axis=1)
    return FrameSeries(samp.arclens.copy(), vectors, PARALLEL)


def pt_curvatures(samp: CurveSampling, frames: FrameSeries) -> PTCurvatures:
    """``k_i = <alpha''(s), M_i(s)>`` at every sample."""
    if frames.flavor != PARALLEL:
        raise MismatchedSeriesError("pt_curvatures needs parallel transport frames")
    check_aligned(frames, samp)
    k = np.einsum("jik,jk->ji", frames.vectors[:, 1:], samp.sderiv(2))
    return PTCurvatures(frames.s.copy(), k)


# -- synthesis --------------------------------------------------------------


def _synth_rhs(Y, k):
    # Y rows: alpha, T, M1, M2, M3
    dY = np.empty_like(Y)
    dY[0] = Y[1]
    dY[1] = k @ Y[2:]
    dY[2:] = -np.outer(k, Y[1])
    return dY


def synthesize_curve(
    profile: KProfile,
    frame0: FrameSample,
    origin=(0.0, 0.0, 0.0, 0.0),
    step: float = 1e-3,
    n: int = 1000,
) -> tuple[CurveSampling, FrameSeries]:
    """Integrate ``alpha' = T, T' = sum k_i M_i, M_i' = -k_i T`` from ``frame0``.

    Takes ``n`` RK4 steps of size ``step`` starting at the left end of the
    profile domain, so ``n + 1`` samples are returned.  The frame is
    re-orthonormalized after every step.  Arclength derivatives up to order
    4 are assembled from the frame and the profile's own derivatives.
    """
    if step <= 0:
        raise InputError("step must be positive")
    F0 = np.asarray(frame0.vectors, dtype=float)
    if orthonormality_defect(F0) > UNIT_TOL:
        raise NotUnitError("frame0 is not orthonormal")
    s0, s_end = profile.domain
    grid = s0 + step * np.arange(n + 1)
    over = np.flatnonzero(grid > s_end + 1e-9 * max(1.0, abs(s_end)))
    if over.size:
        raise ProfileDomainError(grid[over[0]], profile.domain)

    kj = profile.jets(grid)  # (5, 3, n+1)
    k_mid = profile.jets(grid[:-1] + 0.5 * step)[0]

    Y = np.vstack([np.asarray(origin, dtype=float), F0])
    states = np.empty((n + 1, 5, 4))
    states[0] = Y
    for j in range(n):
        ka, kb, kc = kj[0, :, j], k_mid[:, j], kj[0, :, j + 1]
        y1 = _synth_rhs(Y, ka)
        y2 = _synth_rhs(Y + 0.5 * step * y1, kb)
        y3 = _synth_rhs(Y + 0.5 * step * y2, kb)
        y4 = _synth_rhs(Y + step * y3, kc)
        Y = Y + (step / 6.0) * (y1 + 2.0 * y2 + 2.0 * y3 + y4)
        T = Y[1] / np.linalg.norm(Y[1])
        Y = np.vstack([Y[0], T, _orthonormalize_against(Y[2:], T)])
        states[j + 1] = Y

    T, M = states[:, 1], states[:, 2:]
    k, dk, ddk = kj[0].T, kj[1].T, kj[2].T
    K = np.sum(k**2, axis=1)
    dK = 2.0 * np.sum(k * dk, axis=1)
    jets = np.empty((n + 1, 5, 4))
    jets[:, 0] = states[:, 0]
    jets[:, 1] = T
    jets[:, 2] = np.einsum("ji,jik->jk", k, M)
    jets[:, 3] = np.einsum("ji,jik->jk", dk, M) - K[:, None] * T
    jets[:, 4] = np.einsum("ji,jik->jk", ddk - K[:, None] * k, M) - 1.5 * dK[:, None] * T

    arclens = grid - s0
    samp = CurveSampling(grid, jets, np.ones(n + 1), arclens, s_jets=jets, label="synthesized")
    frames = FrameSeries(arclens.copy(), states[:, 1:].copy(), PARALLEL)
    return samp, frames
