"""Sampling a curve and converting parameter derivatives to arclength ones."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .curvespec import CurveSpec, eval_curve_jet
from .exceptions import InputError, StationaryPointError
from .jets import Jet, JetVec4, jet_apply, jet_dot, shift

STATIONARY_TOL = 1e-12
MIN_SAMPLES = 9


@dataclass(frozen=True)
class CurveSampling:
    """A curve sampled on a strictly increasing parameter grid.

    ``jets[j, n]`` is the n-th derivative of the position with respect to the
    parameter ``t`` at ``params[j]``; ``s_jets`` holds the same derivatives
    taken with respect to arclength (filled by :func:`to_arclength_jets`).
    """

    params: np.ndarray
    jets: np.ndarray
    speeds: np.ndarray
    arclens: np.ndarray
    s_jets: np.ndarray | None = None
    label: str = ""

    def __len__(self) -> int:
        return len(self.params)

    @property
    def positions(self) -> np.ndarray:
        return self.jets[:, 0]

    @property
    def tangents(self) -> np.ndarray:
        self._need_s_jets()
        return self.s_jets[:, 1]

    def sderiv(self, n: int) -> np.ndarray:
        """``d^n alpha / ds^n`` at every sample, shape ``(len, 4)``."""
        self._need_s_jets()
        return self.s_jets[:, n]

    def _need_s_jets(self):
        if self.s_jets is None:
            raise ValueError("arclength jets not computed; call to_arclength_jets first")

    def interpolate(self, s) -> np.ndarray:
        """Position at arclength ``s`` by cubic Hermite interpolation."""
        spline = CubicHermiteSpline(self.arclens, self.positions, self.tangents, axis=0)
        return spline(s)


def _check_speeds(params, speeds):
    bad = np.flatnonzero(~(speeds >= STATIONARY_TOL))
    if bad.size:
        j = bad[0]
        raise StationaryPointError(params[j], speeds[j])


def sample_curve(spec: CurveSpec, n: int) -> CurveSampling:
    """Sample ``spec`` on ``n`` uniformly spaced parameter values.

    Arclength is accumulated with Simpson's rule on each grid interval, using
    the exact speed at both ends and at the interval midpoint.
    """
    if n < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} samples, got {n}")
    lo, hi = spec.domain
    params = np.linspace(lo, hi, n)
    jets = np.moveaxis(eval_curve_jet(spec, params).d, -1, 0)
    speeds = np.linalg.norm(jets[:, 1], axis=1)
    _check_speeds(params, speeds)

    mids = 0.5 * (params[:-1] + params[1:])
    mid_speeds = np.linalg.norm(eval_curve_jet(spec, mids).d[1], axis=0)
    _check_speeds(mids, mid_speeds)
    h = np.diff(params)
    pieces = h / 6.0 * (speeds[:-1] + 4.0 * mid_speeds + speeds[1:])
    arclens = np.concatenate([[0.0], np.cumsum(pieces)])
    return CurveSampling(params, jets, speeds, arclens, label=spec.label)


def sampling_from_jets(params, jets, label: str = "") -> CurveSampling:
    """Build a sampling from precomputed parameter jets (no midpoint access).

    Arclength uses the Hermite-corrected trapezoid rule, which needs only the
    speed and its derivative at the grid points.
    """
    params = np.asarray(params, dtype=float)
    jets = np.asarray(jets, dtype=float)
    speeds = np.linalg.norm(jets[:, 1], axis=1)
    _check_speeds(params, speeds)
    dspeed = np.einsum("ij,ij->i", jets[:, 1], jets[:, 2]) / speeds
    h = np.diff(params)
    pieces = 0.5 * h * (speeds[:-1] + speeds[1:]) + h**2 / 12.0 * (dspeed[:-1] - dspeed[1:])
    arclens = np.concatenate([[0.0], np.cumsum(pieces)])
    return CurveSampling(params, jets, speeds, arclens, label=label)


def to_arclength_jets(samp: CurveSampling) -> CurveSampling:
    """Fill ``s_jets`` using ``d/ds = (1/|alpha'(t)|) d/dt`` applied four times.

    Each application loses one order of the parameter jet, which is exactly
    what is needed to reach the fourth arclength derivative.
    """
    _check_speeds(samp.params, samp.speeds)
    pos = JetVec4(np.moveaxis(samp.jets, 0, -1))
    velocity = shift(pos)
    inv_speed = jet_apply("recip", jet_apply("sqrt", jet_dot(velocity, velocity)))

    out = np.empty_like(samp.jets)
    out[:, 0] = samp.jets[:, 0]
    current = pos
    for n in range(1, 5):
        comps = [inv_speed * Jet(c.d) for c in shift(current).components]
        current = JetVec4.from_components(comps)
        out[:, n] = current.d[0].T
    return replace(samp, s_jets=out)


def sample_arclength(spec: CurveSpec, n: int) -> CurveSampling:
    """:func:`sample_curve` followed by :func:`to_arclength_jets`."""
    return to_arclength_jets(sample_curve(spec, n))
