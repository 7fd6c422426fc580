"""scikit-learn style wrappers around the framing pipeline.

Each estimator takes one curve as ``X`` (anything :func:`check_curve`
accepts).  ``fit`` stores the results as trailing-underscore attributes and
``transform`` returns a per-sample array for the curve it is given.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classify import classify_curve
from .frenet import frenet_apparatus, frenet_frames
from .pipeline import analyze
from .ptframe import METHODS, initial_frame, propagate_pt, pt_curvatures
from .validation import check_choice, check_curve, check_n_samples, check_positive

INITS = ("frenet", "pivot")
VERDICTS = ("spherical", "normal", "rectifying", "osculating")


class FrenetFrame(TransformerMixin, BaseEstimator):
    """Frenet frames and the curvatures kappa, tau, sigma.

    ``transform`` returns an ``(n, 3)`` array with NaN where tau or sigma is
    undefined.
    """

    def __init__(self, n_samples=257, domain=None):
        self.n_samples = n_samples
        self.domain = domain

    def _compute(self, X):
        samp = check_curve(X, check_n_samples(self.n_samples), self.domain)
        frames = frenet_frames(samp)
        return samp, frames, frenet_apparatus(frames, samp)

    def fit(self, X, y=None):
        self.sampling_, self.frames_, self.curvatures_ = self._compute(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "frames_")
        c = self._compute(X)[2]
        return np.column_stack(
            [c.kappa, np.where(c.tau_defined, c.tau, np.nan), np.where(c.sigma_defined, c.sigma, np.nan)]
        )


class ParallelTransportFrame(TransformerMixin, BaseEstimator):
    """Parallel transport frames; ``transform`` returns ``(k1, k2, k3)`` per sample."""

    def __init__(self, method="rk4", init="frenet", n_samples=257, domain=None):
        self.method = method
        self.init = init
        self.n_samples = n_samples
        self.domain = domain

    def _compute(self, X):
        check_choice(self.method, METHODS + ("dr",), "method")
        check_choice(self.init, INITS, "init")
        samp = check_curve(X, check_n_samples(self.n_samples), self.domain)
        frame0 = initial_frame(samp, self.init)
        frames = propagate_pt(samp, frame0, self.method)
        return samp, frame0, frames, pt_curvatures(samp, frames)

    def fit(self, X, y=None):
        self.sampling_, self.initial_frame_, self.frames_, self.curvatures_ = self._compute(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "frames_")
        return self._compute(X)[3].k


class EulerAngleTransformer(TransformerMixin, BaseEstimator):
    """Euler angles between the Frenet and parallel transport normals.

    ``transform`` returns ``(theta, phi, psi)`` per sample, NaN where the
    Frenet frame is degenerate.  After ``fit`` the relation residuals are in
    ``residuals_``.
    """

    def __init__(self, method="rk4", init="frenet", n_samples=257, domain=None):
        self.method = method
        self.init = init
        self.n_samples = n_samples
        self.domain = domain

    def _compute(self, X):
        check_choice(self.method, METHODS + ("dr",), "method")
        check_choice(self.init, INITS, "init")
        samp = check_curve(X, check_n_samples(self.n_samples), self.domain)
        return analyze(samp, self.method, self.init)

    def fit(self, X, y=None):
        self.analysis_ = self._compute(X)
        self.angles_ = self.analysis_.angles
        self.residuals_ = self.analysis_.residuals
        return self

    def transform(self, X):
        check_is_fitted(self, "angles_")
        a = self._compute(X).angles
        return np.column_stack([a.theta, a.phi, a.psi])


class CurveClassifier(BaseEstimator):
    """Spherical / normal / rectifying / osculating verdicts for a curve.

    ``predict`` returns a boolean array ordered as :data:`VERDICTS`.
    """

    classes_ = VERDICTS

    def __init__(self, tol=1e-6, sphere_tol=1e-6, method="rk4", init="frenet", n_samples=257, domain=None):
        self.tol = tol
        self.sphere_tol = sphere_tol
        self.method = method
        self.init = init
        self.n_samples = n_samples
        self.domain = domain

    def _report(self, X):
        tol = check_positive(self.tol, "tol")
        sphere_tol = check_positive(self.sphere_tol, "sphere_tol")
        pt = ParallelTransportFrame(self.method, self.init, self.n_samples, self.domain)
        samp, _, frames, k = pt._compute(X)
        return classify_curve(samp, frames, k, tol, sphere_tol)

    def fit(self, X, y=None):
        self.report_ = self._report(X)
        return self

    def predict(self, X):
        check_is_fitted(self, "report_")
        verdicts = self._report(X).verdicts
        return np.array([verdicts[v] for v in VERDICTS])
