"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import math
import numbers

import numpy as np

from .curvegeom import MIN_SAMPLES, CurveSampling, sample_arclength, to_arclength_jets
from .curvespec import BUILTIN_NAMES, CurveSpec, builtin_curve, parse_curve
from .exceptions import InputError
from .io import samples_to_sampling


def check_positive(value, name: str) -> float:
    """Return ``value`` as a float after checking it is finite and > 0."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InputError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"{name} must be finite and positive, got {value!r}")
    return value


def check_n_samples(n) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InputError(f"sample count must be an integer, got {n!r}")
    if n < MIN_SAMPLES:
        raise InputError(f"sample count must be at least {MIN_SAMPLES}, got {n}")
    return int(n)


def check_choice(value, choices, name: str):
    if value not in choices:
        raise InputError(f"{name} must be one of {tuple(choices)}, got {value!r}")
    return value


def check_curve(X, n_samples: int = 257, domain=None) -> CurveSampling:
    """Turn any supported curve input into an arclength-ready sampling.

    Accepted inputs:

    * a :class:`CurveSampling` (arclength jets are added if missing)
    * a :class:`CurveSpec`, sampled at ``n_samples`` points of its domain
    * a string: a builtin name or four comma-separated coordinate expressions
    * an array of shape ``(n, 5)`` with rows ``t, x1, x2, x3, x4``
    """
    if isinstance(X, CurveSampling):
        return X if X.s_jets is not None else to_arclength_jets(X)
    if isinstance(X, str):
        if X in BUILTIN_NAMES:
            X = builtin_curve(X, domain)
        else:
            X = parse_curve(X, (0.0, 1.0) if domain is None else domain)
    if isinstance(X, CurveSpec):
        if domain is not None and tuple(domain) != tuple(X.domain):
            X = CurveSpec(X.coords, X.label, tuple(domain))
        return sample_arclength(X, check_n_samples(n_samples))
    try:
        data = np.asarray(X, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"cannot interpret {type(X).__name__} as a curve") from None
    if data.ndim != 2 or data.shape[1] != 5:
        raise InputError(f"sample arrays must have shape (n, 5), got {data.shape}")
    if not np.all(np.isfinite(data)):
        raise InputError("sample array contains non-finite values")
    return samples_to_sampling(data, label="array")


def check_frame(F, tol: float = 1e-9) -> np.ndarray:
    """A 4x4 array with orthonormal rows and determinant +1."""
    F = np.asarray(F, dtype=float)
    if F.shape != (4, 4) or not np.all(np.isfinite(F)):
        raise InputError(f"frame must be a finite 4x4 array, got shape {F.shape}")
    if np.abs(F @ F.T - np.eye(4)).max() > tol or np.linalg.det(F) <= 0:
        raise InputError("frame rows must be orthonormal with positive orientation")
    return F
