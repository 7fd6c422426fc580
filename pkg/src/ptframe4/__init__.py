"""Frenet and parallel transport framing of curves in four-dimensional space."""

__version__ = "0.1.0"

from .classify import ClassificationReport, LinearRelationFit, SphereFit, classify_curve, fit_linear_relation, fit_sphere_direct
from .curvegeom import CurveSampling, sample_arclength, sample_curve, to_arclength_jets
from .curvespec import BUILTIN_NAMES, CurveSpec, builtin_curve, eval_curve_jet, parse_curve, parse_expr, to_text
from .euler import EulerAngles, euler_series, extract_euler_angles, relation_residuals, rotation_matrix
from .exceptions import (
    FramingError,
    InputError,
    NumericalError,
    DomainError,
    CurveSyntaxError,
    ArityError,
    DomainProbeError,
    UnknownCurveError,
    ProfileDomainError,
    StationaryPointError,
    DegenerateFrameError,
    MismatchedSeriesError,
    NotUnitError,
    HintMismatchError,
    ZeroStepError,
    TangentMismatchError,
    NotRotationError,
    TooFewSamplesError,
    DegenerateGeometryError,
    ParseError,
    NonMonotoneParamError,
)
from .frenet import FrameSample, FrameSeries, FrenetCurvatures, frenet_apparatus, frenet_frames, gram_schmidt_frame
from .io import ingest_samples, samples_to_sampling
from .jets import Jet, JetVec4, jet_apply
from .pipeline import CurveAnalysis, analyze, compare_methods
from .ptframe import KProfile, PTCurvatures, initial_frame, init_pt_frame, parse_profile, propagate_pt, pt_curvatures, synthesize_curve
from .validation import check_curve

__all__ = [
    "__version__",
    "ClassificationReport",
    "LinearRelationFit",
    "SphereFit",
    "classify_curve",
    "fit_linear_relation",
    "fit_sphere_direct",
    "CurveSampling",
    "sample_arclength",
    "sample_curve",
    "to_arclength_jets",
    "BUILTIN_NAMES",
    "CurveSpec",
    "builtin_curve",
    "eval_curve_jet",
    "parse_curve",
    "parse_expr",
    "to_text",
    "EulerAngles",
    "euler_series",
    "extract_euler_angles",
    "relation_residuals",
    "rotation_matrix",
    "FramingError",
    "InputError",
    "NumericalError",
    "DomainError",
    "CurveSyntaxError",
    "ArityError",
    "DomainProbeError",
    "UnknownCurveError",
    "ProfileDomainError",
    "StationaryPointError",
    "DegenerateFrameError",
    "MismatchedSeriesError",
    "NotUnitError",
    "HintMismatchError",
    "ZeroStepError",
    "TangentMismatchError",
    "NotRotationError",
    "TooFewSamplesError",
    "DegenerateGeometryError",
    "ParseError",
    "NonMonotoneParamError",
    "FrameSample",
    "FrameSeries",
    "FrenetCurvatures",
    "frenet_apparatus",
    "frenet_frames",
    "gram_schmidt_frame",
    "ingest_samples",
    "samples_to_sampling",
    "Jet",
    "JetVec4",
    "jet_apply",
    "CurveAnalysis",
    "analyze",
    "compare_methods",
    "KProfile",
    "PTCurvatures",
    "initial_frame",
    "init_pt_frame",
    "parse_profile",
    "propagate_pt",
    "pt_curvatures",
    "synthesize_curve",
    "check_curve",
    "CurveClassifier",
    "EulerAngleTransformer",
    "FrenetFrame",
    "ParallelTransportFrame",
]

_ESTIMATORS = ("CurveClassifier", "EulerAngleTransformer", "FrenetFrame", "ParallelTransportFrame")


def __getattr__(name):
    # scikit-learn is slow to import; load the estimators on first use only
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
