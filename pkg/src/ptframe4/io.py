"""Reading sampled curves and writing tabular results."""

from __future__ import annotations

import csv
import io
import json
import math
from math import factorial
from pathlib import Path

import numpy as np

from .curvegeom import MIN_SAMPLES, CurveSampling, sampling_from_jets, to_arclength_jets
from .exceptions import NonMonotoneParamError, ParseError, TooFewSamplesError

SAMPLE_COLUMNS = ("t", "x1", "x2", "x3", "x4")
STENCIL = 7


def fd_weights(offsets, order: int) -> np.ndarray:
    """Weights ``w`` with ``sum w_i f(x0 + offsets_i) ~ f^(order)(x0)``.

    Exact for polynomials of degree ``len(offsets) - 1``.
    """
    offsets = np.asarray(offsets, dtype=float)
    scale = np.abs(offsets).max()
    d = offsets / scale
    p = np.arange(len(d))
    V = d[None, :] ** p[:, None] / np.array([factorial(i) for i in p])[:, None]
    rhs = np.zeros(len(d))
    rhs[order] = 1.0
    return np.linalg.solve(V, rhs) / scale**order


def fd_jets(t, x, width: int = STENCIL) -> np.ndarray:
    """Derivative jets ``(n, 5, 4)`` from samples by finite differences.

    Interior points use a centred ``width``-point stencil; near the ends the
    stencil is shifted to stay inside the data, which costs accuracy there.
    The default of 7 points makes the fourth derivative accurate to about
    ``1e-5`` on smooth curves with a few hundred samples.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(t)
    half = width // 2
    jets = np.empty((n, 5, x.shape[1]))
    jets[:, 0] = x
    for j in range(n):
        lo = min(max(j - half, 0), n - width)
        idx = np.arange(lo, lo + width)
        offsets = t[idx] - t[j]
        for order in range(1, 5):
            jets[j, order] = fd_weights(offsets, order) @ x[idx]
    return jets


def _parse_rows(lines):
    rows, linenos = [], []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = [f.strip() for f in text.split(",")]
        if tuple(fields) == SAMPLE_COLUMNS and not rows:
            continue
        if len(fields) != 5:
            raise ParseError(lineno, f"expected 5 comma-separated values, got {len(fields)}")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise ParseError(lineno, f"non-numeric value in {text!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError(lineno, "non-finite value")
        rows.append(values)
        linenos.append(lineno)
    return np.array(rows, dtype=float).reshape(-1, 5), linenos


def samples_to_sampling(data, linenos=None, label: str = "", stencil: int = STENCIL) -> CurveSampling:
    """Arclength-ready sampling from an array of rows ``t, x1, x2, x3, x4``.

    ``linenos`` maps rows to source lines for error messages.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != 5:
        raise ParseError(0, f"expected rows of t,x1,x2,x3,x4; got array of shape {data.shape}")
    if len(data) < max(MIN_SAMPLES, stencil):
        raise TooFewSamplesError(f"need at least {max(MIN_SAMPLES, stencil)} samples, got {len(data)}")
    linenos = list(range(1, len(data) + 1)) if linenos is None else linenos
    t = data[:, 0]
    bad = np.flatnonzero(np.diff(t) <= 0)
    if bad.size:
        j = bad[0] + 1
        raise NonMonotoneParamError(linenos[j], t[j])
    jets = fd_jets(t, data[:, 1:], stencil)
    return to_arclength_jets(sampling_from_jets(t, jets, label=label))


def ingest_samples(path, stencil: int = STENCIL) -> CurveSampling:
    """Read a ``t,x1,x2,x3,x4`` CSV file (``#`` comments allowed).

    A header row naming exactly those columns is skipped.
    """
    path = Path(path)
    with path.open() as fh:
        data, linenos = _parse_rows(fh)
    return samples_to_sampling(data, linenos, label=path.name, stencil=stencil)


def write_samples(path, t, positions):
    """Dump samples in the format read by :func:`ingest_samples`."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SAMPLE_COLUMNS)
        for ti, xi in zip(t, positions):
            w.writerow([format_number(ti)] + [format_number(v) for v in xi])


# -- tables -----------------------------------------------------------------


def format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    value = float(value)
    if not math.isfinite(value):
        return ""
    return format(value + 0.0, ".17g")


def _json_value(value):
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(format(value + 0.0, ".17g"))


def table_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def table_to_json(columns, rows, meta=None) -> str:
    doc = dict(meta or {})
    doc["columns"] = list(columns)
    doc["rows"] = [[_json_value(v) for v in row] for row in rows]
    return json.dumps(doc, indent=1) + "\n"


def clean_json(obj):
    """Recursively replace non-finite floats by ``None`` and numpy scalars by Python ones."""
    if isinstance(obj, dict):
        return {k: clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_json(v) for v in obj]
    if isinstance(obj, (float, np.floating, np.integer, np.bool_, bool)):
        return _json_value(obj)
    return obj
