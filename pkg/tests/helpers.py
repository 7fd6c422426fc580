"""Shared test fixtures: random expressions with an mpmath twin, curve corpus."""

from __future__ import annotations

import functools

import mpmath
import numpy as np

from ptframe4.curvegeom import sample_arclength
from ptframe4.curvespec import CurveSpec, builtin_curve, parse_curve
from ptframe4.pipeline import analyze

mpmath.mp.dps = 40


def _num(rng) -> tuple[str, float]:
    v = round(float(rng.uniform(0.2, 2.0)), 3)
    return repr(v), v


def random_expression(rng, depth: int = 3):
    """Random well-defined expression of ``s``.

    Returns ``(text, f)`` where ``f`` evaluates the same formula with mpmath,
    built from the generation tree rather than from the parser.
    """
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.6:
            return "s", lambda s: s
        text, v = _num(rng)
        return text, lambda s, v=v: mpmath.mpf(v)
    kind = rng.integers(0, 14)
    a_text, a = random_expression(rng, depth - 1)
    if kind <= 3:
        b_text, b = random_expression(rng, depth - 1)
        op = "+-*/"[kind]
        if op == "+":
            return f"({a_text}) + ({b_text})", lambda s: a(s) + b(s)
        if op == "-":
            return f"({a_text}) - ({b_text})", lambda s: a(s) - b(s)
        if op == "*":
            return f"({a_text}) * ({b_text})", lambda s: a(s) * b(s)
        return f"({a_text}) / (2 + cos({b_text}))", lambda s: a(s) / (2 + mpmath.cos(b(s)))
    if kind == 4:
        return f"sin({a_text})", lambda s: mpmath.sin(a(s))
    if kind == 5:
        return f"cos({a_text})", lambda s: mpmath.cos(a(s))
    if kind == 6:
        return f"exp(sin({a_text}))", lambda s: mpmath.exp(mpmath.sin(a(s)))
    if kind == 7:
        return f"log(1 + ({a_text})^2)", lambda s: mpmath.log(1 + a(s) ** 2)
    if kind == 8:
        return f"sqrt(1 + ({a_text})^2)", lambda s: mpmath.sqrt(1 + a(s) ** 2)
    if kind == 9:
        return f"tan(0.5*sin({a_text}))", lambda s: mpmath.tan(0.5 * mpmath.sin(a(s)))
    if kind == 10:
        return f"sinh(sin({a_text}))", lambda s: mpmath.sinh(mpmath.sin(a(s)))
    if kind == 11:
        return f"cosh(cos({a_text}))", lambda s: mpmath.cosh(mpmath.cos(a(s)))
    if kind == 12:
        return f"(2 + sin({a_text}))^(3/2)", lambda s: (2 + mpmath.sin(a(s))) ** mpmath.mpf(1.5)
    return f"-({a_text})^3", lambda s: -(a(s) ** 3)


def mp_derivatives(f, s: float, order: int = 4) -> np.ndarray:
    """Derivatives 0..order of ``f`` at ``s`` by high-precision numerical differentiation."""
    return np.array([float(v) for v in mpmath.diffs(f, mpmath.mpf(s), order)])


def random_trig_curve(seed: int) -> CurveSpec:
    """Regular, generically non-degenerate trigonometric curve on [0, 3].

    The first coordinate has slope at least 1.5 - 0.6 > 0, so the curve
    never stops.
    """
    rng = np.random.default_rng(seed)
    parts = []
    for i in range(4):
        lin = 1.5 if i == 0 else round(float(rng.uniform(-1, 1)), 3)
        terms = [f"{lin}*s"]
        for fn in ("sin", "cos"):
            w = round(float(rng.uniform(0.5, 2.0)), 3)
            amp = round(float(rng.uniform(0.05, 0.3 / w if i == 0 else 1.0)), 3)
            ph = round(float(rng.uniform(0, 3)), 3)
            terms.append(f"{amp}*{fn}({w}*s + {ph})")
        parts.append(" + ".join(terms))
    return parse_curve(", ".join(parts), (0.0, 3.0), label=f"trig{seed}")


CORPUS_NAMES = ("example1", "example2", "circle", "helix3")
TRIG_SEEDS = (11, 23, 37, 41, 59)


def corpus():
    """The four named curves plus five seeded random trigonometric curves."""
    return [builtin_curve(n) for n in CORPUS_NAMES] + [random_trig_curve(s) for s in TRIG_SEEDS]


@functools.lru_cache(maxsize=None)
def analysis(name: str, n: int = 257, method: str = "rk4", init: str = "frenet"):
    spec = builtin_curve(name) if name in CORPUS_NAMES + ("line",) else random_trig_curve(int(name[4:]))
    return analyze(sample_arclength(spec, n), method, init)


def corpus_labels():
    return list(CORPUS_NAMES) + [f"trig{s}" for s in TRIG_SEEDS]
