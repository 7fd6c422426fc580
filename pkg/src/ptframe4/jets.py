"""Truncated derivative arithmetic through order 4.

A :class:`Jet` stores ``d[n]``, the n-th derivative of a scalar quantity with
respect to the curve parameter, for ``n = 0..4``.  The leading axis of ``d``
has length 5; any trailing axes are carried along elementwise, so one Jet can
hold a whole sampling grid at once.

Multiplication uses the Leibniz rule and univariate functions use the
order-4 Faa di Bruno formula, so composite expressions carry exact
derivatives up to rounding.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from .exceptions import DomainError

ORDER = 4
NDERIV = ORDER + 1

_BINOM = np.array([[comb(n, i) for i in range(NDERIV)] for n in range(NDERIV)], dtype=float)


class Jet:
    """Value and derivatives 1..4 of a scalar function of the parameter."""

    __slots__ = ("d",)
    __array_priority__ = 1000

    def __init__(self, d):
        d = np.asarray(d, dtype=float)
        if d.shape[:1] != (NDERIV,):
            raise ValueError(f"jet needs {NDERIV} derivative entries, got shape {d.shape}")
        self.d = d

    @classmethod
    def constant(cls, value, shape=()) -> "Jet":
        d = np.zeros((NDERIV,) + tuple(np.shape(value) or shape))
        d[0] = value
        return cls(d)

    @classmethod
    def variable(cls, value) -> "Jet":
        """Jet of the parameter itself evaluated at ``value``."""
        value = np.asarray(value, dtype=float)
        d = np.zeros((NDERIV,) + value.shape)
        d[0] = value
        d[1] = 1.0
        return cls(d)

    @property
    def value(self):
        return self.d[0]

    def isfinite(self) -> bool:
        return bool(np.all(np.isfinite(self.d)))

    def __repr__(self) -> str:
        if self.d.ndim == 1:
            return "Jet(" + ", ".join(f"{x:.10g}" for x in self.d) + ")"
        return f"Jet(shape={self.d.shape[1:]})"

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.d + other.d)
        d = self.d.copy()
        d[0] = d[0] + other
        return Jet(d)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.d * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, jet_apply("recip", other))
        return Jet(self.d / other)

    def __rtruediv__(self, other):
        return jet_apply("recip", self) * other

    def __pow__(self, exponent):
        return jet_apply("pow", self, exponent)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz product: ``(ab)^(n) = sum_i C(n, i) a^(i) b^(n-i)``."""
    ad, bd = np.broadcast_arrays(a.d, b.d)
    out = np.zeros(ad.shape)
    for n in range(NDERIV):
        for i in range(n + 1):
            out[n] += _BINOM[n, i] * ad[i] * bd[n - i]
    return Jet(out)


def _compose(a: Jet, f) -> Jet:
    """Chain rule through order 4 given ``f = (f0, f1, f2, f3, f4)`` at ``a.d[0]``."""
    g1, g2, g3, g4 = a.d[1], a.d[2], a.d[3], a.d[4]
    f0, f1, f2, f3, f4 = f
    out = np.empty(np.broadcast_shapes(a.d.shape, (NDERIV,) + np.shape(f0)))
    out[0] = f0
    out[1] = f1 * g1
    out[2] = f2 * g1**2 + f1 * g2
    out[3] = f3 * g1**3 + 3.0 * f2 * g1 * g2 + f1 * g3
    out[4] = f4 * g1**4 + 6.0 * f3 * g1**2 * g2 + f2 * (3.0 * g2**2 + 4.0 * g1 * g3) + f1 * g4
    return Jet(out)


def _fail(func, x, bad):
    bad = np.atleast_1d(bad)
    if bad.any():
        raise DomainError(func, np.broadcast_to(np.atleast_1d(x), bad.shape)[bad][0])


def _power_derivs(x, r: Fraction):
    """Derivatives 0..4 of ``x**r`` for rational ``r``."""
    rf = float(r)
    if r.denominator == 1 and r >= 0:
        n = int(r)
        out = []
        coef = 1.0
        for k in range(NDERIV):
            out.append(coef * x ** (n - k) if n - k >= 0 else np.zeros_like(x))
            coef *= n - k
        return out
    if r.denominator == 1:
        _fail("pow", x, x == 0)
    else:
        _fail("pow", x, x <= 0)
    out = []
    coef = 1.0
    for k in range(NDERIV):
        out.append(coef * np.power(x, rf - k))
        coef *= rf - k
    return out


def _derivs(func: str, x, exponent=None):
    if func == "sin":
        s, c = np.sin(x), np.cos(x)
        return s, c, -s, -c, s
    if func == "cos":
        s, c = np.sin(x), np.cos(x)
        return c, -s, -c, s, c
    if func == "tan":
        _fail("tan", x, np.abs(np.cos(x)) < 1e-300)
        t = np.tan(x)
        u = 1.0 + t * t
        return t, u, 2.0 * t * u, 2.0 * u * u + 4.0 * t * t * u, 16.0 * t * u * u + 8.0 * t**3 * u
    if func == "exp":
        e = np.exp(x)
        return e, e, e, e, e
    if func == "log":
        _fail("log", x, x <= 0)
        return np.log(x), 1.0 / x, -1.0 / x**2, 2.0 / x**3, -6.0 / x**4
    if func == "sqrt":
        _fail("sqrt", x, x <= 0)
        r = np.sqrt(x)
        return r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x), -0.9375 / (r * x**3)
    if func == "sinh":
        s, c = np.sinh(x), np.cosh(x)
        return s, c, s, c, s
    if func == "cosh":
        s, c = np.sinh(x), np.cosh(x)
        return c, s, c, s, c
    if func == "neg":
        z = np.zeros_like(x)
        return -x, -np.ones_like(x), z, z, z
    if func == "recip":
        _fail("recip", x, x == 0)
        r = 1.0 / x
        return r, -(r**2), 2.0 * r**3, -6.0 * r**4, 24.0 * r**5
    if func == "pow":
        return _power_derivs(x, Fraction(exponent))
    raise ValueError(f"unknown jet function {func!r}")


FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "neg", "recip", "pow")


def jet_apply(func: str, a: Jet, exponent=None) -> Jet:
    """Apply a univariate function to a jet.

    ``func`` is one of :data:`FUNCTIONS`; ``pow`` takes a rational
    ``exponent`` (``int``, :class:`fractions.Fraction` or a float that is
    converted exactly).  Raises :class:`DomainError` when ``a``'s value lies
    outside the function's domain.
    """
    if func == "pow" and exponent is None:
        raise ValueError("pow needs an exponent")
    x = a.d[0]
    with np.errstate(all="ignore"):
        f = _derivs(func, x, exponent)
        f = [np.broadcast_to(np.asarray(v, dtype=float), np.shape(x)) for v in f]
        return _compose(a, f)


def jet_sum(jets) -> Jet:
    jets = list(jets)
    out = jets[0]
    for j in jets[1:]:
        out = out + j
    return out


class JetVec4:
    """Four jets, one per coordinate of E^4.

    Stored as one array ``d`` of shape ``(5, 4, ...)``: ``d[n]`` is the n-th
    derivative vector.
    """

    __slots__ = ("d",)

    def __init__(self, d):
        d = np.asarray(d, dtype=float)
        if d.shape[:2] != (NDERIV, 4):
            raise ValueError(f"JetVec4 needs shape (5, 4, ...), got {d.shape}")
        self.d = d

    @classmethod
    def from_components(cls, comps) -> "JetVec4":
        comps = list(comps)
        if len(comps) != 4:
            raise ValueError("JetVec4 needs exactly four components")
        arrays = np.broadcast_arrays(*[c.d for c in comps])
        return cls(np.stack(arrays, axis=1))

    @property
    def components(self) -> tuple[Jet, Jet, Jet, Jet]:
        return tuple(Jet(self.d[:, i]) for i in range(4))

    def deriv(self, n: int) -> np.ndarray:
        return self.d[n]

    def isfinite(self) -> bool:
        return bool(np.all(np.isfinite(self.d)))

    def __repr__(self) -> str:
        return f"JetVec4(shape={self.d.shape})"


def jet_dot(u: JetVec4, v: JetVec4) -> Jet:
    """Inner product ``<u, v> = sum u_i v_i`` lifted to jets."""
    return jet_sum(jet_mul(a, b) for a, b in zip(u.components, v.components))


def jet_vec_norm(v: JetVec4) -> Jet:
    """``||v||`` as a jet; raises :class:`DomainError` where ``v`` vanishes."""
    sq = jet_dot(v, v)
    if np.any(sq.d[0] <= 0):
        raise DomainError("norm", 0.0)
    return jet_apply("sqrt", sq)


def shift(v: JetVec4) -> JetVec4:
    """Jet of the derivative: entries move down one order, the top one is lost."""
    d = np.zeros_like(v.d)
    d[:-1] = v.d[1:]
    return JetVec4(d)
