"""Analytic curve definitions.

A small expression language in one parameter ``s``::

    expr   := term { ("+" | "-") term }
    term   := unary { ("*" | "/") unary }
    unary  := "-" unary | power
    power  := atom [ "^" rational ]
    atom   := number | "s" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
    rational := number | "(" ["-"] number [ "/" number ] ")"

Exponentiation binds tighter than unary minus, so ``-s^2`` is ``-(s^2)``.
Expressions are parsed to an immutable AST and evaluated to
:class:`~ptframe4.jets.Jet` values, so every coordinate comes with exact
derivatives through order 4.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .exceptions import (
    ArityError,
    CurveSyntaxError,
    DomainError,
    DomainProbeError,
    InputError,
    UnknownCurveError,
)
from .jets import Jet, JetVec4, jet_apply

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh")
CONSTANTS = {"pi": math.pi, "e": math.e}
PROBE_POINTS = 64


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Param:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Param, Const, Neg, BinOp, Pow, Call]


# -- tokenizer --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | end
    text: str
    offset: int  # byte offset into the UTF-8 encoded input


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CurveSyntaxError(_byte_offset(text, pos), ["token"], text[pos])
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


# -- parser -----------------------------------------------------------------

_ATOM_START = ("number", "s", "pi", "e", "function", "(", "-")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def error(self, expected):
        raise CurveSyntaxError(self.tok.offset, expected, self.tok.text)

    def expect(self, text: str):
        if not self.at(text):
            self.error([text])
        return self.advance()

    def expression_list(self) -> list[Expr]:
        exprs = [self.expr()]
        while self.at(","):
            self.advance()
            exprs.append(self.expr())
        if self.tok.kind != "end":
            self.error(["+", "-", "*", "/", "^", ",", "end of input"])
        return exprs

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.advance()
            return Pow(base, self.rational())
        return base

    def rational(self) -> Fraction:
        if self.tok.kind == "number":
            return Fraction(self.advance().text)
        if not self.at("("):
            self.error(["number", "("])
        self.advance()
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "number":
            self.error(["number", "-"])
        value = Fraction(self.advance().text)
        if self.at("/"):
            self.advance()
            if self.tok.kind != "number":
                self.error(["number"])
            denom = Fraction(self.advance().text)
            if denom == 0:
                raise CurveSyntaxError(self.tokens[self.pos - 1].offset, ["nonzero number"], "0")
            value /= denom
        self.expect(")")
        return sign * value

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "s":
                return Param()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                return self.call(tok)
            self.pos -= 1
            self.error(_ATOM_START)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.error(_ATOM_START)

    def call(self, name: Token) -> Call:
        self.expect("(")
        if self.at(")"):
            raise ArityError(f"{name.text}() at offset {name.offset} needs exactly one argument, got 0")
        arg = self.expr()
        if self.at(","):
            raise ArityError(
                f"{name.text}() at offset {name.offset} takes exactly one argument, got more"
            )
        self.expect(")")
        return Call(name.text, arg)


def parse_expr(text: str) -> Expr:
    """Parse a single expression."""
    exprs = parse_expressions(text, 1)
    return exprs[0]


def parse_expressions(text: str, count: int) -> list[Expr]:
    """Parse exactly ``count`` comma-separated expressions."""
    if not text or not text.strip():
        raise CurveSyntaxError(0, _ATOM_START, "")
    parser = _Parser(text)
    exprs = parser.expression_list()
    if len(exprs) != count:
        raise CurveSyntaxError(
            parser.tok.offset,
            [f"{count} comma-separated expressions"],
            f"{len(exprs)} expressions",
        )
    return exprs


# -- printing ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _format_rational(r: Fraction) -> str:
    if r.denominator == 1 and r >= 0:
        return str(r.numerator)
    if r.denominator == 1:
        return f"({r.numerator})"
    return f"({r.numerator}/{r.denominator})"


def to_text(node: Expr) -> str:
    """Render an AST back to source text that parses to the same AST."""
    if isinstance(node, Num):
        if node.value < 0 or not math.isfinite(node.value):
            raise ValueError(f"literal {node.value!r} has no source form")
        return repr(float(node.value))
    if isinstance(node, Param):
        return "s"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        return "-" + (inner if _prec(node.arg) >= 3 else f"({inner})")
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{_format_rational(node.exponent)}"
    prec = _PREC[node.op]
    left = to_text(node.left)
    if _prec(node.left) < prec:
        left = f"({left})"
    right = to_text(node.right)
    if _prec(node.right) <= prec:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# -- evaluation -------------------------------------------------------------


def evaluate(node: Expr, s: Jet) -> Jet:
    """Evaluate an AST with the parameter bound to the jet ``s``."""
    if isinstance(node, Num):
        return Jet.constant(np.full(np.shape(s.value), node.value))
    if isinstance(node, Param):
        return s
    if isinstance(node, Const):
        return Jet.constant(np.full(np.shape(s.value), CONSTANTS[node.name]))
    if isinstance(node, Neg):
        return -evaluate(node.arg, s)
    if isinstance(node, Call):
        return jet_apply(node.func, evaluate(node.arg, s))
    if isinstance(node, Pow):
        return jet_apply("pow", evaluate(node.base, s), node.exponent)
    left = evaluate(node.left, s)
    right = evaluate(node.right, s)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


def probe_grid(domain) -> np.ndarray:
    return np.linspace(domain[0], domain[1], PROBE_POINTS)


def probe_exprs(exprs, domain):
    """Raise :class:`DomainProbeError` unless every expression is finite on the probe grid."""
    grid = probe_grid(domain)
    for i, node in enumerate(exprs):
        for s in grid:
            try:
                ok = evaluate(node, Jet.variable(s)).isfinite()
            except DomainError as exc:
                raise DomainProbeError(i, s, str(exc)) from None
            if not ok:
                raise DomainProbeError(i, s)


# -- curves -----------------------------------------------------------------


def _check_domain(domain) -> tuple[float, float]:
    lo, hi = (float(v) for v in domain)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InputError(f"domain must be a finite interval with lo < hi, got {domain!r}")
    return lo, hi


@dataclass(frozen=True)
class CurveSpec:
    """A curve ``s -> (x1(s), x2(s), x3(s), x4(s))`` on a closed interval."""

    coords: tuple
    label: str = ""
    domain: tuple = (0.0, 1.0)
    _probe: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if len(self.coords) != 4:
            raise InputError("a curve in E^4 needs four coordinate expressions")
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "domain", _check_domain(self.domain))
        if self._probe:
            probe_exprs(self.coords, self.domain)

    @property
    def text(self) -> str:
        return ", ".join(to_text(c) for c in self.coords)


def parse_curve(text: str, domain=(0.0, 1.0), label: str | None = None) -> CurveSpec:
    """Parse four comma-separated coordinate expressions into a :class:`CurveSpec`."""
    coords = parse_expressions(text, 4)
    return CurveSpec(tuple(coords), label=text if label is None else label, domain=domain)


def eval_curve_jet(spec: CurveSpec, s0) -> JetVec4:
    """Position and derivatives 1..4 of ``spec`` at ``s0``.

    ``s0`` may be a scalar or an array of parameter values; the result has
    shape ``(5, 4)`` or ``(5, 4, n)`` respectively.
    """
    lo, hi = spec.domain
    s0 = np.asarray(s0, dtype=float)
    span = hi - lo
    if np.any(s0 < lo - 1e-12 * span) or np.any(s0 > hi + 1e-12 * span):
        raise InputError(f"s0 outside curve domain [{lo}, {hi}]")
    s = Jet.variable(s0)
    return JetVec4.from_components(evaluate(c, s) for c in spec.coords)


_CATALOG = {
    "example1": ("sin(s), 2*s + 1, 2*s - 1, s", (-1.0, 1.0)),
    "example2": (
        "sin(s/sqrt(2)), cos(s/sqrt(2)), sin(s)/sqrt(2), cos(s)/sqrt(2)",
        (0.0, 2 * math.pi),
    ),
    "circle": ("cos(s), sin(s), 0, 0", (0.0, 2 * math.pi)),
    "line": ("s, 0, 0, 0", (0.0, 2.0)),
    "helix3": ("cos(s/sqrt(2)), sin(s/sqrt(2)), s/sqrt(2), 0", (0.0, 4 * math.pi)),
}

BUILTIN_NAMES = tuple(_CATALOG)


def builtin_curve(name: str, domain=None) -> CurveSpec:
    """Catalog curve by name; ``domain`` overrides its default interval."""
    try:
        text, default = _CATALOG[name]
    except KeyError:
        raise UnknownCurveError(name, BUILTIN_NAMES) from None
    return parse_curve(text, default if domain is None else domain, label=name)
