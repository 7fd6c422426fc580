"""Exception hierarchy.

Errors split into two families so the command line can map them to exit
codes: :class:`InputError` (bad text, files, names) and
:class:`NumericalError` (the geometry or arithmetic breaks down).
"""

from __future__ import annotations


class FramingError(Exception):
    """Base class for every error raised by this package."""


class InputError(FramingError, ValueError):
    """The caller supplied malformed or inconsistent input."""


class NumericalError(FramingError, ArithmeticError):
    """A numerical precondition failed during evaluation."""


# -- jets -------------------------------------------------------------------


class DomainError(NumericalError):
    def __init__(self, func: str, value: float):
        self.func = func
        self.value = float(value)
        super().__init__(f"{func} is undefined at argument value {self.value!r}")


# -- curve definitions ------------------------------------------------------


class CurveSyntaxError(InputError, SyntaxError):
    def __init__(self, offset: int, expected: list[str] | tuple[str, ...], found: str = ""):
        self.offset = int(offset)
        self.expected = tuple(expected)
        self.found = found
        what = f"found {found!r}" if found else "found end of input"
        super().__init__(
            f"syntax error at offset {self.offset}: expected one of "
            f"{', '.join(self.expected)}; {what}"
        )

    def __str__(self) -> str:
        return self.args[0]


class ArityError(InputError):
    pass


class DomainProbeError(InputError):
    def __init__(self, coord: int, s: float, reason: str = "non-finite value"):
        self.coord = coord
        self.s = float(s)
        super().__init__(f"coordinate x{coord + 1} fails at s={self.s!r}: {reason}")


class UnknownCurveError(InputError):
    def __init__(self, name: str, valid):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(f"unknown curve {name!r}; valid names: {', '.join(self.valid)}")


class ProfileDomainError(InputError):
    def __init__(self, s: float, domain):
        self.s = float(s)
        super().__init__(f"s={self.s!r} leaves the profile domain [{domain[0]}, {domain[1]}]")


# -- sampling / geometry ----------------------------------------------------


class StationaryPointError(NumericalError):
    def __init__(self, t: float, speed: float):
        self.t = float(t)
        self.speed = float(speed)
        super().__init__(f"curve is stationary at t={self.t!r} (speed {self.speed:.3e})")


class DegenerateFrameError(NumericalError):
    """The Frenet frame does not exist at this point.

    ``level`` is the Gram-Schmidt level whose residual vanished: 2 when the
    second derivative is parallel to the tangent (zero curvature), 3 when
    the third derivative stays in the osculating plane.
    """

    def __init__(self, level: int, residual: float, s: float | None = None):
        self.level = int(level)
        self.residual = float(residual)
        self.s = s
        where = "" if s is None else f" at s={s!r}"
        super().__init__(
            f"Frenet frame degenerate at level {self.level}{where} "
            f"(residual {self.residual:.3e})"
        )


class MismatchedSeriesError(InputError):
    pass


class NotUnitError(InputError):
    pass


class HintMismatchError(InputError):
    pass


class ZeroStepError(NumericalError):
    def __init__(self, index: int, s: float):
        self.index = index
        self.s = float(s)
        super().__init__(f"consecutive samples coincide at index {index} (s={self.s!r})")


class TangentMismatchError(InputError):
    pass


class NotRotationError(InputError):
    pass


class TooFewSamplesError(InputError):
    pass


class DegenerateGeometryError(NumericalError):
    pass


# -- file ingestion ---------------------------------------------------------


class ParseError(InputError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NonMonotoneParamError(InputError):
    def __init__(self, line: int, t: float):
        self.line = line
        self.t = float(t)
        super().__init__(f"line {line}: parameter t={self.t!r} is not strictly increasing")
