"""Nonnegative reals that are certified upper bounds.

Every value is a double that is never smaller than the exact real it stands
for. Inexact results are pushed upward by a relative slack of 2**-40 and one
extra ulp, which is far below the precision any of the printed bounds need.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Final

from factor_bounds.exceptions import BoundOverflowError

SLACK: Final[float] = 2.0**-40


def round_up(value: float) -> float:
    """Return a float that is at least ``value`` plus the certification slack."""
    if value == 0.0 or math.isinf(value):
        return value
    if value > 0.0:
        return math.nextafter(value * (1.0 + SLACK), math.inf)
    return math.nextafter(value * (1.0 - SLACK), math.inf)


def round_down(value: float) -> float:
    """Mirror of :func:`round_up`."""
    return -round_up(-value)


def lift(value: float, scale: float = 0.0) -> float:
    """Push a computed value up to cover rounding on operands of size ``scale``.

    Used for log-domain quantities, where subtracting two large logarithms
    leaves an absolute error proportional to the operands rather than to the
    result.
    """
    return value + (abs(value) + abs(scale) + 1.0) * SLACK


def _exact(value: int | Fraction | float) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _fraction_up(value: Fraction) -> float:
    if value == 0:
        return 0.0
    try:
        approx = float(value)
    except OverflowError:
        return math.inf
    if approx == 0.0:
        return math.ulp(0.0)
    while Fraction(approx) < value:
        approx = round_up(approx)
    return approx


@functools.total_ordering
class UpperReal:
    """A nonnegative real number carrying an upper-bound contract."""

    __slots__ = ("_value",)

    def __init__(self, value: float = 0.0):
        value = float(value)
        if math.isnan(value) or value < 0.0:
            raise ValueError(f"UpperReal must be a nonnegative number, got {value}")
        self._value = value

    @property
    def value(self) -> float:
        return self._value

    @classmethod
    def from_int(cls, number: int) -> UpperReal:
        """Exact integer, rounded up if it has no double representation."""
        return cls.from_fraction(Fraction(abs(number)))

    @classmethod
    def from_fraction(cls, number: Fraction) -> UpperReal:
        if number < 0:
            raise ValueError(f"UpperReal must be nonnegative, got {number}")
        return cls(_fraction_up(number))

    @classmethod
    def sqrt_of(cls, number: int | Fraction) -> UpperReal:
        """Certified square root of an exact nonnegative rational."""
        exact = _exact(number)
        if exact < 0:
            raise ValueError(f"cannot take the square root of {number}")
        if exact == 0:
            return cls(0.0)
        if exact.denominator == 1:
            root = math.isqrt(exact.numerator)
            if root * root == exact.numerator:
                return cls.from_int(root)
        try:
            approx = round_up(math.sqrt(float(exact)))
        except OverflowError:
            # float(exact) overflows: go through the integer square root
            root = math.isqrt(exact.numerator // exact.denominator) + 1
            return cls.from_int(root)
        if approx == 0.0:
            approx = math.ulp(0.0)
        while Fraction(approx) ** 2 < exact:
            approx = round_up(approx)
        return cls(approx)

    @classmethod
    def from_log2(cls, exponent: float) -> UpperReal:
        """2**exponent, rounded up; ``-inf`` maps to zero."""
        if exponent == -math.inf:
            return cls(0.0)
        try:
            return cls(round_up(2.0 ** round_up(exponent)))
        except OverflowError:
            return cls(math.inf)

    def log2(self) -> float:
        """Upper bound on log2 of the value."""
        if self._value == 0.0:
            return -math.inf
        return lift(math.log2(self._value))

    def _coerce(self, other: object) -> float | None:
        if isinstance(other, UpperReal):
            return other._value
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise ValueError(f"cannot combine an UpperReal with negative {other}")
            return _fraction_up(Fraction(other))
        if isinstance(other, float):
            if other < 0:
                raise ValueError(f"cannot combine an UpperReal with negative {other}")
            return other
        return None

    def __add__(self, other: object) -> UpperReal:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return UpperReal(round_up(self._value + value))

    __radd__ = __add__

    def __mul__(self, other: object) -> UpperReal:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if self._value == 0.0 or value == 0.0:
            return UpperReal(0.0)
        return UpperReal(round_up(self._value * value))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> UpperReal:
        """Division by an exact positive number."""
        if not isinstance(other, (int, Fraction)) or other <= 0:
            return NotImplemented
        divisor = Fraction(other)
        # rounding the divisor down keeps the quotient an upper bound
        lower = float(divisor)
        if Fraction(lower) > divisor:
            lower = round_down(lower)
        if lower <= 0.0:
            return UpperReal(math.inf)
        return UpperReal(round_up(self._value / lower))

    def __pow__(self, exponent: int) -> UpperReal:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        if exponent == 0:
            return UpperReal(1.0)
        try:
            return UpperReal(round_up(self._value**exponent))
        except OverflowError:
            return UpperReal(math.inf)

    def root(self, degree: int) -> UpperReal:
        """Upper bound on the ``degree``-th root."""
        if degree < 1:
            raise ValueError(f"root degree must be positive, got {degree}")
        if degree == 1 or self._value in (0.0, 1.0, math.inf):
            return self
        return UpperReal(round_up(self._value ** (1.0 / degree)))

    def sqrt(self) -> UpperReal:
        return UpperReal(round_up(math.sqrt(self._value)))

    def floor(self) -> int:
        """Largest integer not exceeding the float value."""
        if math.isinf(self._value):
            raise BoundOverflowError("bound exceeds the double range")
        return math.floor(self._value)

    def __float__(self) -> float:
        return self._value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UpperReal):
            return self._value == other._value
        if isinstance(other, (int, float, Fraction)):
            return self._value == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, UpperReal):
            return self._value < other._value
        if isinstance(other, (int, float, Fraction)):
            return self._value < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._value)

    def __repr__(self) -> str:
        return f"UpperReal({self._value!r})"

    def __str__(self) -> str:
        return repr(self._value)


def upper_min(*values: UpperReal) -> UpperReal:
    """The smallest of several upper bounds is still an upper bound."""
    return min(values, key=lambda item: item.value)
