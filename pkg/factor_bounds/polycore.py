"""Exact dense polynomials over the integers.

``IntPoly`` stores coefficients in ascending order (index i holds the
coefficient of x**i) and is immutable. Text input and output use descending
order; see :mod:`factor_bounds.parsing`.
"""

from __future__ import annotations

import math
import operator
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from typing import Final, Self

from pydantic import BaseModel, ConfigDict, Field

from factor_bounds.exceptions import DomainError, NotDivisibleError
from factor_bounds.upper import UpperReal

# Below this many terms in the shorter operand schoolbook multiplication wins.
KRONECKER_THRESHOLD: Final[int] = 24


class _MinusInfinity:
    """Degree of the zero polynomial.

    Compares below every integer and supports no arithmetic, so code that
    forgets the zero case fails loudly instead of computing with -1.
    """

    _instance: _MinusInfinity | None = None

    def __new__(cls) -> _MinusInfinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int):
            return True
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if isinstance(other, int) or other is self:
            return True
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, int) or other is self:
            return False
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, int):
            return False
        if other is self:
            return True
        return NotImplemented

    def __repr__(self) -> str:
        return "MINUS_INFINITY"


MINUS_INFINITY: Final[_MinusInfinity] = _MinusInfinity()

type Degree = int | _MinusInfinity


def _pack(values: Iterable[int], width: int) -> int:
    return int.from_bytes(
        b"".join(value.to_bytes(width, "little") for value in values), "little"
    )


def _kronecker_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Multiply by packing both operands into single Python integers."""
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8

    def signed_pack(values: Sequence[int]) -> int:
        positive = _pack((v if v > 0 else 0 for v in values), width)
        negative = _pack((-v if v < 0 else 0 for v in values), width)
        return positive - negative

    size = len(a) + len(b) - 1
    half = 1 << (8 * width - 1)
    # adding half to every slot makes all digits nonnegative, so no borrows
    packed = signed_pack(a) * signed_pack(b) + _pack([half] * size, width)
    raw = packed.to_bytes(size * width, "little")
    return [
        int.from_bytes(raw[i * width : (i + 1) * width], "little") - half
        for i in range(size)
    ]


def _schoolbook_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    result = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                result[i + j] += ai * bj
    return result


def multiply_coefficients(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of two ascending coefficient lists (both nonempty)."""
    if min(len(a), len(b)) < KRONECKER_THRESHOLD:
        return _schoolbook_mul(a, b)
    return _kronecker_mul(a, b)


class IntPoly:
    """Immutable dense polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        values = [operator.index(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self._coeffs: tuple[int, ...] = tuple(values)
        self._hash: int | None = None

    @classmethod
    def from_desc(cls, coeffs: Iterable[int]) -> Self:
        """Build from a descending coefficient list, as printed in tables."""
        return cls(reversed(list(coeffs)))

    @classmethod
    def monomial(cls, power: int, coeff: int = 1) -> Self:
        if power < 0:
            raise DomainError(f"monomial power must be nonnegative, got {power}")
        return cls([0] * power + [coeff])

    @classmethod
    def x(cls) -> Self:
        return cls((0, 1))

    @classmethod
    def constant(cls, value: int) -> Self:
        return cls((value,))

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Ascending coefficients, empty for the zero polynomial."""
        return self._coeffs

    @property
    def coeffs_desc(self) -> tuple[int, ...]:
        return self._coeffs[::-1] if self._coeffs else (0,)

    @property
    def degree(self) -> Degree:
        return len(self._coeffs) - 1 if self._coeffs else MINUS_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_constant(self) -> bool:
        return len(self._coeffs) <= 1

    @property
    def lc(self) -> int:
        """Leading coefficient (0 for the zero polynomial)."""
        return self._coeffs[-1] if self._coeffs else 0

    @property
    def tc(self) -> int:
        """Trailing (constant) coefficient."""
        return self._coeffs[0] if self._coeffs else 0

    def __getitem__(self, index: int) -> int:
        if 0 <= index < len(self._coeffs):
            return self._coeffs[index]
        return 0

    def __iter__(self) -> Iterator[int]:
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == IntPoly((other,))._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("IntPoly", self._coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"IntPoly.from_desc({list(self.coeffs_desc)})"

    def __str__(self) -> str:
        from factor_bounds.parsing import format_expr

        return format_expr(self)

    def __neg__(self) -> IntPoly:
        return IntPoly(-c for c in self._coeffs)

    def __add__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other: int) -> IntPoly:
        if not isinstance(other, int):
            return NotImplemented
        return sub(IntPoly((other,)), self)

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(c * other for c in self._coeffs)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> IntPoly:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = IntPoly((1,))
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            exponent >>= 1
            if exponent:
                base = mul(base, base)
        return result

    def __call__(self, x0: int) -> int:
        return eval_at_int(self, x0)


def add(p: IntPoly, q: IntPoly) -> IntPoly:
    size = max(len(p), len(q))
    return IntPoly(p[i] + q[i] for i in range(size))


def sub(p: IntPoly, q: IntPoly) -> IntPoly:
    size = max(len(p), len(q))
    return IntPoly(p[i] - q[i] for i in range(size))


def mul(p: IntPoly, q: IntPoly) -> IntPoly:
    if p.is_zero or q.is_zero:
        return IntPoly()
    return IntPoly(multiply_coefficients(p.coeffs, q.coeffs))


def product(polys: Iterable[IntPoly]) -> IntPoly:
    """Multiply a sequence of polynomials, balancing operand sizes."""
    items = list(polys)
    if not items:
        return IntPoly((1,))
    while len(items) > 1:
        paired = [mul(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def exact_divide(p: IntPoly, q: IntPoly) -> IntPoly:
    """Return r with q*r == p.

    Raises:
        ZeroDivisionError: If q is the zero polynomial.
        NotDivisibleError: If q does not divide p in Z[x].
    """
    if q.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if p.is_zero:
        return IntPoly()
    dp, dq = len(p) - 1, len(q) - 1
    if dp < dq:
        raise NotDivisibleError(f"degree {dp} polynomial is not divisible by degree {dq}")
    remainder = list(p.coeffs)
    lead = q.lc
    terms = [(j, c) for j, c in enumerate(q.coeffs) if c]
    quotient = [0] * (dp - dq + 1)
    for k in range(dp - dq, -1, -1):
        top = remainder[k + dq]
        if not top:
            continue
        factor, rest = divmod(top, lead)
        if rest:
            raise NotDivisibleError("leading coefficient does not divide the remainder")
        quotient[k] = factor
        for j, c in terms:
            remainder[k + j] -= factor * c
    if any(remainder[:dq]):
        raise NotDivisibleError("nonzero remainder")
    return IntPoly(quotient)


def divides(q: IntPoly, p: IntPoly) -> bool:
    """True when q divides p exactly in Z[x]."""
    try:
        exact_divide(p, q)
    except NotDivisibleError:
        return False
    return True


def reverse(p: IntPoly) -> IntPoly:
    """x**d * p(1/x)."""
    return IntPoly(reversed(p.coeffs))


def negate_x(p: IntPoly) -> IntPoly:
    """p(-x)."""
    return IntPoly(-c if i % 2 else c for i, c in enumerate(p.coeffs))


def star(p: IntPoly) -> IntPoly:
    """reverse(p)(-x), the partner in a *-symmetric factorization."""
    return reverse(negate_x(p))


def substitute_power(p: IntPoly, k: int) -> IntPoly:
    """p(x**k)."""
    if k < 1:
        raise DomainError(f"substitution power must be positive, got {k}")
    if p.is_zero:
        return p
    result = [0] * ((len(p) - 1) * k + 1)
    for i, c in enumerate(p.coeffs):
        result[i * k] = c
    return IntPoly(result)


def height(p: IntPoly) -> int:
    return max(map(abs, p.coeffs), default=0)


def l1_norm(p: IntPoly) -> int:
    return sum(map(abs, p.coeffs))


def l2_norm_squared(p: IntPoly) -> int:
    return sum(c * c for c in p.coeffs)


def l2_norm(p: IntPoly) -> UpperReal:
    return UpperReal.sqrt_of(l2_norm_squared(p))


def bombieri_norm_squared(p: IntPoly) -> Fraction:
    if p.is_zero:
        raise DomainError("the Bombieri norm of the zero polynomial is undefined")
    d = len(p) - 1
    return sum(
        (Fraction(c * c, math.comb(d, j)) for j, c in enumerate(p.coeffs)),
        start=Fraction(0),
    )


def bombieri_norm(p: IntPoly) -> UpperReal:
    """[p]_2, the l2 norm with |a_j|**2 weighted by 1/C(d, j)."""
    return UpperReal.sqrt_of(bombieri_norm_squared(p))


def eval_at_int(p: IntPoly, x0: int) -> int:
    value = 0
    for c in reversed(p.coeffs):
        value = value * x0 + c
    return value


def palindromic_sign(p: IntPoly) -> int:
    """+1 if p == reverse(p), -1 if p == -reverse(p), 0 otherwise."""
    if p.is_zero or p.tc == 0:
        return 0
    coeffs = p.coeffs
    if coeffs == coeffs[::-1]:
        return 1
    if all(a == -b for a, b in zip(coeffs, reversed(coeffs))):
        return -1
    return 0


def is_palindromic(p: IntPoly) -> bool:
    """True for +-palindromic polynomials."""
    return palindromic_sign(p) != 0


def is_star_symmetric(p: IntPoly) -> bool:
    """Necessary condition for p = g * star(g): even degree and star(p) == +-p."""
    if p.is_zero or p.tc == 0 or (len(p) - 1) % 2:
        return False
    mirrored = star(p)
    return mirrored == p or mirrored == -p


def content(p: IntPoly) -> int:
    return math.gcd(*p.coeffs) if p.coeffs else 0


class Ratio(BaseModel):
    """Smallest factor height over product height."""

    model_config = ConfigDict(frozen=True)

    numerator: int = Field(..., ge=0, description="Height of the smallest factor")
    denominator: int = Field(..., ge=1, description="Height of the product")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def factorization_ratio(product_poly: IntPoly, factors: Sequence[IntPoly]) -> Ratio:
    """Ratio of a factorization given as product and factor list."""
    if product_poly.is_zero:
        raise DomainError("the ratio of the zero polynomial is undefined")
    return Ratio(
        numerator=min(height(g) for g in factors), denominator=height(product_poly)
    )
