"""Certified bounds on root moduli and on the Mahler measure.

All formulas only look at coefficient magnitudes, so they are evaluated in
the log2 domain on integers. Deep Graeffe iterates therefore never overflow;
once the exact iterate grows past ``cap_bits`` per coefficient the iteration
continues on scaled majorants (upper bounds for every coefficient, a lower
bound for the leading one), which keeps every derived bound valid.
"""

from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Final, Literal

from pydantic import BaseModel, ConfigDict, Field

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, mul, multiply_coefficients
from factor_bounds.upper import SLACK, UpperReal, lift, round_up

logger = logging.getLogger(__name__)

DEFAULT_CAP_BITS: Final[int] = 8192
NEWTON_MAX_ITERATIONS: Final[int] = 64
NEWTON_TOLERANCE: Final[float] = 2.0**-20
CAUCHY_MAX_DEGREE: Final[int] = 64

RootBoundMethod = Literal["knuth", "zassenhaus", "cauchy_newton", "graeffe"]


class RootBoundResult(BaseModel):
    """Upper bound on the largest root modulus."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: UpperReal = Field(..., description="Bound on max |alpha_i|")
    method: RootBoundMethod = Field(..., description="Formula that produced rho")
    graeffe_depth: int = Field(0, ge=0, description="Depth of the winning iterate")
    newton_iters: int = Field(0, ge=0, description="Newton steps at that depth")


class MahlerEstimate(BaseModel):
    """Upper estimate of the Mahler measure."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    upper: UpperReal = Field(..., description="Certified upper bound on M(f)")
    graeffe_depth: int = Field(0, ge=0, description="Depth of the winning iterate")


def log2_up(n: int) -> float:
    """Upper bound on log2(n) for a positive integer."""
    bits = n.bit_length()
    if bits <= 53:
        return lift(math.log2(n))
    top = n >> (bits - 53)
    return lift(math.log2(top + 1) + (bits - 53), bits)


def log2_down(n: int) -> float:
    """Lower bound on log2(n) for a positive integer."""
    bits = n.bit_length()
    if bits <= 53:
        value = math.log2(n)
    else:
        value = math.log2(n >> (bits - 53)) + (bits - 53)
    return value - (abs(value) + bits + 1.0) * SLACK


def auto_depth(degree: int) -> int:
    """max(3, ceil(log2 d))."""
    return max(3, math.ceil(math.log2(max(degree, 1))))


@dataclass(frozen=True)
class Magnitudes:
    """Coefficient magnitudes of a Graeffe iterate, ascending.

    True magnitudes are at most ``values[i] * 2**shift``; the leading entry is
    instead a lower bound for the true leading magnitude, and ``lead_upper``
    an upper bound for it once the entries are rounded.
    """

    values: tuple[int, ...]
    shift: int = 0
    exact: bool = True
    lead_upper: int | None = None

    @property
    def degree(self) -> int:
        return len(self.values) - 1

    @property
    def upper_values(self) -> tuple[int, ...]:
        """Upper bounds for every magnitude, the leading one included."""
        if self.lead_upper is None:
            return self.values
        return (*self.values[:-1], self.lead_upper)

    @classmethod
    def of(cls, poly: IntPoly) -> Magnitudes:
        return cls(tuple(abs(c) for c in poly.coeffs))


def graeffe(f: IntPoly) -> IntPoly:
    """One Graeffe step: g(x**2) == (-1)**d f(x) f(-x), squaring every root."""
    if f.is_zero:
        return f
    even = IntPoly(f.coeffs[0::2])
    odd = IntPoly(f.coeffs[1::2])
    odd_square = mul(odd, odd)
    result = mul(even, even) - IntPoly((0, *odd_square.coeffs))
    return -result if (len(f) - 1) % 2 else result


def _rescale(
    upper: Sequence[int], shift: int, cap_bits: int, lead: int | None = None
) -> Magnitudes:
    """Scale upper bounds ``upper`` and a lower bound ``lead`` on the leading magnitude."""
    lead = upper[-1] if lead is None else lead
    widest = max(v.bit_length() for v in upper)
    excess = min(widest - cap_bits, lead.bit_length() - 64)
    if excess <= 0:
        return Magnitudes((*upper[:-1], lead), shift, exact=False, lead_upper=upper[-1])
    # round the upper bounds up and the leading lower bound down
    scaled = [-((-v) >> excess) for v in upper]
    return Magnitudes(
        (*scaled[:-1], lead >> excess), shift + excess, exact=False, lead_upper=scaled[-1]
    )


def _majorant_step(current: Magnitudes, cap_bits: int) -> Magnitudes:
    upper = current.upper_values
    square = multiply_coefficients(upper, upper)
    return _rescale(square[0::2], 2 * current.shift, cap_bits, current.values[-1] ** 2)


def graeffe_chain(
    f: IntPoly, depth: int, cap_bits: int = DEFAULT_CAP_BITS
) -> Iterator[Magnitudes]:
    """Magnitudes of f_0 = f, f_1, ..., f_depth."""
    poly: IntPoly | None = f
    current = Magnitudes.of(f)
    yield current
    for step in range(1, depth + 1):
        if poly is not None:
            poly = graeffe(poly)
            current = Magnitudes.of(poly)
            if max(c.bit_length() for c in current.values) > cap_bits:
                logger.debug(
                    "graeffe depth %d exceeds %d bits, switching to majorants",
                    step,
                    cap_bits,
                )
                current = _rescale(current.values, 0, cap_bits)
                poly = None
        else:
            current = _majorant_step(current, cap_bits)
        yield current


def _inverse_zassenhaus_log2(degree: int) -> float:
    """Upper bound on log2(1 / (2**(1/d) - 1))."""
    denominator = math.expm1(math.log(2.0) / degree) * (1.0 - 4 * SLACK)
    return lift(-math.log2(denominator))


def _knuth_log2(values: Sequence[int]) -> float:
    d = len(values) - 1
    lead = log2_down(values[d])
    best = -math.inf
    for i in range(1, d + 1):
        if values[d - i]:
            best = max(best, (log2_up(values[d - i]) - lead) / i)
    if best == -math.inf:
        return best
    return lift(1.0 + best, lead)


def _zassenhaus_log2(values: Sequence[int]) -> float:
    d = len(values) - 1
    lead = log2_down(values[d])
    best = -math.inf
    for i in range(1, d + 1):
        if values[d - i]:
            term = log2_up(values[d - i]) - lead - log2_down(math.comb(d, i))
            best = max(best, term / i)
    if best == -math.inf:
        return best
    return lift(best + _inverse_zassenhaus_log2(d), lead)


def _ratio_up(numerator: int, denominator: int) -> float:
    if numerator == 0:
        return 0.0
    try:
        value = numerator / denominator
    except OverflowError:
        return math.inf
    return round_up(value) if value > 0.0 else math.ulp(0.0)


def _newton_poly(coeffs: Sequence[float], y: float) -> tuple[float, float]:
    """t(y) = y**d - sum c_i y**i and t'(y), by Horner."""
    d = len(coeffs)
    value, slope = 1.0, 0.0
    for i in range(d - 1, -1, -1):
        slope = slope * y + value
        value = value * y - coeffs[i]
    return value, slope


def _is_above_root(coeffs: Sequence[float], y: float) -> bool:
    """Exact check that t(y) >= 0, hence y >= the positive root."""
    point = Fraction(y)
    total = point ** len(coeffs)
    for i, c in enumerate(coeffs):
        total -= Fraction(c) * point**i
    return total >= 0


def _cauchy_log2(values: Sequence[int], start_log2: float) -> tuple[float, int]:
    """log2 of an upper approximation of the Cauchy root, by Newton from above.

    The polynomial is rescaled by s = 2**ceil(start) so the iteration runs on
    y = x / s in (0, 1] with normalized coefficients rounded up.
    """
    d = len(values) - 1
    if not any(values[:d]):
        return -math.inf, 0
    exponent = math.ceil(start_log2)
    lead = values[d]
    coeffs = []
    for i in range(d):
        scale = exponent * (d - i)
        if scale >= 0:
            coeffs.append(_ratio_up(values[i], lead << scale))
        else:
            coeffs.append(_ratio_up(values[i] << -scale, lead))
    start = round_up(2.0 ** (start_log2 - exponent))
    y = start
    iterations = 0
    while iterations < NEWTON_MAX_ITERATIONS:
        value, slope = _newton_poly(coeffs, y)
        if value <= 0.0 or slope <= 0.0:
            break
        step = value / slope
        if y - step <= 0.0:
            break
        y -= step
        iterations += 1
        if step < y * NEWTON_TOLERANCE:
            break
    for _ in range(NEWTON_MAX_ITERATIONS):
        if _is_above_root(coeffs, y):
            return lift(exponent + math.log2(y), exponent), iterations
        y = min(round_up(y * (1.0 + NEWTON_TOLERANCE)), start)
        if y == start:
            break
    return start_log2, iterations


def _require_nonconstant(f: IntPoly) -> None:
    if f.is_constant:
        raise DomainError("root bounds need a polynomial of degree at least 1")


def knuth_bound(f: IntPoly) -> UpperReal:
    """K(f) = 2 max_i (|a_(d-i)| / |a_d|)**(1/i)."""
    _require_nonconstant(f)
    return UpperReal.from_log2(_knuth_log2(Magnitudes.of(f).values))


def zassenhaus_bound(f: IntPoly) -> UpperReal:
    """Z(f) = (2**(1/d) - 1)**-1 max_i (|a_(d-i)| / (|a_d| C(d, i)))**(1/i)."""
    _require_nonconstant(f)
    return UpperReal.from_log2(_zassenhaus_log2(Magnitudes.of(f).values))


def cauchy_bound(f: IntPoly) -> RootBoundResult:
    """Upper approximation of the positive root of |a_d| x**d - sum |a_i| x**i."""
    _require_nonconstant(f)
    values = Magnitudes.of(f).values
    start = min(_knuth_log2(values), _zassenhaus_log2(values))
    value, iterations = _cauchy_log2(values, start)
    return RootBoundResult(
        rho=UpperReal.from_log2(value),
        method="cauchy_newton",
        newton_iters=iterations,
    )


def _level_bound(
    magnitudes: Magnitudes, use_cauchy: bool
) -> tuple[float, RootBoundMethod, int]:
    """Best log2 root bound for one iterate, before taking the 2**t-th root."""
    knuth = _knuth_log2(magnitudes.values)
    zassenhaus = _zassenhaus_log2(magnitudes.values)
    best, method = (knuth, "knuth") if knuth <= zassenhaus else (zassenhaus, "zassenhaus")
    iterations = 0
    if use_cauchy and best > -math.inf:
        refined, iterations = _cauchy_log2(magnitudes.values, best)
        if refined < best:
            best, method = refined, "cauchy_newton"
    return best, method, iterations


@functools.lru_cache(maxsize=4096)
def _refined(f: IntPoly, depth: int, cap_bits: int) -> RootBoundResult:
    use_cauchy = len(f) - 1 <= CAUCHY_MAX_DEGREE
    best = math.inf
    result = RootBoundResult(rho=UpperReal(math.inf), method="knuth")
    for t, magnitudes in enumerate(graeffe_chain(f, depth, cap_bits)):
        if magnitudes.values[-1] == 0:
            break
        level, method, iterations = _level_bound(magnitudes, use_cauchy)
        if level == -math.inf:
            return RootBoundResult(rho=UpperReal(0.0), method=method)
        candidate = lift(level / 2**t, level)
        if candidate < best:
            best = candidate
            result = RootBoundResult(
                rho=UpperReal.from_log2(candidate),
                method="graeffe" if t else method,
                graeffe_depth=t,
                newton_iters=iterations,
            )
    return result


def refined_root_bound(
    f: IntPoly, depth: int | None = None, cap_bits: int = DEFAULT_CAP_BITS
) -> RootBoundResult:
    """min over t = 0..depth of (bound on the roots of f_t)**(1/2**t).

    Args:
        f: Polynomial of degree at least 1.
        depth: Graeffe depth; ``None`` selects max(3, ceil(log2 d)).
        cap_bits: Coefficient size at which exact Graeffe gives way to majorants.

    Returns:
        RootBoundResult: The certified bound and how it was obtained.
    """
    _require_nonconstant(f)
    if depth is None:
        depth = auto_depth(len(f) - 1)
    if depth < 0:
        raise DomainError(f"Graeffe depth must be nonnegative, got {depth}")
    return _refined(f, depth, cap_bits)


def _level_mahler_log2(magnitudes: Magnitudes) -> float:
    squares = sum(v * v for v in magnitudes.upper_values)
    return lift(magnitudes.shift + 0.5 * log2_up(squares), magnitudes.shift)


@functools.lru_cache(maxsize=4096)
def _mahler(f: IntPoly, depth: int, cap_bits: int) -> MahlerEstimate:
    best = math.inf
    best_depth = 0
    for t, magnitudes in enumerate(graeffe_chain(f, depth, cap_bits)):
        candidate = lift(_level_mahler_log2(magnitudes) / 2**t, magnitudes.shift)
        if candidate < best:
            best, best_depth = candidate, t
    return MahlerEstimate(upper=UpperReal.from_log2(best), graeffe_depth=best_depth)


def mahler_upper(
    f: IntPoly, depth: int | None = None, cap_bits: int = DEFAULT_CAP_BITS
) -> MahlerEstimate:
    """min over t of |f_t|_2**(1/2**t), an upper bound on M(f)."""
    if f.is_zero:
        raise DomainError("the Mahler measure of the zero polynomial is undefined")
    if depth is None:
        depth = auto_depth(max(len(f) - 1, 1))
    if depth < 0:
        raise DomainError(f"Graeffe depth must be nonnegative, got {depth}")
    return _mahler(f, depth, cap_bits)
