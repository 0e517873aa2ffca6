"""Measurements around the heights of powers of a polynomial."""

from __future__ import annotations

import logging
import math
from itertools import product as cartesian

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize_scalar

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, height, negate_x

logger = logging.getLogger(__name__)


class PowerCheck(BaseModel):
    """ht(f^k) against C(k, floor(k/2)) * ht(f)."""

    model_config = ConfigDict(frozen=True)

    k: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs


class SandwichCheck(BaseModel):
    """|f|^n / (1 + n deg f) <= ht(f^n) <= |f|^n, with |f| sampled on the unit circle."""

    model_config = ConfigDict(frozen=True)

    n: int
    modulus: float
    lower: float
    height: int
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.height <= self.upper


def _is_excluded(f: IntPoly) -> bool:
    nonzero = [c for c in f.coeffs if c]
    return len(nonzero) == 1 and abs(nonzero[0]) == 1


def conjecture_power_check(f: IntPoly, k: int) -> PowerCheck:
    """Exact comparison of ht(f^k) with C(k, floor(k/2)) * ht(f).

    Raises:
        DomainError: If f is zero or +-x^d, or k < 1.
    """
    if f.is_zero or _is_excluded(f):
        raise DomainError(f"{f} is excluded: the comparison needs f nonzero and not +-x^d")
    if k < 1:
        raise DomainError(f"the power k must be positive, got {k}")
    return PowerCheck(k=k, lhs=height(f**k), rhs=math.comb(k, k // 2) * height(f))


def _modulus_at(coeffs_desc: np.ndarray, theta: float) -> float:
    return float(abs(np.polyval(coeffs_desc, np.exp(2j * np.pi * theta))))


def max_modulus_estimate(f: IntPoly, samples: int | None = None) -> float:
    """max |f(e^(2 pi i theta))| by dense sampling and a golden-section refinement.

    A measurement, not a certified bound.

    Raises:
        DomainError: If f is zero or ``samples`` is below 4 * deg f.
    """
    if f.is_zero:
        raise DomainError("the maximum modulus of the zero polynomial is 0 and not useful")
    degree = len(f) - 1
    if degree == 0:
        return float(abs(f.lc))
    if samples is None:
        samples = 64 * degree
    if samples < 4 * degree:
        raise DomainError(f"need at least {4 * degree} samples for degree {degree}, got {samples}")
    coeffs_desc = np.array(f.coeffs_desc, dtype=np.float64)
    thetas = np.arange(samples) / samples
    moduli = np.abs(np.polyval(coeffs_desc, np.exp(2j * np.pi * thetas)))
    index = int(np.argmax(moduli))
    best = float(moduli[index])
    step = 1.0 / samples
    centre = float(thetas[index])
    try:
        refined = minimize_scalar(
            lambda theta: -_modulus_at(coeffs_desc, theta),
            bracket=(centre - step, centre, centre + step),
            method="golden",
        )
    except (ValueError, RuntimeError):
        # flat neighbourhood, the bracket is not strict
        return best
    return max(best, -float(refined.fun))


def amoroso_sandwich(f: IntPoly, n: int, samples: int | None = None) -> SandwichCheck:
    """Place ht(f^n) between |f|^n / (1 + n deg f) and |f|^n."""
    if n < 1:
        raise DomainError(f"the power n must be positive, got {n}")
    modulus = max_modulus_estimate(f, samples)
    upper = modulus**n
    return SandwichCheck(
        n=n,
        modulus=modulus,
        lower=upper / (1 + n * (len(f) - 1)),
        height=height(f**n),
        upper=upper,
    )


def power_height_constant(f: IntPoly, n: int, samples: int | None = None) -> float:
    """ht(f^n) * sqrt(n) / |f|^n, which settles to a constant as n grows."""
    modulus = max_modulus_estimate(f, samples)
    return height(f**n) * math.sqrt(n) / modulus**n


def square_equality_search(degree: int, height_cap: int) -> list[IntPoly]:
    """All f of the given degree and height <= cap with ht(f^2) = 2 ht(f).

    Only f with positive leading and nonzero constant coefficient are listed,
    and of f and f(-x) only the first in enumeration order.
    """
    if degree < 1 or height_cap < 1:
        raise DomainError("degree and height cap must be positive")
    span = range(-height_cap, height_cap + 1)
    seen: set[IntPoly] = set()
    found: list[IntPoly] = []
    for middle in cartesian(span, repeat=degree - 1):
        for tc in span:
            if not tc:
                continue
            for lc in range(1, height_cap + 1):
                f = IntPoly((tc, *middle, lc))
                if f in seen:
                    continue
                mirrored = negate_x(f)
                seen.add(mirrored if mirrored.lc > 0 else -mirrored)
                if height(f * f) == 2 * height(f):
                    found.append(f)
    logger.info("degree %d, cap %d: %d equality cases", degree, height_cap, len(found))
    return found
