"""Tall factors of x^d - 1 over R[x] and C[x], with propagated error radii."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from typing import Final, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly
from factor_bounds.upper import SLACK

logger = logging.getLogger(__name__)

FactorKind = Literal["g_d", "h_d", "u_d", "v_d"]

UNIT_ROUNDOFF: Final[float] = 2.0**-53
# error of a computed root of unity or cosine, componentwise
ROOT_ERROR: Final[float] = 8 * UNIT_ROUNDOFF


def _upward(values: np.ndarray, terms: int) -> np.ndarray:
    """Cover the rounding of a length-``terms`` sum of products, then one more ulp."""
    scale = 1.0 + 4 * (terms + 2) * UNIT_ROUNDOFF + SLACK
    return np.nextafter(values * scale, np.inf)


class ComplexPolyApprox(BaseModel):
    """Complex coefficients, each known to lie within a radius of the exact value."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray = Field(..., description="Ascending complex128 coefficients")
    radii: np.ndarray = Field(..., description="Error radius of each coefficient")

    @model_validator(mode="after")
    def validate_radii(self) -> ComplexPolyApprox:
        """Radii must be finite, nonnegative and one per coefficient."""
        if self.coeffs.shape != self.radii.shape:
            raise ValueError(
                f"{self.coeffs.size} coefficients but {self.radii.size} error radii"
            )
        if not np.all(np.isfinite(self.radii)) or np.any(self.radii < 0):
            raise ValueError("error radii must be finite and nonnegative")
        return self

    @classmethod
    def from_coeffs(
        cls, coeffs: Sequence[complex], radii: Sequence[float] | None = None
    ) -> ComplexPolyApprox:
        values = np.asarray(coeffs, dtype=np.complex128)
        errors = np.zeros(values.size) if radii is None else np.asarray(radii, dtype=np.float64)
        return cls(coeffs=values, radii=errors)

    @classmethod
    def one(cls) -> ComplexPolyApprox:
        return cls.from_coeffs([1.0])

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def multiply(self, other: ComplexPolyApprox) -> ComplexPolyApprox:
        """Product with radius |a| * rb + ra * |b| + ra * rb plus rounding."""
        terms = min(self.coeffs.size, other.coeffs.size)
        abs_a, abs_b = np.abs(self.coeffs), np.abs(other.coeffs)
        values = np.convolve(self.coeffs, other.coeffs)
        propagated = (
            np.convolve(abs_a, other.radii)
            + np.convolve(self.radii, abs_b)
            + np.convolve(self.radii, other.radii)
        )
        rounding = 4 * (terms + 2) * UNIT_ROUNDOFF * np.convolve(abs_a, abs_b)
        return ComplexPolyApprox(coeffs=values, radii=_upward(propagated + rounding, terms))

    def negate_x(self) -> ComplexPolyApprox:
        signs = np.where(np.arange(self.coeffs.size) % 2, -1.0, 1.0)
        return ComplexPolyApprox(coeffs=self.coeffs * signs, radii=self.radii.copy())

    def height_interval(self) -> tuple[float, float]:
        """Certified enclosure of the largest coefficient modulus."""
        moduli = np.abs(self.coeffs)
        low = float(np.max(np.maximum(moduli - self.radii, 0.0)))
        high = float(np.max(_upward(moduli + self.radii, 1)))
        return max(low * (1.0 - 4 * UNIT_ROUNDOFF - SLACK), 0.0), high

    def contains(self, exact: IntPoly | Sequence[complex]) -> bool:
        """True when every exact coefficient lies inside its error disc."""
        values = exact.coeffs if isinstance(exact, IntPoly) else exact
        target = np.asarray(values, dtype=np.complex128)
        if target.size != self.coeffs.size:
            return False
        gaps = np.abs(self.coeffs - target)
        return bool(np.all(gaps <= _upward(self.radii, 1)))

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) <= self.radii))


class UnitCircleFactor(BaseModel):
    """A factor of x^d - 1 built from roots of unity, with its height enclosure."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int
    kind: FactorKind
    approx: ComplexPolyApprox
    height_low: float
    height_high: float

    @property
    def height(self) -> float:
        return (self.height_low + self.height_high) / 2


def _linear(root: complex) -> ComplexPolyApprox:
    """x - root, with the root known to ROOT_ERROR."""
    return ComplexPolyApprox.from_coeffs([-root, 1.0], [ROOT_ERROR, 0.0])


def _real_quadratic(d: int, k: int) -> ComplexPolyApprox:
    """x^2 - 2 cos(2 pi k / d) x + 1, the conjugate pair of zeta^k."""
    twice_cos = 2.0 * math.cos(2.0 * math.pi * k / d)
    return ComplexPolyApprox.from_coeffs([1.0, -twice_cos, 1.0], [0.0, 2 * ROOT_ERROR, 0.0])


def _product(factors: Iterable[ComplexPolyApprox]) -> ComplexPolyApprox:
    result = ComplexPolyApprox.one()
    for factor in factors:
        result = result.multiply(factor)
    return result


def _symmetric_block(d: int, t: int) -> ComplexPolyApprox:
    """prod over |k| <= t of (x - zeta^k), zeta = exp(2 pi i / d)."""
    return _product([_linear(1.0), *(_real_quadratic(d, k) for k in range(1, t + 1))])


def g_parameter(d: int) -> int:
    """t with g_d = prod over |k| < t of (x - zeta^k)."""
    if d % 3 == 1:
        return (d - 1) // 3
    return -(-d // 3)


def unit_circle_factor(d: int, kind: FactorKind) -> UnitCircleFactor:
    """g_d, h_d, u_d or v_d as a floating product with certified radii.

    Raises:
        DomainError: If d < 3 or d does not suit the kind: h_d needs
            d = 1 mod 3, u_d needs d = 2 mod 4 and v_d needs d = 0 mod 4.
    """
    if d < 3:
        raise DomainError(f"unit circle factors need d >= 3, got {d}")
    if kind == "g_d":
        approx = _symmetric_block(d, g_parameter(d) - 1)
    elif kind == "h_d":
        if d % 3 != 1:
            raise DomainError(f"h_d is defined for d = 1 mod 3, got d = {d}")
        t = g_parameter(d)
        zeta_t = complex(math.cos(2 * math.pi * t / d), math.sin(2 * math.pi * t / d))
        approx = _symmetric_block(d, t - 1).multiply(_linear(zeta_t))
    elif kind == "u_d":
        if d % 4 != 2:
            raise DomainError(f"u_d is defined for d = 2 mod 4, got d = {d}")
        approx = _symmetric_block(d, (d - 2) // 4)
    elif kind == "v_d":
        if d % 4:
            raise DomainError(f"v_d is defined for d = 0 mod 4, got d = {d}")
        approx = _symmetric_block(d, (d - 4) // 4).multiply(
            ComplexPolyApprox.from_coeffs([1j, 1.0])
        )
    else:
        raise DomainError(f"unknown factor kind '{kind}'")
    low, high = approx.height_interval()
    logger.debug("%s for d=%d: height in [%g, %g]", kind, d, low, high)
    return UnitCircleFactor(d=d, kind=kind, approx=approx, height_low=low, height_high=high)


def symmetric_identity_holds(d: int, kind: Literal["u_d", "v_d"]) -> bool:
    """Check f(x) * f(-x) = (-1)^deg f * (x^d - 1) within the error radii."""
    factor = unit_circle_factor(d, kind).approx
    paired = factor.multiply(factor.negate_x())
    sign = -1 if factor.degree % 2 else 1
    target = IntPoly.monomial(d) - 1
    return paired.contains(target * sign)


def height_growth_fit(kind: FactorKind, degrees: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope and intercept of log ht against d."""
    if len(degrees) < 2:
        raise DomainError("a growth fit needs at least two degrees")
    logs = [math.log(unit_circle_factor(d, kind).height) for d in degrees]
    slope, intercept = np.polyfit(np.asarray(degrees, dtype=np.float64), np.asarray(logs), 1)
    return float(slope), float(intercept)


def u_d_height_lower_bound(d: int) -> float:
    """2^((3d+2)/8) / (d/2 + 1), from |u_d(-1)| and the degree of u_d."""
    if d % 4 != 2:
        raise DomainError(f"u_d is defined for d = 2 mod 4, got d = {d}")
    return 2.0 ** ((3 * d + 2) / 8) / (d / 2 + 1)
