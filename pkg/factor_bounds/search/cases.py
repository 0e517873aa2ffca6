"""Factorization cases, their ratio, and exact re-verification."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from fractions import Fraction
from typing import Any, Final, Literal

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from factor_bounds.cyclotomic import cyclotomic
from factor_bounds.exceptions import DomainError
from factor_bounds.parsing import to_json
from factor_bounds.polycore import (
    IntPoly,
    Ratio,
    content,
    divides,
    factorization_ratio,
    height,
    is_palindromic,
    product,
)

logger = logging.getLogger(__name__)

CaseTag = Literal["palindromic", "star_symmetric", "irreducible_claimed", "weakly_checked"]

# Cyclotomic trial division stops here; commonly occurring divisors are all
# of low index.
WEAK_CYCLOTOMIC_LIMIT: Final[int] = 105


class FactorizationCase(BaseModel):
    """A product together with a factor list whose product it is."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    product: IntPoly = Field(..., description="The factored polynomial")
    factors: tuple[IntPoly, ...] = Field(..., min_length=1, description="g_1, ..., g_s")
    tags: frozenset[CaseTag] = Field(default_factory=frozenset)
    source: str = Field("", description="Where the case comes from")

    @field_validator("factors")
    @classmethod
    def validate_factors(cls, v: tuple[IntPoly, ...]) -> tuple[IntPoly, ...]:
        """
        Reject constant factors.

        Args:
            v: Factor list.

        Returns:
            tuple[IntPoly, ...]: The validated factors.

        Raises:
            ValueError: If any factor is constant.
        """
        for index, factor in enumerate(v):
            if factor.is_constant:
                raise ValueError(
                    f"factor {index} is constant ({factor}).\n"
                    "Every factor of a case must have positive degree."
                )
        return v

    @model_validator(mode="after")
    def validate_product(self) -> FactorizationCase:
        """The factor list must multiply out to the product exactly."""
        expected = product(self.factors)
        if expected != self.product:
            raise ValueError(
                f"product mismatch: the factors multiply to {expected}, "
                f"not {self.product}"
            )
        return self

    @classmethod
    def from_factors(
        cls,
        factors: Iterable[IntPoly],
        tags: Iterable[CaseTag] = (),
        source: str = "",
    ) -> FactorizationCase:
        items = tuple(factors)
        return cls(product=product(items), factors=items, tags=frozenset(tags), source=source)

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(height(g) for g in self.factors)

    @property
    def product_height(self) -> int:
        return height(self.product)

    def to_json(self) -> dict[str, Any]:
        return {
            "product": to_json(self.product)["coeffs_desc"],
            "factors": [to_json(g)["coeffs_desc"] for g in self.factors],
            "heights": [str(h) for h in self.heights],
            "product_height": str(self.product_height),
            "ratio": str(ratio(self)),
            "tags": sorted(self.tags),
            "source": self.source,
        }


class HeightRecord(BaseModel):
    """A printed result that cannot be rebuilt into a full factorization."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=1, description="Degree of the product")
    product_height: int | None = Field(None, ge=1)
    factor_height: int = Field(..., ge=1, description="Height of the printed factor")
    ratio: str | None = Field(None, description="Printed ratio, as text")
    source: str = ""
    reason: str = Field("", description="Why the full case is unavailable")


class CaseReport(BaseModel):
    """Result of re-verifying a case."""

    model_config = ConfigDict(frozen=True)

    product_ok: bool
    product_height: int
    heights: tuple[int, ...]
    ratio: Ratio
    weak_irreducibility: tuple[bool, ...] = Field(
        ..., description="Per factor: passed the weak irreducibility filter"
    )


def ratio(case: FactorizationCase) -> Ratio:
    """min(ht(g_i)) / ht(product), as an exact rational."""
    if case.product.is_zero:
        raise DomainError("the ratio of the zero polynomial is undefined")
    return factorization_ratio(case.product, case.factors)


def _has_rational_root(g: IntPoly) -> bool:
    if g.tc == 0:
        return True
    for q in sympy.divisors(abs(g.lc)):
        for p in sympy.divisors(abs(g.tc)):
            if sympy.igcd(p, q) != 1:
                continue
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                value = Fraction(0)
                for c in reversed(g.coeffs):
                    value = value * candidate + c
                if value == 0:
                    return True
    return False


def weakly_irreducible(g: IntPoly, limit: int = WEAK_CYCLOTOMIC_LIMIT) -> bool:
    """Filter for irreducibility: primitive, no rational root, no low cyclotomic divisor.

    A False answer proves reducibility; True only means the filter found
    nothing.
    """
    if g.is_constant:
        raise DomainError("weak irreducibility is defined for nonconstant polynomials")
    if abs(content(g)) != 1:
        return False
    degree = len(g) - 1
    if degree == 1:
        return True
    if _has_rational_root(g):
        return False
    for n in range(3, limit + 1):
        phi = cyclotomic(n)
        if len(phi) - 1 < degree and divides(phi, g):
            logger.debug("cyclotomic divisor phi_%d found", n)
            return False
    return True


def verify_case(case: FactorizationCase, check_irreducibility: bool = True) -> CaseReport:
    """Recompute product, heights, ratio and the weak irreducibility filter."""
    product_ok = product(case.factors) == case.product
    weak = (
        tuple(weakly_irreducible(g) for g in case.factors)
        if check_irreducibility
        else tuple(False for _ in case.factors)
    )
    return CaseReport(
        product_ok=product_ok,
        product_height=case.product_height,
        heights=case.heights,
        ratio=ratio(case),
        weak_irreducibility=weak,
    )


def symmetry_tags(case_factors: tuple[IntPoly, ...], star_pair: bool) -> frozenset[CaseTag]:
    """Tags that hold for a factor list by construction."""
    tags: set[CaseTag] = set()
    if is_palindromic(product(case_factors)):
        tags.add("palindromic")
    if star_pair:
        tags.add("star_symmetric")
    return frozenset(tags)
