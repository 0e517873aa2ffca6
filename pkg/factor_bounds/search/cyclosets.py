"""Products of cyclotomic polynomials: factors of x^d - 1 and of prod(x^e_k - 1)."""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Sequence
from fractions import Fraction
from typing import Final

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field

from factor_bounds.cyclotomic import cyclo_height_records, cyclotomic
from factor_bounds.exceptions import DomainError, SearchSpaceError
from factor_bounds.polycore import IntPoly, height, multiply_coefficients, product

logger = logging.getLogger(__name__)

DEFAULT_DIVISOR_CAP: Final[int] = 24

# int64 convolution is exact while l1(a) * l1(b) stays below this
_INT64_SAFE: Final[int] = 1 << 62

__all__ = [
    "CyclotomicProduct",
    "SubsetSearchResult",
    "SubfactorResult",
    "cyclo_height_records",
    "max_height_subfactor",
    "product_family_xek",
    "xd1_subset_search",
]


class SubsetSearchResult(BaseModel):
    """Tallest factors of x^d - 1 in Z[x]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int
    height: int
    maximizers: tuple[tuple[int, ...], ...] = Field(
        ..., description="Cyclotomic index sets reaching the height, sorted"
    )

    @property
    def factor(self) -> IntPoly:
        """The factor built from the first maximizer."""
        return product(cyclotomic(n) for n in self.maximizers[0])


class SubfactorResult(BaseModel):
    """Tallest factor of a product of cyclotomic polynomials with multiplicities."""

    model_config = ConfigDict(frozen=True)

    height: int
    multiplicities: dict[int, int] = Field(
        ..., description="Exponent of each phi_n in the tallest factor"
    )


class CyclotomicProduct(BaseModel):
    """prod(x^e_k - 1) with its height data and square-free parts."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    exponents: tuple[int, ...]
    product: IntPoly
    height: int
    degree: int
    cofactor_lower_bound: Fraction = Field(
        ..., description="prod(e) / (1 + sum(e - 1)), a lower bound on ht(f / (x-1)^n)"
    )
    multiplicities: dict[int, int] = Field(..., description="Exponent of each phi_n")
    squarefree_heights: dict[int, int] = Field(
        ..., description="Height of the product of the phi_n of each multiplicity"
    )

    @property
    def tall_squarefree_part(self) -> bool:
        """True when a square-free part is taller than the product itself."""
        return any(h > self.height for h in self.squarefree_heights.values())


def _as_array(p: IntPoly) -> np.ndarray:
    return np.array(p.coeffs, dtype=np.int64)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two coefficient arrays, leaving int64 only when needed."""
    if int(np.abs(a).sum()) * int(np.abs(b).sum()) < _INT64_SAFE:
        return np.convolve(a.astype(np.int64), b.astype(np.int64))
    exact = multiply_coefficients([int(v) for v in a], [int(v) for v in b])
    return np.array(exact, dtype=object)


def _array_height(a: np.ndarray) -> int:
    return int(np.abs(a).max())


def xd1_subset_search(d: int, divisor_cap: int = DEFAULT_DIVISOR_CAP) -> SubsetSearchResult:
    """Search every product of the phi_n, n | d, for the tallest.

    Raises:
        DomainError: If d is not positive.
        SearchSpaceError: If d has more divisors than ``divisor_cap``.
    """
    if d < 1:
        raise DomainError(f"d must be positive, got {d}")
    divisors = sympy.divisors(d)
    if len(divisors) > divisor_cap:
        raise SearchSpaceError(
            f"x^{d} - 1 has {len(divisors)} cyclotomic factors, above the cap of "
            f"{divisor_cap}.\nThat is 2^{len(divisors)} subsets."
        )
    factors = [_as_array(cyclotomic(n)) for n in divisors]
    best = 0
    maximizers: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def extend(start: int, current: np.ndarray) -> None:
        nonlocal best, maximizers
        for i in range(start, len(divisors)):
            nxt = _convolve(current, factors[i])
            chosen.append(divisors[i])
            value = _array_height(nxt)
            if value > best:
                best, maximizers = value, [tuple(chosen)]
            elif value == best:
                maximizers.append(tuple(chosen))
            extend(i + 1, nxt)
            chosen.pop()

    extend(0, np.ones(1, dtype=np.int64))
    logger.info("x^%d - 1: tallest factor height %d (%d maximizers)", d, best, len(maximizers))
    return SubsetSearchResult(d=d, height=best, maximizers=tuple(sorted(maximizers)))


def cyclotomic_multiplicities(exponents: Sequence[int]) -> dict[int, int]:
    """Exponent of phi_n in prod(x^e_k - 1), for every n that occurs."""
    counts: Counter[int] = Counter()
    for e in exponents:
        counts.update(sympy.divisors(e))
    return dict(sorted(counts.items()))


def product_family_xek(exponents: Sequence[int]) -> CyclotomicProduct:
    """The product prod(x^e_k - 1) with its height and cofactor lower bound.

    Raises:
        DomainError: If the exponent list is empty or holds a nonpositive value.
    """
    if not exponents:
        raise DomainError("the exponent list must not be empty")
    if min(exponents) < 1:
        raise DomainError(f"exponents must be positive, got {list(exponents)}")
    f = product(IntPoly.monomial(e) - 1 for e in exponents)
    multiplicities = cyclotomic_multiplicities(exponents)
    by_multiplicity: dict[int, list[int]] = {}
    for n, m in multiplicities.items():
        by_multiplicity.setdefault(m, []).append(n)
    squarefree_heights = {
        m: height(product(cyclotomic(n) for n in indices))
        for m, indices in sorted(by_multiplicity.items())
    }
    bound = Fraction(math.prod(exponents), 1 + sum(e - 1 for e in exponents))
    return CyclotomicProduct(
        exponents=tuple(exponents),
        product=f,
        height=height(f),
        degree=sum(exponents),
        cofactor_lower_bound=bound,
        multiplicities=multiplicities,
        squarefree_heights=squarefree_heights,
    )


def max_height_subfactor(exponents: Sequence[int]) -> SubfactorResult:
    """Tallest factor phi_1^m_1 phi_2^m_2 ... dividing prod(x^e_k - 1).

    Every multiplicity vector below the full one is tried once, by a
    depth-first walk that reuses the partial product of each level.
    """
    multiplicities = product_family_xek(exponents).multiplicities
    indices = list(multiplicities)
    factors = [_as_array(cyclotomic(n)) for n in indices]
    best = 0
    best_choice: tuple[int, ...] = ()
    choice = [0] * len(indices)

    def level(position: int, current: np.ndarray) -> None:
        nonlocal best, best_choice
        if position == len(indices):
            value = _array_height(current)
            if value > best:
                best, best_choice = value, tuple(choice)
            return
        for m in range(multiplicities[indices[position]] + 1):
            choice[position] = m
            level(position + 1, current)
            if m < multiplicities[indices[position]]:
                current = _convolve(current, factors[position])
        choice[position] = 0

    level(0, np.ones(1, dtype=np.int64))
    return SubfactorResult(
        height=best,
        multiplicities={n: m for n, m in zip(indices, best_choice) if m},
    )
