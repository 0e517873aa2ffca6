"""Explicit families of tall-factor factorizations, and the x -> x^k inflation."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

from factor_bounds.exceptions import ConstructionError, DomainError
from factor_bounds.polycore import IntPoly, height, negate_x, substitute_power
from factor_bounds.search.cases import FactorizationCase, weakly_irreducible

logger = logging.getLogger(__name__)

POWER_BASE = IntPoly.from_desc([1, 2, 2, 1])


def _ones(degree: int) -> IntPoly:
    return IntPoly([1] * (degree + 1))


def quadratic_pair(n: int) -> tuple[IntPoly, IntPoly]:
    """g1 = n x^2 - (2n-1) x + n and g2 = (1 + ... + x^(n+1)) (1 + ... + x^(n+2))."""
    if n < 2:
        raise DomainError(f"the quadratic family starts at n = 2, got {n}")
    g1 = IntPoly((n, -(2 * n - 1), n))
    g2 = _ones(n + 1) * _ones(n + 2)
    return g1, g2


def quadratic_partners(n: int) -> tuple[IntPoly, IntPoly, IntPoly]:
    """g2, g2*x + 1 and g2*x^3 + x^2 + x + 1."""
    _, g2 = quadratic_pair(n)
    x = IntPoly.x()
    return g2, g2 * x + 1, g2 * x**3 + IntPoly((1, 1, 1))


def family_n_quadratic(n: int) -> tuple[FactorizationCase, ...]:
    """The three products g1 * g2, g1 * (g2 x + 1), g1 * (g2 x^3 + x^2 + x + 1).

    Every product has height n + 1 while g2 has height n + 2.

    Raises:
        DomainError: If n < 2.
        ConstructionError: If a height identity fails.
    """
    g1, g2 = quadratic_pair(n)
    if height(g2) != n + 2:
        raise ConstructionError(f"ht(g2) = {height(g2)}, expected {n + 2} for n = {n}")
    cases = []
    for partner in quadratic_partners(n):
        case = FactorizationCase.from_factors(
            (g1, partner), source=f"quadratic family, n = {n}"
        )
        if case.product_height != n + 1:
            raise ConstructionError(
                f"product {case.product} has height {case.product_height}, "
                f"expected {n + 1} for n = {n}"
            )
        cases.append(case)
    return tuple(cases)


def quadratic_family_conjecture(n: int) -> bool:
    """Weak irreducibility of the partner claimed irreducible for this n mod 3.

    That is g2 x + 1 when n is not 2 mod 3, otherwise g2 x^3 + x^2 + x + 1.
    """
    _, linear, cubic = quadratic_partners(n)
    return weakly_irreducible(cubic if n % 3 == 2 else linear)


def family_power_symmetric(k: int) -> FactorizationCase:
    """(1 - x^6)^k = f^k(x) * f^k(-x) with f = x^3 + 2x^2 + 2x + 1.

    Raises:
        DomainError: If k < 1.
        ConstructionError: If ht(f^k) < 6^k / (3k+1) or the ratio is not
            above 3^k / (3k+1).
    """
    if k < 1:
        raise DomainError(f"the power k must be positive, got {k}")
    fk = POWER_BASE**k
    case = FactorizationCase.from_factors(
        (fk, negate_x(fk)),
        tags=("star_symmetric",),
        source=f"symmetric power family, k = {k}",
    )
    factor_floor = Fraction(6**k, 3 * k + 1)
    ratio_floor = Fraction(3**k, 3 * k + 1)
    if height(fk) < factor_floor:
        raise ConstructionError(f"ht(f^{k}) = {height(fk)} is below 6^k/(3k+1) = {factor_floor}")
    if Fraction(min(case.heights), case.product_height) <= ratio_floor:
        raise ConstructionError(f"ratio of the k = {k} member is not above {ratio_floor}")
    return case


def power_family_product_height(k: int) -> int:
    """ht((1 - x^6)^k), the central binomial coefficient C(k, floor(k/2))."""
    return math.comb(k, k // 2)


def _inflated(
    case: FactorizationCase, ks: Sequence[int], check_irreducibility: bool
) -> FactorizationCase:
    if not ks:
        raise DomainError("at least one substitution power is needed")
    factors = list(case.factors)
    for k in ks:
        factors.extend(substitute_power(g, k) for g in case.factors)
    expected = case.product_height ** (len(ks) + 1)
    inflated = FactorizationCase.from_factors(
        factors,
        tags=("weakly_checked",) if check_irreducibility else (),
        source="; ".join(filter(None, (case.source, f"inflated by x -> x^k for k in {list(ks)}"))),
    )
    if inflated.product_height != expected:
        raise ConstructionError(
            f"inflation by {list(ks)} gives product height {inflated.product_height}, "
            f"expected ht(f)^{len(ks) + 1} = {expected}"
        )
    if check_irreducibility:
        for g in inflated.factors[len(case.factors):]:
            if not weakly_irreducible(g):
                raise ConstructionError(
                    f"substituted factor {g} fails the weak irreducibility filter"
                )
    logger.info(
        "inflated degree %d case to degree %d with %d factors",
        len(case.product) - 1,
        len(inflated.product) - 1,
        len(inflated.factors),
    )
    return inflated


def inflate_construction(
    case: FactorizationCase, k: int, check_irreducibility: bool = False
) -> FactorizationCase:
    """f(x) * f(x^k) with factors g_i(x) and g_i(x^k).

    The product height must be exactly ht(f)^2, which is automatic once
    k > deg f. Irreducibility of g_i(x^k) is not proven here; with
    ``check_irreducibility`` the substituted factors only pass the weak filter.

    Raises:
        ConstructionError: If the height condition or the weak filter fails.
    """
    return _inflated(case, (k,), check_irreducibility)


def inflate_chain(
    case: FactorizationCase, ks: Sequence[int], check_irreducibility: bool = False
) -> FactorizationCase:
    """f(x) * f(x^k1) * f(x^k2) ... with height ht(f)^(len(ks)+1)."""
    return _inflated(case, tuple(ks), check_irreducibility)
