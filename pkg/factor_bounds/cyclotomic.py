"""Cyclotomic polynomials and their heights."""

import functools
import logging
import math

import numpy as np
import sympy

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, exact_divide, height, negate_x, substitute_power

logger = logging.getLogger(__name__)

# int64 series stay exact while every partial sum is below this
_SERIES_LIMIT = 1 << 62


@functools.lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, by memoized exact division.

    Uses phi_n(x) = phi_rad(x**(n/rad)) for non-squarefree n,
    phi_2m(x) = phi_m(-x) for odd m > 1, and phi_mp(x) = phi_m(x**p) / phi_m(x)
    for a prime p not dividing m.
    """
    if n < 1:
        raise DomainError(f"cyclotomic index must be positive, got {n}")
    if n == 1:
        return IntPoly((-1, 1))
    if n == 2:
        return IntPoly((1, 1))
    primes = sorted(sympy.factorint(n))
    radical = math.prod(primes)
    if radical != n:
        return substitute_power(cyclotomic(radical), n // radical)
    if n % 2 == 0:
        return negate_x(cyclotomic(n // 2))
    largest = primes[-1]
    base = cyclotomic(n // largest)
    return exact_divide(substitute_power(base, largest), base)


def cyclotomic_kernel(n: int) -> int:
    """Odd part of the radical of n; phi_n and phi_kernel share their height."""
    if n < 1:
        raise DomainError(f"cyclotomic index must be positive, got {n}")
    return math.prod(p for p in sympy.factorint(n) if p != 2)


def _series_division(series: np.ndarray, step: int) -> None:
    """Multiply a truncated series in place by 1/(1 - x**step)."""
    length = series.size
    padded = np.zeros(-(-length // step) * step, dtype=series.dtype)
    padded[:length] = series
    series[:] = padded.reshape(-1, step).cumsum(axis=0).reshape(-1)[:length]


def _exceeds_int64(series: np.ndarray, terms: int) -> bool:
    """Whether a sum of ``terms`` entries of the series can leave the exact range."""
    if series.dtype == object:
        return False
    return int(np.abs(series).max()) * terms >= _SERIES_LIMIT


def half_series(n: int) -> np.ndarray:
    """Lower half of phi_n for odd squarefree n > 1.

    phi_n(x) = prod over d | n of (1 - x**d)**mu(n/d), evaluated as a power
    series truncated at degree totient(n)/2; the rest follows by symmetry.
    Coefficients are int64, or Python ints once partial sums could leave the
    int64 range.
    """
    half = int(sympy.totient(n)) // 2
    series = np.zeros(half + 1, dtype=np.int64)
    series[0] = 1
    for d in sympy.divisors(n):
        if d > half:
            break
        mu = sympy.mobius(n // d)
        if mu == 0:
            continue
        if _exceeds_int64(series, 2 if mu == 1 else series.size):
            logger.debug("cyclotomic series for n=%d switches to exact integers", n)
            series = series.astype(object)
        if mu == 1:
            series[d:] = series[d:] - series[:-d]
        else:
            _series_division(series, d)
    return series


def cyclotomic_height(n: int) -> int:
    """Height of phi_n, via the kernel reduction and the int64 series."""
    kernel = cyclotomic_kernel(n)
    if kernel == 1:
        return 1
    return int(np.abs(half_series(kernel)).max())


def cyclo_height_records(max_index: int) -> list[tuple[int, int]]:
    """Successive maxima (height, index) of ht(phi_n) for n <= max_index.

    Only odd squarefree indices can set a record: every other index shares
    its height with a smaller kernel.
    """
    if max_index < 1:
        raise DomainError(f"max_index must be positive, got {max_index}")
    records: list[tuple[int, int]] = []
    best = 1
    for n in range(3, max_index + 1, 2):
        if cyclotomic_kernel(n) != n:
            continue
        value = int(np.abs(half_series(n)).max())
        if value > best:
            best = value
            records.append((value, n))
            logger.debug("cyclotomic height record %d at index %d", value, n)
    return records


def exact_height(n: int) -> int:
    """Height of phi_n from the exact polynomial (reference path)."""
    return height(cyclotomic(n))
