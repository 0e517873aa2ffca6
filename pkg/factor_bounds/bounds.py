"""Coefficient bounds for factors of integer polynomials.

Degree-aware bounds give, for a factor of stated degree delta, one bound per
coefficient; the combined report takes the column minimum over methods.
Single-factor bounds give a value that at least one factor's height cannot
exceed. Bounds are floored to integers only when a ``BoundVector`` or
``SingleFactorBound`` is built; everything before that is exact or an
``UpperReal``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Final, Literal

import sympy
from pydantic import BaseModel, ConfigDict, Field, model_validator

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import (
    IntPoly,
    bombieri_norm,
    bombieri_norm_squared,
    l2_norm,
    l2_norm_squared,
    reverse,
)
from factor_bounds.rootbounds import mahler_upper, refined_root_bound
from factor_bounds.settings import DEFAULT_SETTINGS, BoundSettings
from factor_bounds.upper import UpperReal, round_up, upper_min

logger = logging.getLogger(__name__)

MethodName = Literal["binomial", "mignotte", "beauzamy", "knuth_cohen"]
VectorMethod = Literal[
    "binomial", "mignotte", "beauzamy", "knuth_cohen", "binomial_refined", "combined"
]
SingleFactorMethod = Literal[
    "mignotte_l1_sqrt", "mignotte_refined", "btw", "degree_aware_at_half"
]

METHODS: Final[tuple[MethodName, ...]] = (
    "binomial",
    "mignotte",
    "beauzamy",
    "knuth_cohen",
)

BTW_CONSTANT: Final[Fraction] = Fraction(11, 10)


class BoundVector(BaseModel):
    """Per-coefficient bounds b_0..b_delta for a factor of degree delta."""

    model_config = ConfigDict(frozen=True)

    delta: int = Field(..., ge=1, description="Degree of the factor being bounded")
    entries: tuple[int, ...] = Field(
        ..., description="entries[i] bounds the coefficient of x**i"
    )
    overall: int = Field(..., ge=0, description="Height bound, the largest entry")
    method: VectorMethod = Field(..., description="Method that produced the entries")

    @model_validator(mode="after")
    def validate_entries(self) -> BoundVector:
        """Check length, sign and the overall entry."""
        if len(self.entries) != self.delta + 1:
            raise ValueError(
                f"a degree {self.delta} bound needs {self.delta + 1} entries, "
                f"got {len(self.entries)}"
            )
        if any(entry < 0 for entry in self.entries):
            raise ValueError(f"bound entries must be nonnegative: {self.entries}")
        if self.overall != max(self.entries):
            raise ValueError(
                f"overall {self.overall} differs from the largest entry "
                f"{max(self.entries)}"
            )
        return self

    @classmethod
    def build(cls, method: VectorMethod, entries: Sequence[int]) -> BoundVector:
        return cls(
            delta=len(entries) - 1,
            entries=tuple(entries),
            overall=max(entries),
            method=method,
        )

    @property
    def entries_desc(self) -> tuple[int, ...]:
        """Entries from x**delta down to x**0, the order tables print."""
        return self.entries[::-1]

    def to_json(self) -> dict[str, Any]:
        return {
            "entries_desc": [str(entry) for entry in self.entries_desc],
            "overall": str(self.overall),
        }


class BoundReport(BaseModel):
    """Method vectors for one (f, delta) pair and their column minimum."""

    model_config = ConfigDict(frozen=True)

    delta: int = Field(..., ge=1)
    vectors: dict[str, BoundVector] = Field(
        ..., description="Method name to vector, in computation order"
    )
    combined: BoundVector
    audit: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_combined(self) -> BoundReport:
        """The combined vector must be the entry-wise minimum."""
        if not self.vectors:
            raise ValueError("a bound report needs at least one method")
        expected = tuple(
            min(column) for column in zip(*(v.entries for v in self.vectors.values()))
        )
        if self.combined.entries != expected:
            raise ValueError(
                f"combined entries {self.combined.entries} are not the column "
                f"minimum {expected}"
            )
        return self

    def to_json(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "methods": {name: vector.to_json() for name, vector in self.vectors.items()},
            "combined": self.combined.to_json(),
            "audit": dict(self.audit),
        }


class SingleFactorBound(BaseModel):
    """A value that the height of at least one factor cannot exceed."""

    model_config = ConfigDict(frozen=True)

    value: int = Field(..., ge=1, description="Floored bound")
    method: SingleFactorMethod
    inputs: dict[str, str] = Field(
        default_factory=dict, description="Estimates and norms used, for audit"
    )


class L2Multiple(BaseModel):
    """The monic rational cofactor minimizing |f * h|_2."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cofactor: tuple[Fraction, ...] = Field(..., description="Ascending coefficients")
    l2_squared: Fraction = Field(..., description="Exact |f * h|_2 squared")
    l2: UpperReal = Field(..., description="Certified |f * h|_2")

    @property
    def cofactor_desc(self) -> tuple[Fraction, ...]:
        return self.cofactor[::-1]


def _check_degree_aware(f: IntPoly, delta: int) -> None:
    if f.is_constant:
        raise DomainError("degree-aware bounds need a polynomial of degree at least 1")
    if f.tc == 0:
        raise DomainError(
            "degree-aware bounds assume a nonzero trailing coefficient;\n"
            "divide out the power of x first"
        )
    if not 1 <= delta <= len(f) - 1:
        raise DomainError(f"factor degree {delta} outside [1, {len(f) - 1}]")


def mahler_estimate(f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS) -> UpperReal:
    """min of the Mahler estimates of f and of its reversal."""
    forward = mahler_upper(f, settings.graeffe_depth, settings.cap_bits).upper
    backward = mahler_upper(reverse(f), settings.graeffe_depth, settings.cap_bits).upper
    return upper_min(forward, backward)


def root_bounds(
    f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS
) -> tuple[UpperReal, UpperReal]:
    """(rho, rho_bar): root bounds for f and for its reversal."""
    rho = refined_root_bound(f, settings.graeffe_depth, settings.cap_bits).rho
    rho_bar = refined_root_bound(reverse(f), settings.graeffe_depth, settings.cap_bits).rho
    return rho, rho_bar


def binomial_vector(
    f: IntPoly, delta: int, settings: BoundSettings = DEFAULT_SETTINGS
) -> BoundVector:
    """min of |lc| C(delta,i) rho**(delta-i) and |tc| C(delta,i) rho_bar**i."""
    _check_degree_aware(f, delta)
    rho, rho_bar = root_bounds(f, settings)
    lead, trail = abs(f.lc), abs(f.tc)
    entries = []
    for i in range(delta + 1):
        weight = math.comb(delta, i)
        forward = rho ** (delta - i) * (lead * weight)
        backward = rho_bar**i * (trail * weight)
        entries.append(upper_min(forward, backward).floor())
    return BoundVector.build("binomial", entries)


def _as_upper(value: UpperReal | float | int | Fraction) -> UpperReal:
    if isinstance(value, UpperReal):
        return value
    if isinstance(value, float):
        return UpperReal(value)
    return UpperReal.from_fraction(Fraction(value))


def binomial_vector_refined(
    rhos: Sequence[UpperReal | float | int | Fraction], lc_abs: int, delta: int
) -> BoundVector:
    """Coefficients of lc_abs * prod_(j <= delta) (x + rho_j), floored.

    Args:
        rhos: Root moduli bounds sorted in descending order.
        lc_abs: Absolute leading coefficient of the polynomial being factored.
        delta: Degree of the factor.

    Raises:
        DomainError: If rhos is unsorted, too short, or delta is not positive.
    """
    if delta < 1:
        raise DomainError(f"factor degree must be positive, got {delta}")
    bounds = [_as_upper(rho) for rho in rhos]
    if len(bounds) < delta:
        raise DomainError(f"need at least {delta} root bounds, got {len(bounds)}")
    if any(a.value < b.value for a, b in zip(bounds, bounds[1:])):
        raise DomainError("root bounds must be sorted in descending order")
    coeffs = [UpperReal(1.0)]
    for rho in bounds[:delta]:
        shifted = [UpperReal(0.0), *coeffs]
        scaled = [c * rho for c in coeffs] + [UpperReal(0.0)]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    return BoundVector.build(
        "binomial_refined", [(c * abs(lc_abs)).floor() for c in coeffs]
    )


def mignotte_vector(
    f: IntPoly, delta: int, settings: BoundSettings = DEFAULT_SETTINGS
) -> BoundVector:
    """|b_i| <= C(delta, i) M(f)."""
    _check_degree_aware(f, delta)
    measure = mahler_estimate(f, settings)
    return BoundVector.build(
        "mignotte", [(measure * math.comb(delta, i)).floor() for i in range(delta + 1)]
    )


def _knuth_cohen_side(norm_squared: int, lead: int, trail: int, delta: int) -> list[int]:
    # floor(a*sqrt(N) + b*lead) == isqrt(a*a*N) + b*lead for integers a, b, lead
    entries = [trail]
    for i in range(1, delta + 1):
        a = math.comb(delta - 1, i)
        b = math.comb(delta - 1, i - 1)
        entries.append(math.isqrt(a * a * norm_squared) + b * lead)
    return entries


def knuth_cohen_vector(
    f: IntPoly, delta: int, settings: BoundSettings = DEFAULT_SETTINGS
) -> BoundVector:
    """Knuth-Cohen bound with the reversal trick, exact after flooring.

    Forward: b_0 <= |a_0| and b_i <= C(delta-1,i)|f|_2 + C(delta-1,i-1)|lc|.
    The same vector for reverse(f), flipped, bounds the same factor from the
    other end; the entry-wise minimum is kept.
    """
    _check_degree_aware(f, delta)
    norm_squared = l2_norm_squared(f)
    lead, trail = abs(f.lc), abs(f.tc)
    forward = _knuth_cohen_side(norm_squared, lead, trail, delta)
    backward = _knuth_cohen_side(norm_squared, trail, lead, delta)[::-1]
    return BoundVector.build(
        "knuth_cohen", [min(a, b) for a, b in zip(forward, backward)]
    )


def beauzamy_vector(
    f: IntPoly, delta: int, settings: BoundSettings = DEFAULT_SETTINGS
) -> BoundVector:
    """|b_i| <= sqrt(C(delta,i) C(d,delta) / 2) [f]_2, exact after flooring."""
    _check_degree_aware(f, delta)
    d = len(f) - 1
    weighted = bombieri_norm_squared(f) * math.comb(d, delta) / 2
    entries = []
    for i in range(delta + 1):
        square = weighted * math.comb(delta, i)
        entries.append(math.isqrt(square.numerator // square.denominator))
    return BoundVector.build("beauzamy", entries)


_VECTOR_FUNCTIONS: Final[dict[MethodName, Callable[..., BoundVector]]] = {
    "binomial": binomial_vector,
    "mignotte": mignotte_vector,
    "beauzamy": beauzamy_vector,
    "knuth_cohen": knuth_cohen_vector,
}


def audit_fields(f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS) -> dict[str, str]:
    """Estimates behind a report, as decimal strings."""
    rho, rho_bar = root_bounds(f, settings)
    return {
        "rho": str(rho),
        "rho_bar": str(rho_bar),
        "mahler": str(mahler_estimate(f, settings)),
        "l2_norm": str(l2_norm(f)),
        "bombieri_norm": str(bombieri_norm(f)),
        "graeffe_depth": str(settings.graeffe_depth),
        "slack": "relative 2^-40 per inexact operation",
        "knuth_cohen_i0_rule": "assumed",
    }


def combined_report(
    f: IntPoly,
    delta: int,
    methods: Iterable[MethodName] | None = None,
    settings: BoundSettings = DEFAULT_SETTINGS,
) -> BoundReport:
    """All selected method vectors plus their entry-wise minimum.

    Args:
        f: Polynomial with nonzero trailing coefficient.
        delta: Degree of the factor, 1 <= delta <= deg f.
        methods: Subset of METHODS; all four by default.
        settings: Numerical settings, including the thread budget.

    Returns:
        BoundReport: Vectors in the order of METHODS, combined, and audit data.
    """
    _check_degree_aware(f, delta)
    selected = [m for m in METHODS if methods is None or m in set(methods)]
    if not selected:
        raise DomainError(f"no known method selected, choose from {', '.join(METHODS)}")

    def compute(method: MethodName) -> BoundVector:
        return _VECTOR_FUNCTIONS[method](f, delta, settings)

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            vectors = list(pool.map(compute, selected))
    else:
        vectors = [compute(method) for method in selected]
    combined = BoundVector.build(
        "combined", [min(column) for column in zip(*(v.entries for v in vectors))]
    )
    logger.debug("combined bound for delta=%d: %s", delta, combined.entries_desc)
    return BoundReport(
        delta=delta,
        vectors=dict(zip(selected, vectors)),
        combined=combined,
        audit=audit_fields(f, settings),
    )


def _check_single_factor(f: IntPoly, minimum_degree: int = 2) -> int:
    d = len(f) - 1
    if d < minimum_degree:
        raise DomainError(
            f"this single-factor bound needs degree at least {minimum_degree}, got {d}"
        )
    return d


def sf_mignotte(f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS) -> SingleFactorBound:
    """floor(sqrt(2**d M(f))), a bound on the l1 norm of some factor."""
    d = _check_single_factor(f)
    measure = mahler_estimate(f, settings)
    value = (measure * 2**d).sqrt().floor()
    return SingleFactorBound(
        value=value, method="mignotte_l1_sqrt", inputs={"mahler": str(measure)}
    )


def sf_mignotte_refined(
    f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS
) -> SingleFactorBound:
    """floor(sqrt(2/3 C(d, d//2) M(f)))."""
    d = _check_single_factor(f)
    measure = mahler_estimate(f, settings)
    value = (measure * (Fraction(2, 3) * math.comb(d, d // 2))).sqrt().floor()
    return SingleFactorBound(
        value=value, method="mignotte_refined", inputs={"mahler": str(measure)}
    )


def sf_btw(f: IntPoly, settings: BoundSettings = DEFAULT_SETTINGS) -> SingleFactorBound:
    """floor(1.1 sqrt(2**d d**(-3/4) [f]_2)), for degree above 2."""
    d = _check_single_factor(f, minimum_degree=3)
    norm = bombieri_norm(f)
    damping = UpperReal(round_up(d**-0.75))
    value = ((norm * 2**d * damping).sqrt() * BTW_CONSTANT).floor()
    return SingleFactorBound(
        value=value, method="btw", inputs={"bombieri_norm": str(norm)}
    )


def _degree_aware_single(
    f: IntPoly, degrees: Iterable[int], settings: BoundSettings
) -> SingleFactorBound | None:
    d = len(f) - 1
    # some factor has degree at most d/2; complements stay admissible
    admissible = sorted({min(k, d - k) for k in degrees if 1 <= k < d})
    if not admissible or f.tc == 0:
        return None
    overall = {
        delta: combined_report(f, delta, settings=settings).combined.overall
        for delta in admissible
    }
    worst = max(overall.values())
    return SingleFactorBound(
        value=max(worst, 1),
        method="degree_aware_at_half",
        inputs={f"delta_{delta}": str(value) for delta, value in overall.items()},
    )


def sf_best(
    f: IntPoly,
    degree_info: Iterable[int] | None = None,
    settings: BoundSettings = DEFAULT_SETTINGS,
) -> SingleFactorBound:
    """Smallest of the single-factor bounds and the degree-aware overall bound.

    Args:
        f: Polynomial of degree at least 2.
        degree_info: Admissible factor degrees from an external degree
            analysis; defaults to d // 2.
        settings: Numerical settings.

    Returns:
        SingleFactorBound: The winning bound, with every candidate in ``inputs``.
    """
    d = _check_single_factor(f)
    candidates = [sf_mignotte(f, settings), sf_mignotte_refined(f, settings)]
    if d > 2:
        candidates.append(sf_btw(f, settings))
    degrees = list(degree_info) if degree_info is not None else [d // 2]
    degree_aware = _degree_aware_single(f, degrees, settings)
    if degree_aware is not None:
        candidates.append(degree_aware)
    best = min(candidates, key=lambda bound: bound.value)
    inputs = {bound.method: str(bound.value) for bound in candidates}
    return SingleFactorBound(value=best.value, method=best.method, inputs=inputs)


def min_l2_multiple(f: IntPoly, dhat: int) -> L2Multiple:
    """Monic h of degree dhat over Q minimizing |f * h|_2, from the normal equations.

    The Gram matrix of the shifted copies of f is the Toeplitz matrix of the
    autocorrelation of its coefficients, positive definite for f != 0.
    """
    if f.is_zero:
        raise DomainError("the zero polynomial has no l2-minimal multiple")
    if dhat < 1:
        raise DomainError(f"cofactor degree must be positive, got {dhat}")
    a = f.coeffs
    correlation = [
        sum(a[i] * a[i + k] for i in range(len(a) - k)) if k < len(a) else 0
        for k in range(dhat + 1)
    ]
    gram = sympy.Matrix(dhat, dhat, lambda j, k: correlation[abs(j - k)])
    rhs = sympy.Matrix(dhat, 1, lambda j, _: -correlation[dhat - j])
    solution = gram.LUsolve(rhs)
    cofactor = tuple(
        Fraction(int(sympy.Rational(s).p), int(sympy.Rational(s).q)) for s in solution
    ) + (Fraction(1),)
    return L2Multiple(
        cofactor=cofactor,
        l2_squared=rational_l2_squared(f, cofactor),
        l2=UpperReal.sqrt_of(rational_l2_squared(f, cofactor)),
    )


def rational_l2_squared(f: IntPoly, cofactor: Sequence[Fraction]) -> Fraction:
    """|f * h|_2 squared for a rational ascending cofactor h."""
    a = f.coeffs
    total = Fraction(0)
    for k in range(len(a) + len(cofactor) - 1):
        term = sum(
            (a[i] * cofactor[k - i] for i in range(len(a)) if 0 <= k - i < len(cofactor)),
            start=Fraction(0),
        )
        total += term * term
    return total
