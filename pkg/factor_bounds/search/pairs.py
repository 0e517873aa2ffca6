"""Exhaustive search for two-factor products whose factors are taller than the product.

The search runs product height by product height. For a fixed limit H the
factor coefficients are assigned from both ends inward, and every product
coefficient that becomes fully determined must stay within [-H, H]. On the
second factor that constraint is an interval for the coefficient being
assigned, so most branches are never generated.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Any, Final, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from factor_bounds.exceptions import SearchSpaceError
from factor_bounds.polycore import IntPoly, multiply_coefficients, negate_x, reverse, star
from factor_bounds.search.cases import CaseTag, FactorizationCase, weakly_irreducible

logger = logging.getLogger(__name__)

Symmetry = Literal["none", "palindromic", "star_symmetric", "palindromic_star_symmetric"]
Objective = Literal["max_ratio", "max_factor_height"]

STAR_MODES: Final[frozenset[str]] = frozenset({"star_symmetric", "palindromic_star_symmetric"})

Coeffs = tuple[int, ...]


class SearchConfig(BaseModel):
    """One exhaustive pair search: product degree, caps, restriction and objective."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=2, description="Degree of the product")
    factor_degrees: tuple[int, ...] | None = Field(
        None, description="Degrees allowed for the smaller factor (default: all)"
    )
    height_cap: int = Field(..., ge=1, description="Largest factor coefficient magnitude")
    product_height_cap: int | None = Field(
        None, ge=1, description="Largest product height considered"
    )
    symmetry: Symmetry = "none"
    objective: Objective = "max_ratio"
    irreducible: bool = Field(
        False, description="Keep only factors passing the weak irreducibility filter"
    )
    workers: int = Field(1, ge=1, description="Worker processes")

    @field_validator("factor_degrees")
    @classmethod
    def validate_factor_degrees(cls, v: tuple[int, ...] | None) -> tuple[int, ...] | None:
        """
        Normalise the admissible factor degrees.

        Args:
            v: Degrees of the smaller factor, or None for every split.

        Returns:
            tuple[int, ...] | None: Sorted, deduplicated degrees.

        Raises:
            ValueError: If the list is empty or holds a nonpositive degree.
        """
        if v is None:
            return None
        if not v:
            raise ValueError("factor_degrees must not be empty; omit it to search every split")
        if min(v) < 1:
            raise ValueError(f"factor degrees must be positive, got {list(v)}")
        return tuple(sorted(set(v)))

    @model_validator(mode="after")
    def validate_space(self) -> SearchConfig:
        """Cross-field rules: star restrictions need an even split, and so on."""
        if self.symmetry in STAR_MODES and self.degree % 2:
            raise ValueError(
                f"symmetry '{self.symmetry}' pairs g with star(g) and needs an even "
                f"product degree, got {self.degree}"
            )
        if self.objective == "max_factor_height" and self.product_height_cap is None:
            raise ValueError(
                "objective 'max_factor_height' needs product_height_cap.\n"
                "Without it every factor height is reachable."
            )
        if self.factor_degrees is not None and max(self.factor_degrees) >= self.degree:
            raise ValueError(
                f"factor degrees {list(self.factor_degrees)} must be below the "
                f"product degree {self.degree}"
            )
        if not self.splits():
            raise ValueError(
                f"no factor degree split of {self.degree} is allowed by "
                f"factor_degrees={self.factor_degrees} and symmetry '{self.symmetry}'"
            )
        return self

    def splits(self) -> list[int]:
        """Degrees d1 <= d - d1 of the first factor."""
        if self.symmetry in STAR_MODES:
            candidates = [self.degree // 2]
        else:
            candidates = list(range(1, self.degree // 2 + 1))
        if self.factor_degrees is None:
            return candidates
        allowed = {min(k, self.degree - k) for k in self.factor_degrees}
        return [d1 for d1 in candidates if d1 in allowed]

    def partitions(self) -> list[Partition]:
        """Disjoint pieces covering the search space, in a fixed order."""
        if self.symmetry == "palindromic":
            sign_choices: list[tuple[int, ...]] = list(cartesian((1, -1), repeat=2))
        elif self.symmetry == "palindromic_star_symmetric":
            sign_choices = [(1,), (-1,)]
        else:
            sign_choices = [()]
        return [
            Partition(d1=d1, signs=signs, lead=lead)
            for d1 in self.splits()
            for signs in sign_choices
            for lead in range(1, self.height_cap + 1)
        ]

    def largest_limit(self, d1: int) -> int:
        """Largest product height a split can reach under the caps."""
        reachable = self.height_cap * self.height_cap * (d1 + 1)
        if self.product_height_cap is None:
            return reachable
        return min(reachable, self.product_height_cap)


@dataclass(frozen=True, order=True)
class Partition:
    """Split degree, palindromic signs and leading coefficient of the first factor."""

    d1: int
    signs: tuple[int, ...]
    lead: int


@dataclass
class _PartitionResult:
    best: Fraction | None
    hits: list[tuple[Coeffs, Coeffs]] = field(default_factory=list)


class PairSearchResult(BaseModel):
    """All maximizers of a pair search, canonical and sorted."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: SearchConfig
    best: Fraction = Field(..., description="Best ratio, or best factor height")
    cases: tuple[FactorizationCase, ...]

    def header(self) -> dict[str, Any]:
        return {
            "config": self.config.model_dump(mode="json"),
            "best": str(self.best),
            "count": len(self.cases),
        }

    def to_json_lines(self) -> list[str]:
        lines = [json.dumps(self.header(), sort_keys=True)]
        lines.extend(json.dumps(case.to_json(), sort_keys=True) for case in self.cases)
        return lines


def _normalize(p: IntPoly) -> IntPoly:
    return -p if p.lc < 0 else p


def _order(p: IntPoly) -> tuple[int, Coeffs]:
    return (len(p), p.coeffs_desc)


_TRANSFORMS: Final[tuple[Callable[[IntPoly], IntPoly], ...]] = (
    lambda p: p,
    negate_x,
    reverse,
    lambda p: reverse(negate_x(p)),
)


def canonical_pair(
    first: IntPoly, second: IntPoly, star_pair: bool = False
) -> tuple[IntPoly, IntPoly]:
    """Least representative of a pair under x -> -x, reversal and factor signs.

    With ``star_pair`` the result keeps the form (g, star(g)).
    """
    candidates: list[tuple[IntPoly, IntPoly]] = []
    for transform in _TRANSFORMS:
        images = (_normalize(transform(first)), _normalize(transform(second)))
        if star_pair:
            candidates.extend((g, star(g)) for g in images)
        else:
            low, high = sorted(images, key=_order)
            candidates.append((low, high))
    return min(candidates, key=lambda pair: (_order(pair[0]), _order(pair[1])))


def _is_canonical_factor(p: IntPoly) -> bool:
    key = p.coeffs_desc
    return all(key <= _normalize(transform(p)).coeffs_desc for transform in _TRANSFORMS[1:])


def _window(pivot: int, rest: int, limit: int, cap: int) -> range:
    """Integers v with |pivot*v + rest| <= limit and |v| <= cap."""
    if pivot > 0:
        low, high = -((limit + rest) // pivot), (limit - rest) // pivot
    else:
        low, high = -((rest - limit) // pivot), (-limit - rest) // pivot
    return range(max(low, -cap), min(high, cap) + 1)


def _ends_inward(degree: int) -> list[tuple[int, bool]]:
    """Indices 0, d, 1, d-1, ... tagged with True on the low side."""
    order: list[tuple[int, bool]] = []
    low, high = 0, degree
    while low <= high:
        order.append((low, True))
        low += 1
        if low <= high:
            order.append((high, False))
            high -= 1
    return order


class _Collector:
    """Running best value of one partition, with its tied pairs."""

    def __init__(self, config: SearchConfig):
        self.ratio_objective = config.objective == "max_ratio"
        self.irreducible = config.irreducible
        self.best: Fraction | None = None
        self.hits: list[tuple[Coeffs, Coeffs]] = []

    def target(self, limit: int) -> int:
        """Smallest factor height that can still tie the best value."""
        if self.best is None:
            return 1
        if self.ratio_objective:
            return math.ceil(self.best * limit)
        return math.ceil(self.best)

    def exhausted(self, limit: int, cap: int) -> bool:
        return self.ratio_objective and self.best is not None and Fraction(cap, limit) < self.best

    def offer(self, a: Sequence[int], b: Sequence[int], low: int, limit: int) -> None:
        value = Fraction(low, limit) if self.ratio_objective else Fraction(low)
        if self.best is not None and value < self.best:
            return
        if self.irreducible and not (
            weakly_irreducible(IntPoly(a)) and weakly_irreducible(IntPoly(b))
        ):
            return
        if self.best is None or value > self.best:
            self.best = value
            self.hits = []
        self.hits.append((tuple(a), tuple(b)))


class _PairWalker:
    """Depth-first enumeration of one partition at one product height limit."""

    def __init__(self, config: SearchConfig, part: Partition, limit: int, collector: _Collector):
        self.cap = config.height_cap
        self.symmetry = config.symmetry
        self.d1 = part.d1
        self.d2 = config.degree - part.d1
        self.signs = part.signs
        self.lead = part.lead
        self.limit = limit
        self.collector = collector
        self.target = collector.target(limit)

    def walk(self) -> None:
        if self.symmetry == "none":
            self._walk_free()
        elif self.symmetry == "palindromic":
            self._walk_palindromic()
        else:
            self._walk_star()

    def _leaf(self, a: Sequence[int], b: Sequence[int]) -> None:
        c = multiply_coefficients(a, b)
        if max(map(abs, c)) != self.limit:
            return
        low = min(max(map(abs, a)), max(map(abs, b)))
        if low < self.target:
            return
        self.collector.offer(a, b, low, self.limit)
        self.target = self.collector.target(self.limit)

    def _first_factor_ok(self, a: Sequence[int]) -> bool:
        return max(map(abs, a)) >= self.target and _is_canonical_factor(IntPoly(a))

    # untied factors

    def _walk_free(self) -> None:
        if self.lead > self.limit:
            return
        a = [0] * (self.d1 + 1)
        a[self.d1] = self.lead
        slots = [index for index, _ in _ends_inward(self.d1) if index != self.d1]
        end_cap = min(self.limit, self.cap)
        ranges = [
            [v for v in range(-end_cap, end_cap + 1) if v]
            if index == 0
            else range(-self.cap, self.cap + 1)
            for index in slots
        ]
        for values in cartesian(*ranges):
            for index, value in zip(slots, values):
                a[index] = value
            if self._first_factor_ok(a):
                self._second_factor(a)

    def _second_factor(self, a: list[int]) -> None:
        d1, d2, limit, cap = self.d1, self.d2, self.limit, self.cap
        b = [0] * (d2 + 1)
        order = _ends_inward(d2)
        a_key = IntPoly(a).coeffs_desc if d1 == d2 else None

        def assign(step: int) -> None:
            if step == len(order):
                if a_key is not None and IntPoly(b).coeffs_desc < a_key:
                    return
                self._leaf(a, b)
                return
            index, low_side = order[step]
            if low_side:
                rest = sum(a[j] * b[index - j] for j in range(1, min(index, d1) + 1))
                window = _window(a[0], rest, limit, cap)
            else:
                top = d1 + index
                rest = sum(a[j] * b[top - j] for j in range(max(0, top - d2), d1))
                window = _window(a[d1], rest, limit, cap)
            for value in window:
                if index == d2 and value <= 0:
                    continue
                if index == 0 and value == 0:
                    continue
                b[index] = value
                assign(step + 1)
            b[index] = 0

        assign(0)

    # palindromic factors

    def _walk_palindromic(self) -> None:
        sign_a, sign_b = self.signs
        d1, cap = self.d1, self.cap
        if self.lead > self.limit:
            return
        a = [0] * (d1 + 1)
        a[d1] = self.lead
        a[0] = sign_a * self.lead
        half = list(range(1, d1 // 2 + 1))
        ranges = [
            (0,) if 2 * i == d1 and sign_a < 0 else range(-cap, cap + 1) for i in half
        ]
        for values in cartesian(*ranges):
            for i, value in zip(half, values):
                a[i] = value
                a[d1 - i] = sign_a * value
            if self._first_factor_ok(a):
                self._second_palindromic(a, sign_b)

    def _second_palindromic(self, a: list[int], sign_b: int) -> None:
        d1, d2, limit, cap = self.d1, self.d2, self.limit, self.cap
        b = [0] * (d2 + 1)
        a_key = IntPoly(a).coeffs_desc if d1 == d2 else None

        def assign(k: int) -> None:
            if 2 * k > d2:
                if a_key is not None and IntPoly(b).coeffs_desc < a_key:
                    return
                self._leaf(a, b)
                return
            rest = sum(a[j] * b[k - j] for j in range(1, min(k, d1) + 1))
            for value in _window(a[0], rest, limit, cap):
                if k == 0 and sign_b * value <= 0:
                    continue
                if 2 * k == d2 and sign_b < 0 and value:
                    continue
                b[k] = value
                b[d2 - k] = sign_b * value
                assign(k + 1)
            b[k] = b[d2 - k] = 0

        assign(0)

    # g paired with star(g)

    def _walk_star(self) -> None:
        d1, limit, cap, lead = self.d1, self.limit, self.cap, self.lead
        tied = self.symmetry == "palindromic_star_symmetric"
        sign = self.signs[0] if tied else 1
        a = [0] * (d1 + 1)
        a[d1] = lead
        if tied:
            first: Sequence[int] = (sign * lead,) if lead * lead <= limit else ()
        else:
            bound = min(limit // lead, cap)
            first = [v for v in range(-bound, bound + 1) if v]

        def coefficient(k: int) -> int:
            # c_k of a * star(a), which only needs a_0..a_k and a_{d1-k}..a_{d1}
            return sum(
                a[j] * (-1 if (d1 - k + j) % 2 else 1) * a[d1 - k + j] for j in range(k + 1)
            )

        def level(k: int) -> None:
            if 2 * k > d1:
                if max(map(abs, a)) >= self.target:
                    self._leaf(a, star(IntPoly(a)).coeffs)
                return
            mirror = d1 - k
            if tied:
                choices: Iterator[tuple[int, int]] = (
                    (v, sign * v)
                    for v in range(-cap, cap + 1)
                    if not (mirror == k and sign < 0 and v)
                )
            elif mirror == k:
                choices = ((v, v) for v in range(-cap, cap + 1))
            else:
                choices = cartesian(range(-cap, cap + 1), repeat=2)
            for low, high in choices:
                a[k], a[mirror] = low, high
                if abs(coefficient(k)) <= limit:
                    level(k + 1)
            a[k] = a[mirror] = 0

        for value in first:
            a[0] = value
            if abs(coefficient(0)) <= limit:
                level(1)


def _search_partition(job: tuple[SearchConfig, Partition]) -> _PartitionResult:
    config, part = job
    collector = _Collector(config)
    for limit in range(1, config.largest_limit(part.d1) + 1):
        if collector.exhausted(limit, config.height_cap):
            break
        _PairWalker(config, part, limit, collector).walk()
    logger.debug("partition %s done, best %s", part, collector.best)
    return _PartitionResult(best=collector.best, hits=collector.hits)


def _tags(config: SearchConfig) -> frozenset[CaseTag]:
    tags: set[CaseTag] = set()
    if config.symmetry != "none" and config.symmetry != "star_symmetric":
        tags.add("palindromic")
    if config.symmetry in STAR_MODES:
        tags.add("star_symmetric")
    if config.irreducible:
        tags.add("weakly_checked")
    return frozenset(tags)


def _merge(config: SearchConfig, results: Sequence[_PartitionResult]) -> PairSearchResult:
    found = [r for r in results if r.best is not None]
    if not found:
        raise SearchSpaceError(
            f"no factorization of degree {config.degree} within height cap "
            f"{config.height_cap} satisfies the search restrictions"
        )
    best = max(r.best for r in found if r.best is not None)
    star_pair = config.symmetry in STAR_MODES
    unique: dict[tuple[Coeffs, Coeffs], tuple[IntPoly, IntPoly]] = {}
    for result in found:
        if result.best != best:
            continue
        for a, b in result.hits:
            pair = canonical_pair(IntPoly(a), IntPoly(b), star_pair=star_pair)
            unique[(pair[0].coeffs_desc, pair[1].coeffs_desc)] = pair
    source = f"pair search, degree {config.degree}, height cap {config.height_cap}"
    tags = _tags(config)
    cases = tuple(
        FactorizationCase.from_factors(unique[key], tags=tags, source=source)
        for key in sorted(unique, key=lambda k: ((len(k[0]), k[0]), (len(k[1]), k[1])))
    )
    return PairSearchResult(config=config, best=best, cases=cases)


def pair_search(config: SearchConfig) -> PairSearchResult:
    """Every maximizer of the objective over the configured space.

    Raises:
        SearchSpaceError: If no pair satisfies the restrictions.
    """
    jobs = [(config, part) for part in config.partitions()]
    logger.info(
        "pair search: degree %d, cap %d, %s, %d partitions on %d workers",
        config.degree,
        config.height_cap,
        config.symmetry,
        len(jobs),
        config.workers,
    )
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(_search_partition, jobs))
    else:
        results = [_search_partition(job) for job in jobs]
    return _merge(config, results)


def _factor_space(degree: int, cap: int) -> Iterator[Coeffs]:
    span = range(-cap, cap + 1)
    for coeffs in cartesian(span, repeat=degree + 1):
        if coeffs[0] and coeffs[-1]:
            yield coeffs


def naive_pair_search(config: SearchConfig) -> PairSearchResult:
    """Flat double loop over every factor pair; reference for small spaces."""
    cap = config.height_cap
    collector = _Collector(config)
    for d1 in config.splits():
        d2 = config.degree - d1
        for a in _factor_space(d1, cap):
            g = IntPoly(a)
            if config.symmetry in ("palindromic", "palindromic_star_symmetric") and (
                reverse(g) not in (g, -g)
            ):
                continue
            if config.symmetry in STAR_MODES:
                partners: Iterator[Coeffs] = iter((star(g).coeffs,))
            else:
                partners = _factor_space(d2, cap)
            for b in partners:
                if config.symmetry == "palindromic" and reverse(IntPoly(b)) not in (
                    IntPoly(b),
                    -IntPoly(b),
                ):
                    continue
                limit = max(map(abs, multiply_coefficients(a, b)))
                if config.product_height_cap is not None and limit > config.product_height_cap:
                    continue
                low = min(max(map(abs, a)), max(map(abs, b)))
                collector.offer(a, b, low, limit)
    return _merge(config, [_PartitionResult(best=collector.best, hits=collector.hits)])
