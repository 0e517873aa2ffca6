"""Load, validate and re-verify the fixture corpus.

Every fixture file is checked twice on load: against the JSON schema shipped
in ``schemas/`` and against the pydantic row models below. Verification then
rebuilds each row with exact integer arithmetic. Any disagreement raises
``FixtureVerificationError`` naming the file and the row.
"""

from __future__ import annotations

import json
import logging
import pathlib
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from functools import cache
from typing import Annotated, Any, Literal

import jsonschema
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from factor_bounds.cyclotomic import cyclotomic, cyclotomic_height
from factor_bounds.exceptions import FactorBoundsError, FixtureVerificationError
from factor_bounds.parsing import coeffs_from_strings
from factor_bounds.polycore import IntPoly, exact_divide, height, product, star
from factor_bounds.resources import Fixtures, Schemas
from factor_bounds.search.cases import (
    CaseTag,
    FactorizationCase,
    HeightRecord,
    ratio,
    weakly_irreducible,
)
from factor_bounds.search.cyclosets import product_family_xek
from factor_bounds.search.families import inflate_chain

logger = logging.getLogger(__name__)

CoeffsDesc = tuple[str, ...]


class _Row(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., description="Row identifier, unique within its file")


class CaseExpectation(BaseModel):
    """Heights and ratio a factorization row must reproduce."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    heights: tuple[int, ...]
    product_height: int = Field(..., ge=1)
    ratio: str = Field(..., description="Exact ratio, n or n/d")


class DegreeAwareClaims(BaseModel):
    """Printed degree-aware bound entries and overall claims."""

    model_config = ConfigDict(frozen=True, extra="allow")

    delta: int = Field(..., ge=1)
    printed: dict[str, CoeffsDesc] = Field(
        default_factory=dict, description="Method name to entries from x^delta down"
    )

    def claim(self, name: str) -> int | None:
        """Return an overall claim such as ``combined_overall``, if present."""
        value = (self.model_extra or {}).get(name)
        return None if value is None else int(value)


class FactorizationRow(_Row):
    kind: Literal["factorization"]
    factors: tuple[CoeffsDesc, ...] = Field(..., min_length=1)
    product: CoeffsDesc | None = None
    expected: CaseExpectation
    printed_ratio: str | None = None
    tags: frozenset[CaseTag] = frozenset()
    degree_aware: DegreeAwareClaims | None = None
    single_factor: dict[str, int] | None = None


class PrintedStar(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    ratio: str | None = None
    factor_height: int | None = None
    product_height: int | None = None


class StarCompletionRow(_Row):
    """A single printed factor g, completed to g * star(g)."""

    kind: Literal["star_completion"]
    degree: int = Field(..., ge=2, description="Degree of the product")
    factor: CoeffsDesc | None = None
    factor_prefix: CoeffsDesc | None = None
    printed: PrintedStar
    tags: frozenset[CaseTag] = frozenset()

    @model_validator(mode="after")
    def validate_factor_source(self) -> StarCompletionRow:
        """Exactly one of the full factor and its prefix is stored."""
        if (self.factor is None) == (self.factor_prefix is None):
            raise ValueError(
                f"row '{self.id}' must store exactly one of factor and factor_prefix"
            )
        if self.degree % 2:
            raise ValueError(f"row '{self.id}': a product g * star(g) has even degree")
        return self


class DivisibilityHeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    factor_height: int = Field(..., ge=1)
    multiple_height: int = Field(..., ge=1)


class DivisibilityRow(_Row):
    kind: Literal["divisibility"]
    factor: CoeffsDesc
    multiple: CoeffsDesc
    expected: DivisibilityHeights


class ElidedDivisibilityRow(_Row):
    """Divisibility with palindromic factor and multiple stored as prefixes."""

    kind: Literal["elided_divisibility"]
    degree: int = Field(..., ge=1, description="Degree of the multiple")
    factor_degree: int = Field(..., ge=1)
    factor_prefix: CoeffsDesc
    multiple_prefix: CoeffsDesc
    multiple_tail: Literal["1", "-1"] = Field(..., description="Constant term of the multiple")
    expected: DivisibilityHeights


class SubsetProductRow(_Row):
    kind: Literal["subset_product"]
    d: int = Field(..., ge=1)
    indices: tuple[int, ...] = Field(..., min_length=1)
    height: int = Field(..., ge=1)
    printed_height: int | None = None
    note: str = ""


class CyclotomicRecordRow(_Row):
    kind: Literal["cyclotomic_record"]
    index: int = Field(..., ge=1)
    height: int = Field(..., ge=1)


class CyclotomicProductExpectation(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    degree: int = Field(..., ge=1)
    product_height: int = Field(..., ge=1)
    cofactor_lower_bound: str


class CyclotomicProductRow(_Row):
    kind: Literal["cyclotomic_product"]
    exponents: tuple[int, ...] = Field(..., min_length=1)
    expected: CyclotomicProductExpectation


class InflationExpectation(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    degree: int = Field(..., ge=1)
    product_height: int = Field(..., ge=1)
    factor_heights: tuple[int, ...]


class InflationRow(_Row):
    kind: Literal["inflation"]
    factors: tuple[CoeffsDesc, ...] = Field(..., min_length=1)
    powers: tuple[int, ...] = Field(..., min_length=1)
    expected: InflationExpectation


FixtureRow = Annotated[
    FactorizationRow
    | StarCompletionRow
    | DivisibilityRow
    | ElidedDivisibilityRow
    | SubsetProductRow
    | CyclotomicRecordRow
    | CyclotomicProductRow
    | InflationRow,
    Field(discriminator="kind"),
]


class FixtureFile(BaseModel):
    """One fixture table."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    schema_ref: str | None = Field(None, alias="$schema")
    title: str = Field(..., min_length=1)
    description: str = ""
    rows: tuple[FixtureRow, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def validate_unique_ids(self) -> FixtureFile:
        """Row ids must be unique within a file."""
        seen: set[str] = set()
        for row in self.rows:
            if row.id in seen:
                raise ValueError(f"duplicate row id '{row.id}'")
            seen.add(row.id)
        return self


class RowOutcome(BaseModel):
    """What one verified row produced."""

    model_config = ConfigDict(frozen=True)

    row: str
    kind: str
    case: FactorizationCase | None = None
    record: HeightRecord | None = None
    weak_failures: tuple[int, ...] = Field(
        (), description="Indices of claimed-irreducible factors that fail the weak filter"
    )


class FixtureReport(BaseModel):
    """Verification result for one fixture file."""

    model_config = ConfigDict(frozen=True)

    fixture: str
    title: str
    outcomes: tuple[RowOutcome, ...]

    @property
    def cases(self) -> list[FactorizationCase]:
        return [outcome.case for outcome in self.outcomes if outcome.case is not None]

    @property
    def records(self) -> list[HeightRecord]:
        return [outcome.record for outcome in self.outcomes if outcome.record is not None]

    def to_json(self) -> dict[str, Any]:
        return {
            "fixture": self.fixture,
            "title": self.title,
            "rows": len(self.outcomes),
            "cases": len(self.cases),
            "height_only": [outcome.row for outcome in self.outcomes if outcome.record],
            "weak_failures": {
                outcome.row: list(outcome.weak_failures)
                for outcome in self.outcomes
                if outcome.weak_failures
            },
        }


@cache
def load_schema() -> dict[str, Any]:
    """Return the fixture JSON schema."""
    with Schemas().get_file("fixture").open() as f:
        return json.load(f)


def _row_label(data: Any, path: Sequence[Any]) -> str:
    if len(path) >= 2 and path[0] == "rows" and isinstance(path[1], int):
        try:
            return str(data["rows"][path[1]].get("id", f"#{path[1]}"))
        except (AttributeError, IndexError, KeyError, TypeError):
            return f"#{path[1]}"
    return "-"


def load_fixture(path: str | pathlib.Path) -> FixtureFile:
    """
    Read a fixture file and validate it against the schema and row models.

    Args:
        path: Path to a fixture file

    Returns:
        The parsed fixture

    Raises:
        FixtureVerificationError: If the file is not valid JSON or violates
            the schema.
    """
    path = pathlib.Path(path)
    name = path.name
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FixtureVerificationError(name, "-", f"cannot read fixture: {e}") from e

    try:
        jsonschema.validate(data, load_schema())
    except jsonschema.ValidationError as e:
        raise FixtureVerificationError(
            name, _row_label(data, list(e.absolute_path)), f"schema violation: {e.message}"
        ) from e

    try:
        fixture = FixtureFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise FixtureVerificationError(
            name, _row_label(data, list(first["loc"])), f"invalid row: {first['msg']}"
        ) from e
    logger.debug("loaded %s with %d rows", name, len(fixture.rows))
    return fixture


def printed_ratio_matches(exact: Fraction, printed: str) -> bool:
    """
    Compare an exact ratio with its printed decimal.

    Printed ratios are sometimes rounded and sometimes truncated, so any value
    strictly within one unit of the last printed digit matches.

    Args:
        exact: The recomputed ratio
        printed: The ratio as printed, e.g. ``"2.16"``

    Returns:
        True if the printed text is a rounding or truncation of ``exact``
    """
    decimals = len(printed.partition(".")[2])
    return abs(exact - Fraction(printed)) < Fraction(1, 10**decimals)


def mirror_prefix(prefix: Sequence[int], length: int, sign: int = 1) -> list[int]:
    """
    Complete a palindromic (sign 1) or antipalindromic (sign -1) coefficient list.

    Args:
        prefix: Leading coefficients, covering at least half of the list
        length: Number of coefficients of the completed list
        sign: Relation between coefficient ``i`` and ``length - 1 - i``

    Returns:
        The completed coefficient list

    Raises:
        ValueError: If the prefix is too short, too long, or not symmetric
            where it overlaps its own mirror image.
    """
    if not (length + 1) // 2 <= len(prefix) <= length:
        raise ValueError(
            f"a prefix of {len(prefix)} coefficients cannot complete a list of {length}"
        )
    full = [
        prefix[i] if i < len(prefix) else sign * prefix[length - 1 - i]
        for i in range(length)
    ]
    for i in range(length):
        if full[i] != sign * full[length - 1 - i]:
            raise ValueError(
                f"coefficients {i} and {length - 1 - i} break the symmetry of the prefix"
            )
    return full


def _poly(values: Iterable[str]) -> IntPoly:
    return coeffs_from_strings(list(values))


class _Verifier:
    """Per-file verification context."""

    def __init__(self, fixture: str, check_irreducibility: bool):
        self.fixture = fixture
        self.check_irreducibility = check_irreducibility

    def fail(self, row: _Row, reason: str) -> FixtureVerificationError:
        return FixtureVerificationError(self.fixture, row.id, reason)

    def source(self, row: _Row) -> str:
        return f"{self.fixture}:{row.id}"

    def expect(self, row: _Row, label: str, actual: object, expected: object) -> None:
        if actual != expected:
            raise self.fail(row, f"{label} is {actual}, expected {expected}")

    def weak_failures(self, case: FactorizationCase) -> tuple[int, ...]:
        if not self.check_irreducibility or "irreducible_claimed" not in case.tags:
            return ()
        failures = tuple(
            index for index, g in enumerate(case.factors) if not weakly_irreducible(g)
        )
        for index in failures:
            logger.warning(
                "%s: factor %d is claimed irreducible but fails the weak filter",
                case.source,
                index,
            )
        return failures

    def case_outcome(self, row: _Row, case: FactorizationCase) -> RowOutcome:
        return RowOutcome(
            row=row.id, kind=row.kind, case=case, weak_failures=self.weak_failures(case)
        )

    def verify(self, row: _Row) -> RowOutcome:
        handler = getattr(self, f"_verify_{row.kind}")
        try:
            return handler(row)
        except FixtureVerificationError:
            raise
        except (FactorBoundsError, ValueError) as e:
            raise self.fail(row, str(e)) from e

    def _verify_factorization(self, row: FactorizationRow) -> RowOutcome:
        factors = tuple(_poly(g) for g in row.factors)
        if row.product is None:
            case = FactorizationCase.from_factors(factors, row.tags, self.source(row))
        else:
            case = FactorizationCase(
                product=_poly(row.product),
                factors=factors,
                tags=row.tags,
                source=self.source(row),
            )
        self.expect(row, "heights", case.heights, row.expected.heights)
        self.expect(row, "product height", case.product_height, row.expected.product_height)
        exact = ratio(case).value
        self.expect(row, "ratio", exact, Fraction(row.expected.ratio))
        if row.printed_ratio is not None and not printed_ratio_matches(exact, row.printed_ratio):
            raise self.fail(row, f"ratio {exact} does not print as {row.printed_ratio}")
        return self.case_outcome(row, case)

    def _verify_star_completion(self, row: StarCompletionRow) -> RowOutcome:
        printed = row.printed
        if row.factor is not None:
            g = _poly(row.factor)
        else:
            try:
                g = IntPoly.from_desc(
                    mirror_prefix([int(c) for c in row.factor_prefix], row.degree // 2 + 1)
                )
            except ValueError as e:
                return self.height_only(row, None, f"the prefix cannot be mirrored: {e}")
        self.expect(row, "product degree", 2 * g.degree, row.degree)
        case = FactorizationCase.from_factors((g, star(g)), row.tags, self.source(row))
        exact = ratio(case).value
        mismatches = []
        if printed.ratio is not None and not printed_ratio_matches(exact, printed.ratio):
            mismatches.append(f"ratio {exact} against printed {printed.ratio}")
        if printed.factor_height is not None and height(g) != printed.factor_height:
            mismatches.append(f"factor height {height(g)} against printed {printed.factor_height}")
        if printed.product_height is not None and case.product_height != printed.product_height:
            mismatches.append(
                f"product height {case.product_height} against printed {printed.product_height}"
            )
        if not mismatches:
            return self.case_outcome(row, case)
        return self.height_only(
            row,
            height(g),
            "g * star(g) does not reproduce the printed values: " + "; ".join(mismatches),
        )

    def height_only(
        self, row: StarCompletionRow, factor_height: int | None, reason: str
    ) -> RowOutcome:
        printed = row.printed
        factor_height = printed.factor_height or factor_height
        if factor_height is None:
            raise self.fail(row, f"{reason}, and no factor height is printed")
        logger.info("%s kept as a height-only record: %s", self.source(row), reason)
        record = HeightRecord(
            degree=row.degree,
            product_height=printed.product_height,
            factor_height=factor_height,
            ratio=printed.ratio,
            source=self.source(row),
            reason=reason,
        )
        return RowOutcome(row=row.id, kind=row.kind, record=record)

    def _divisibility_case(
        self, row: _Row, factor: IntPoly, multiple: IntPoly, expected: DivisibilityHeights
    ) -> RowOutcome:
        cofactor = exact_divide(multiple, factor)
        self.expect(row, "factor height", height(factor), expected.factor_height)
        self.expect(row, "multiple height", height(multiple), expected.multiple_height)
        case = FactorizationCase(
            product=multiple, factors=(factor, cofactor), source=self.source(row)
        )
        return self.case_outcome(row, case)

    def _verify_divisibility(self, row: DivisibilityRow) -> RowOutcome:
        return self._divisibility_case(
            row, _poly(row.factor), _poly(row.multiple), row.expected
        )

    def _verify_elided_divisibility(self, row: ElidedDivisibilityRow) -> RowOutcome:
        factor = mirror_prefix([int(c) for c in row.factor_prefix], row.factor_degree + 1)
        lead = int(row.multiple_prefix[0])
        tail = int(row.multiple_tail)
        if abs(lead) != 1:
            raise self.fail(row, f"a height-1 multiple cannot lead with {lead}")
        multiple = mirror_prefix(
            [int(c) for c in row.multiple_prefix], row.degree + 1, sign=tail * lead
        )
        return self._divisibility_case(
            row, IntPoly.from_desc(factor), IntPoly.from_desc(multiple), row.expected
        )

    def _verify_subset_product(self, row: SubsetProductRow) -> RowOutcome:
        for n in row.indices:
            if row.d % n:
                raise self.fail(row, f"index {n} does not divide d = {row.d}")
        value = height(product(cyclotomic(n) for n in row.indices))
        self.expect(row, "height", value, row.height)
        if row.printed_height is not None and row.printed_height != value:
            logger.info(
                "%s: printed height %d differs from the exact %d",
                self.source(row),
                row.printed_height,
                value,
            )
        return RowOutcome(row=row.id, kind=row.kind)

    def _verify_cyclotomic_record(self, row: CyclotomicRecordRow) -> RowOutcome:
        self.expect(row, "height", cyclotomic_height(row.index), row.height)
        return RowOutcome(row=row.id, kind=row.kind)

    def _verify_cyclotomic_product(self, row: CyclotomicProductRow) -> RowOutcome:
        family = product_family_xek(row.exponents)
        self.expect(row, "degree", family.degree, row.expected.degree)
        self.expect(row, "product height", family.height, row.expected.product_height)
        self.expect(
            row,
            "cofactor lower bound",
            family.cofactor_lower_bound,
            Fraction(row.expected.cofactor_lower_bound),
        )
        return RowOutcome(row=row.id, kind=row.kind)

    def _verify_inflation(self, row: InflationRow) -> RowOutcome:
        base = FactorizationCase.from_factors(
            (_poly(g) for g in row.factors), source=self.source(row)
        )
        case = inflate_chain(base, row.powers)
        self.expect(row, "degree", case.product.degree, row.expected.degree)
        self.expect(row, "product height", case.product_height, row.expected.product_height)
        self.expect(row, "factor heights", case.heights, row.expected.factor_heights)
        return RowOutcome(row=row.id, kind=row.kind, case=case)


def verify_fixture(
    path: str | pathlib.Path, check_irreducibility: bool = False
) -> FixtureReport:
    """
    Load a fixture file and re-verify every row exactly.

    Args:
        path: Path to a fixture file
        check_irreducibility: Also run the weak irreducibility filter on
            factors tagged ``irreducible_claimed``. Failures are logged and
            reported, never raised.

    Returns:
        The per-row outcomes

    Raises:
        FixtureVerificationError: If a row fails to verify.
    """
    path = pathlib.Path(path)
    fixture = load_fixture(path)
    verifier = _Verifier(path.name, check_irreducibility)
    outcomes = tuple(verifier.verify(row) for row in fixture.rows)
    report = FixtureReport(fixture=path.name, title=fixture.title, outcomes=outcomes)
    logger.info(
        "verified %s: %d rows, %d cases, %d height-only records",
        path.name,
        len(outcomes),
        len(report.cases),
        len(report.records),
    )
    return report


def fixture_paths(directory: str | pathlib.Path | None = None) -> list[pathlib.Path]:
    """Fixture files of a directory in name order, the shipped corpus by default."""
    if directory is None:
        return Fixtures().files()
    return sorted(pathlib.Path(directory).glob("*.json"))


def verify_directory(
    directory: str | pathlib.Path | None = None,
    check_irreducibility: bool = False,
    keep_going: bool = False,
) -> tuple[list[FixtureReport], list[FixtureVerificationError]]:
    """
    Verify every fixture file of a directory.

    Args:
        directory: Directory holding fixture files, the shipped corpus if None
        check_irreducibility: Passed on to ``verify_fixture``
        keep_going: Collect failures instead of raising the first one

    Returns:
        Reports of the files that verified, and the collected failures

    Raises:
        FixtureVerificationError: On the first failure unless ``keep_going``.
    """
    paths = fixture_paths(directory)
    if not paths:
        raise FixtureVerificationError(str(directory), "-", "no fixture files found")
    reports: list[FixtureReport] = []
    failures: list[FixtureVerificationError] = []
    for path in paths:
        try:
            reports.append(verify_fixture(path, check_irreducibility))
        except FixtureVerificationError as e:
            if not keep_going:
                raise
            logger.error("%s", e)
            failures.append(e)
    return reports, failures


def fixture_cases(directory: str | pathlib.Path | None = None) -> Iterator[FactorizationCase]:
    """Yield every factorization the corpus verifies, file by file."""
    for path in fixture_paths(directory):
        yield from verify_fixture(path).cases
