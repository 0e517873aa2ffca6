"""Pytest configuration and shared fixtures for factor_bounds tests.

This module provides the polynomials of the degree-aware comparison tables,
a seeded generator of random factorizations, helper assertions, and
configuration for all test modules in the factor_bounds package.
"""

import json
import logging
import os
import random
from pathlib import Path

import pytest

from factor_bounds.parsing import coeffs_from_strings
from factor_bounds.polycore import IntPoly, height, product
from factor_bounds.resources import Fixtures
from factor_bounds.search.cases import FactorizationCase

# Factors of the degree-aware comparison table, from x^4 down to x^0
TABLE_FACTORS: dict[str, tuple[list[int], list[int]]] = {
    "favours-binomial": ([1, 4, 16, 9, -1], [1, 4, 15, 3, -2]),
    "favours-mignotte": ([1, -7, 7, -8, 2], [2, -2, -2, 6, -5]),
    "favours-knuth-cohen": ([1, -8, -7, -5, 5], [2, -6, -1, 4, -5]),
    "favours-beauzamy": ([1, 5, -14, -1, -3], [3, 8, 15, -5, -1]),
    "combined-is-best": ([2, 8, 10, 9, -1], [1, -3, 5, 0, -5]),
}


def pytest_configure(config):
    """Configure pytest for continuous testing with environment persistence."""
    project_root = Path(__file__).parent.parent

    # Set environment variables for consistent test execution
    os.environ.setdefault("PYTHONPATH", str(project_root))
    os.environ.setdefault("PYTHONDONTWRITEBYTECODE", "1")
    os.environ.setdefault("PIXI_PROJECT_ROOT", str(project_root))

    config.option.verbose = max(config.option.verbose, 1)
    config.option.tb = "short"


def pytest_sessionstart(session):
    """Actions to perform at the start of a test session."""
    print("🔄 Starting pytest session for factor_bounds")


def pytest_sessionfinish(session, exitstatus):
    """Actions to perform at the end of a test session."""
    if exitstatus == 0:
        print("✅ All tests passed")
    else:
        print(f"❌ Tests finished with exit status: {exitstatus}")


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers automatically based on test names."""
    for item in items:
        # Add markers based on test file names
        if "fixtures" in item.nodeid or "cli" in item.nodeid:
            item.add_marker(pytest.mark.integration)
        else:
            item.add_marker(pytest.mark.unit)
        if "search" in item.nodeid or "pairs" in item.nodeid or "multiples" in item.nodeid:
            item.add_marker(pytest.mark.search)
        if "schema" in item.nodeid:
            item.add_marker(pytest.mark.schema)

        # Add markers based on test function names
        if "slow" in item.name:
            item.add_marker(pytest.mark.slow)
        if "model" in item.name or "validation" in item.name:
            item.add_marker(pytest.mark.pydantic)
        if "file" in item.name or "corpus" in item.name:
            item.add_marker(pytest.mark.file_io)
        if "property" in item.name:
            item.add_marker(pytest.mark.property)


@pytest.fixture(autouse=True)
def package_logger():
    """Undo the handler and propagation changes made by the command line.

    Yields:
        logging.Logger: The package logger, propagating to the root logger.
    """
    logger = logging.getLogger("factor_bounds")
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)
    yield logger
    logger.handlers.clear()
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def table_cases() -> dict[str, FactorizationCase]:
    """The five factorizations of the degree-aware comparison table.

    Returns:
        dict[str, FactorizationCase]: Cases keyed by fixture row id.
    """
    return {
        name: FactorizationCase.from_factors(
            (IntPoly.from_desc(first), IntPoly.from_desc(second)), source=name
        )
        for name, (first, second) in TABLE_FACTORS.items()
    }


@pytest.fixture
def fixture_dir() -> Path:
    """Directory of the shipped fixture corpus.

    Returns:
        Path: The fixtures directory.
    """
    return Fixtures().path


@pytest.fixture
def random_factorization():
    """Build random factorizations from a fixed seed.

    Returns:
        Callable: ``make(degrees, cap)`` returning a FactorizationCase whose
        factors have the given degrees and coefficients in [-cap, cap].
    """
    rng = random.Random(20240611)

    def make(degrees: tuple[int, ...], cap: int = 5) -> FactorizationCase:
        factors = []
        for degree in degrees:
            coeffs = [rng.randint(-cap, cap) for _ in range(degree)]
            coeffs.append(rng.choice([c for c in range(-cap, cap + 1) if c]))
            if not coeffs[0]:
                coeffs[0] = 1
            factors.append(IntPoly(coeffs))
        return FactorizationCase.from_factors(factors, source="random")

    return make


@pytest.fixture
def write_fixture(tmp_path):
    """Write a fixture document to a temporary directory.

    Returns:
        Callable: ``write(document, name)`` returning the written path.
    """

    def write(document: dict, name: str = "sample.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document, indent=2))
        return path

    return write


# Utility functions for tests
class TestHelpers:
    """Helper functions for tests."""

    @staticmethod
    def assert_bounds_factor(entries_asc: tuple[int, ...], factor: IntPoly) -> None:
        """Assert that every coefficient of a factor respects its bound.

        Args:
            entries_asc: Bound entries, entry i for the coefficient of x**i.
            factor: The factor, of degree len(entries_asc) - 1.
        """
        assert len(entries_asc) == len(factor), (
            f"bound of length {len(entries_asc)} for a factor of degree {factor.degree}"
        )
        violations = [
            (i, c, entries_asc[i]) for i, c in enumerate(factor.coeffs) if abs(c) > entries_asc[i]
        ]
        assert not violations, f"coefficients above their bound (i, c, bound): {violations}"

    @staticmethod
    def assert_case_consistent(case: FactorizationCase) -> None:
        """Assert that a case multiplies out and reports its own heights.

        Args:
            case: Case to check.
        """
        assert product(case.factors) == case.product
        assert case.heights == tuple(height(g) for g in case.factors)
        assert case.product_height == height(case.product)

    @staticmethod
    def poly(*coeffs_desc: int | str) -> IntPoly:
        """Polynomial from descending coefficients, ints or decimal strings."""
        return coeffs_from_strings(list(coeffs_desc))


@pytest.fixture
def test_helpers() -> TestHelpers:
    """Provide test helper functions.

    Returns:
        TestHelpers: Instance of test helper class.
    """
    return TestHelpers()
