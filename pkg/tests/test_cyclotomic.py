import pytest
import sympy

from factor_bounds.cyclotomic import (
    cyclo_height_records,
    cyclotomic,
    cyclotomic_height,
    cyclotomic_kernel,
    exact_height,
    half_series,
)
from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, is_palindromic, product


class TestCyclotomic:
    """Tests for the exact cyclotomic polynomials."""

    @pytest.mark.parametrize(
        "n, coeffs_desc",
        [
            (1, [1, -1]),
            (2, [1, 1]),
            (4, [1, 0, 1]),
            (6, [1, -1, 1]),
            (12, [1, 0, -1, 0, 1]),
            (15, [1, -1, 0, 1, -1, 1, 0, -1, 1]),
        ],
    )
    def test_small_indices(self, n, coeffs_desc):
        """Test the first cyclotomic polynomials of each construction path."""
        assert cyclotomic(n) == IntPoly.from_desc(coeffs_desc)

    @pytest.mark.parametrize("n", [9, 30, 63, 100, 105, 210])
    def test_degree_is_totient(self, n):
        """Test that deg phi_n equals Euler's totient."""
        phi = cyclotomic(n)
        assert phi.degree == sympy.totient(n)
        assert phi.lc == 1
        assert is_palindromic(phi)

    def test_divisor_product(self):
        """Test that x^n - 1 is the product of phi_d over the divisors of n."""
        for n in (12, 30, 45):
            expected = IntPoly.monomial(n) - 1
            assert product(cyclotomic(d) for d in sympy.divisors(n)) == expected

    def test_index_must_be_positive(self):
        """Test that index zero raises DomainError."""
        with pytest.raises(DomainError):
            cyclotomic(0)
        with pytest.raises(DomainError):
            cyclotomic_kernel(0)


class TestHeights:
    """Tests for cyclotomic heights through the series path."""

    def test_kernel(self):
        """Test the odd part of the radical."""
        assert cyclotomic_kernel(12) == 3
        assert cyclotomic_kernel(105) == 105
        assert cyclotomic_kernel(8) == 1
        assert cyclotomic_kernel(2 * 9 * 25) == 15

    def test_first_nonflat_index(self):
        """Test that 105 is the first index with a coefficient of size 2."""
        assert cyclotomic_height(105) == 2
        assert exact_height(105) == 2
        assert all(cyclotomic_height(n) == 1 for n in range(1, 105))

    def test_half_series_matches_polynomial(self):
        """Test the truncated series against the exact lower coefficients."""
        series = half_series(105)
        assert len(series) == 25
        assert [int(c) for c in series] == list(cyclotomic(105).coeffs[:25])

    def test_series_falls_back_to_exact_integers(self, mocker):
        """Test that a series about to leave the int64 range continues exactly."""
        mocker.patch("factor_bounds.cyclotomic._SERIES_LIMIT", 4)
        series = half_series(105)
        assert series.dtype == object
        assert list(series) == list(cyclotomic(105).coeffs[:25])
        assert cyclotomic_height(385) == exact_height(385) == 3

    def test_series_and_exact_agree(self):
        """Test both height paths over a range of indices."""
        for n in range(1, 400):
            assert cyclotomic_height(n) == exact_height(n), n

    def test_records(self):
        """Test the first height records."""
        assert cyclo_height_records(3200) == [
            (2, 105),
            (3, 385),
            (4, 1365),
            (5, 1785),
            (6, 2805),
            (7, 3135),
        ]
        assert cyclo_height_records(104) == []

    def test_slow_records_table(self):
        """Test the record table up to index 40755."""
        records = cyclo_height_records(40755)
        assert [n for _, n in records] == [
            105, 385, 1365, 1785, 2805, 3135, 6545, 10465, 11305, 17255, 20615, 26565, 40755
        ]
        assert [h for h, _ in records] == [2, 3, 4, 5, 6, 7, 9, 14, 23, 25, 27, 59, 359]
        assert cyclo_height_records(11305) == records[:9]

    def test_records_domain(self):
        """Test that a nonpositive bound raises DomainError."""
        with pytest.raises(DomainError):
            cyclo_height_records(0)
