import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from factor_bounds.exceptions import BoundOverflowError
from factor_bounds.upper import UpperReal, round_up, upper_min


class TestUpperReal:
    """Tests for certified upper bounds on reals."""

    def test_rejects_negative_and_nan(self):
        """Test that the value must be a nonnegative number."""
        with pytest.raises(ValueError, match="nonnegative"):
            UpperReal(-1.0)
        with pytest.raises(ValueError):
            UpperReal(math.nan)

    def test_round_up_is_above(self):
        """Test that rounding up never lowers a value."""
        for value in (1.0, 0.1, 1e300, 3.0e-300):
            assert round_up(value) > value
        assert round_up(0.0) == 0.0

    def test_exact_integers(self):
        """Test that representable integers are kept exactly."""
        assert UpperReal.from_int(12).value == 12.0
        assert UpperReal.from_int(-7).value == 7.0

    def test_huge_integer_rounds_up(self):
        """Test an integer with no double representation."""
        n = 2**80 + 1
        assert Fraction(UpperReal.from_int(n).value) >= n

    def test_overflowing_fraction_is_infinite(self):
        """Test that values beyond the double range become infinity."""
        assert math.isinf(UpperReal.from_fraction(Fraction(10**400)).value)

    def test_floor_of_infinity_raises(self):
        """Test that flooring an infinite bound raises BoundOverflowError."""
        with pytest.raises(BoundOverflowError):
            UpperReal(math.inf).floor()

    def test_sqrt_of_perfect_square(self):
        """Test that square roots of perfect squares are exact."""
        assert UpperReal.sqrt_of(144).value == 12.0
        assert UpperReal.sqrt_of(0).value == 0.0

    @given(st.integers(min_value=1, max_value=10**40))
    def test_sqrt_property(self, n):
        """Test that the certified square root squares to at least n."""
        root = UpperReal.sqrt_of(n)
        assert Fraction(root.value) ** 2 >= n

    @given(
        st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(10**6)),
        st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(10**6)),
    )
    def test_arithmetic_property(self, a, b):
        """Test that sums, products and quotients stay above the exact values."""
        ua, ub = UpperReal.from_fraction(a), UpperReal.from_fraction(b)
        assert Fraction((ua + ub).value) >= a + b
        assert Fraction((ua * ub).value) >= a * b
        assert Fraction((ua / b).value) >= a / b

    def test_division_by_nonpositive_is_unsupported(self):
        """Test that division only accepts exact positive divisors."""
        with pytest.raises(TypeError):
            UpperReal(1.0) / 0
        with pytest.raises(TypeError):
            UpperReal(1.0) / 0.5

    def test_log2_roundtrip(self):
        """Test that from_log2 and log2 bound each other from above."""
        value = UpperReal.from_log2(10.0)
        assert value.value >= 1024.0
        assert value.log2() >= 10.0
        assert UpperReal.from_log2(-math.inf).value == 0.0

    def test_root(self):
        """Test the certified k-th root."""
        assert UpperReal(8.0).root(3).value >= 2.0
        assert UpperReal(1.0).root(5).value == 1.0
        with pytest.raises(ValueError):
            UpperReal(8.0).root(0)

    def test_ordering_and_min(self):
        """Test comparisons and the minimum of several bounds."""
        small, large = UpperReal(2.0), UpperReal(3.0)
        assert small < large
        assert small <= 2
        assert upper_min(large, small) is small
        assert str(small) == "2.0"
