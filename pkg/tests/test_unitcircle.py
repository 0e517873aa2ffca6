import numpy as np
import pytest
from pydantic import ValidationError

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly
from factor_bounds.search.unitcircle import (
    ComplexPolyApprox,
    g_parameter,
    height_growth_fit,
    symmetric_identity_holds,
    u_d_height_lower_bound,
    unit_circle_factor,
)


class TestComplexPolyApprox:
    """Tests for floating coefficients with error radii."""

    def test_product_contains_exact(self):
        """Test that the radius of a product covers the exact coefficients."""
        a = ComplexPolyApprox.from_coeffs([1.0, 1.0], [1e-12, 0.0])
        b = ComplexPolyApprox.from_coeffs([-1.0, 0.0, 1.0])
        product = a.multiply(b)
        assert product.degree == 3
        assert product.contains(IntPoly.from_desc([1, 1, -1, -1]))
        assert not product.contains(IntPoly.from_desc([1, 1, -1, 1]))

    def test_height_interval(self):
        """Test the height enclosure of a known polynomial."""
        approx = ComplexPolyApprox.from_coeffs([3.0, -4.0j, 1.0], [0.5, 0.0, 0.0])
        low, high = approx.height_interval()
        assert low <= 4.0 <= high
        assert not approx.is_real

    def test_radii_model_validation(self):
        """Test that radii must match the coefficients and be nonnegative."""
        with pytest.raises(ValidationError, match="error radii"):
            ComplexPolyApprox.from_coeffs([1.0, 2.0], [0.1])
        with pytest.raises(ValidationError, match="nonnegative"):
            ComplexPolyApprox.from_coeffs([1.0], [-0.1])


class TestUnitCircleFactors:
    """Tests for the tall factors of x^d - 1 over R and C."""

    def test_g_parameter(self):
        """Test t for each residue of d mod 3."""
        assert g_parameter(7) == 2
        assert g_parameter(9) == 3
        assert g_parameter(8) == 3

    def test_g6_is_integral(self):
        """Test that g_6 is (x - 1)(x^2 - x + 1), of height 2."""
        factor = unit_circle_factor(6, "g_d")
        assert factor.approx.contains(IntPoly.from_desc([1, -2, 2, -1]))
        assert factor.height_low <= 2.0 <= factor.height_high
        assert factor.height == pytest.approx(2.0)

    def test_u6_matches_power_base(self):
        """Test that u_6 coincides with g_6."""
        u6 = unit_circle_factor(6, "u_d")
        assert u6.approx.contains(IntPoly.from_desc([1, -2, 2, -1]))
        assert u6.approx.is_real

    @pytest.mark.parametrize(
        "d, kind", [(6, "u_d"), (10, "u_d"), (30, "u_d"), (8, "v_d"), (20, "v_d")]
    )
    def test_symmetric_identity(self, d, kind):
        """Test f(x) f(-x) = +-(x^d - 1) within the radii."""
        assert symmetric_identity_holds(d, kind)

    def test_v_d_is_complex(self):
        """Test that v_d has a non-real coefficient."""
        factor = unit_circle_factor(8, "v_d")
        assert factor.approx.degree == 4
        assert not factor.approx.is_real

    def test_h_d_degree(self):
        """Test that h_d has degree 2t for d = 1 mod 3."""
        factor = unit_circle_factor(13, "h_d")
        assert factor.approx.degree == 2 * g_parameter(13)

    def test_u_d_lower_bound(self):
        """Test the height of u_30 against its lower bound."""
        factor = unit_circle_factor(30, "u_d")
        assert factor.height_high >= u_d_height_lower_bound(30)

    def test_growth_fit(self):
        """Test that log heights of g_d grow with d."""
        slope, _ = height_growth_fit("g_d", [30, 60, 90, 120])
        assert slope > 0

    @pytest.mark.parametrize(
        "d, kind",
        [(2, "g_d"), (9, "h_d"), (8, "u_d"), (6, "v_d")],
    )
    def test_domain(self, d, kind):
        """Test the residue conditions of each kind."""
        with pytest.raises(DomainError):
            unit_circle_factor(d, kind)

    def test_domain_of_helpers(self):
        """Test the preconditions of the fit and the lower bound."""
        with pytest.raises(DomainError):
            height_growth_fit("g_d", [30])
        with pytest.raises(DomainError):
            u_d_height_lower_bound(8)
        assert np.isfinite(u_d_height_lower_bound(10))
