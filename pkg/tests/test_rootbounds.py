import math
import random

import numpy as np
import pytest

from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, l2_norm_squared, negate_x, substitute_power
from factor_bounds.rootbounds import (
    auto_depth,
    cauchy_bound,
    graeffe,
    graeffe_chain,
    knuth_bound,
    log2_down,
    log2_up,
    mahler_upper,
    refined_root_bound,
    zassenhaus_bound,
)
from factor_bounds.settings import TABLE_DEPTH

# degree-8 product whose degree-4 factors favour the binomial bound
TABLE_PRODUCT = IntPoly.from_desc([1, 8, 47, 136, 285, 171, -20, -21, 2])


def root_moduli(f: IntPoly) -> np.ndarray:
    return np.abs(np.roots([float(c) for c in f.coeffs_desc]))


def known_root_polynomials(count: int, seed: int):
    """Yield (f, root moduli) for products of integer linear factors and x^2 + s^2."""
    rng = random.Random(seed)
    for _ in range(count):
        f = IntPoly((rng.choice([-3, -2, -1, 1, 2, 3]),))
        moduli = []
        for _ in range(rng.randint(1, 4)):
            root = rng.choice([r for r in range(-9, 10) if r])
            f = f * IntPoly((-root, 1))
            moduli.append(abs(root))
        for _ in range(rng.randint(0, 2)):
            s = rng.randint(1, 6)
            f = f * IntPoly((s * s, 0, 1))
            moduli.extend([s, s])
        yield f, moduli


class TestGraeffe:
    """Tests for the root-squaring step."""

    def test_linear(self):
        """Test that the root 2 becomes 4."""
        assert graeffe(IntPoly.from_desc([1, -2])) == IntPoly.from_desc([1, -4])

    def test_quadratic(self):
        """Test that x^2 - 4 becomes (x - 4)^2."""
        assert graeffe(IntPoly.from_desc([1, 0, -4])) == IntPoly.from_desc([1, -8, 16])

    def test_root_squaring_example(self):
        """Test that x^2 - 2 becomes x^2 - 4x + 4."""
        assert graeffe(IntPoly.from_desc([1, 0, -2])) == IntPoly.from_desc([1, -4, 4])

    def test_identity_on_random_inputs(self):
        """Test g(x^2) == (-1)^d f(x) f(-x) on random polynomials."""
        rng = random.Random(1729)
        for _ in range(500):
            degree = rng.randint(1, 12)
            coeffs = [rng.randint(-50, 50) for _ in range(degree)]
            coeffs.append(rng.choice([c for c in range(-50, 51) if c]))
            f = IntPoly(coeffs)
            product = f * negate_x(f)
            expected = -product if degree % 2 else product
            assert substitute_power(graeffe(f), 2) == expected

    def test_chain_length(self):
        """Test that the chain yields the input and one iterate per level."""
        levels = list(graeffe_chain(IntPoly.from_desc([1, 3, -5, 2]), 4))
        assert len(levels) == 5
        assert levels[0].values == (2, 5, 3, 1)
        assert all(level.degree == 3 for level in levels)

    def test_majorants_after_cap(self):
        """Test that coefficients past the bit cap switch to scaled majorants."""
        f = IntPoly.from_desc([3, 7, -3, 11, 5, -9, 2])
        levels = list(graeffe_chain(f, 12, cap_bits=64))
        assert levels[0].exact
        assert not levels[-1].exact
        assert levels[-1].shift > 0

    def test_majorants_bound_exact_iterates(self):
        """Test that scaled majorants bound every exact iterate from the right side."""
        f = IntPoly.from_desc([3, 7, -3, 11, 5, -9, 2])
        exact = f
        for t, level in enumerate(graeffe_chain(f, 10, cap_bits=64)):
            if t:
                exact = graeffe(exact)
            magnitudes = [abs(c) for c in exact.coeffs]
            scale = 2**level.shift
            assert all(u * scale >= m for u, m in zip(level.upper_values, magnitudes, strict=True))
            assert level.values[-1] * scale <= magnitudes[-1]
            assert level.upper_values[-1] * scale >= magnitudes[-1]


class TestLogs:
    """Tests for the bracketing logarithms."""

    @pytest.mark.parametrize("n", [1, 2, 3, 1000, 2**60 + 12345, 10**40 + 7])
    def test_brackets(self, n):
        """Test that log2_down <= log2 n <= log2_up."""
        exact = n.bit_length() - 1
        assert log2_down(n) <= log2_up(n)
        assert exact - 1e-9 <= log2_up(n) <= exact + 1

    def test_auto_depth(self):
        """Test the default Graeffe depth."""
        assert auto_depth(2) == 3
        assert auto_depth(8) == 3
        assert auto_depth(100) == 7


class TestRootBounds:
    """Tests for bounds on the largest root modulus."""

    def test_simple_bounds(self):
        """Test the classical bounds on x^2 - 4, whose roots are +-2."""
        f = IntPoly.from_desc([1, 0, -4])
        assert knuth_bound(f).value >= 4.0
        assert zassenhaus_bound(f).value >= 2.0
        cauchy = cauchy_bound(f)
        assert cauchy.method == "cauchy_newton"
        assert 2.0 <= cauchy.rho.value < 2.001

    def test_formula_examples(self):
        """Test the Knuth, Zassenhaus and Cauchy bounds of small quadratics."""
        f = IntPoly.from_desc([1, 0, -2])
        assert knuth_bound(f).value == pytest.approx(2 * math.sqrt(2), rel=1e-9)
        assert zassenhaus_bound(f).value == pytest.approx(2 + math.sqrt(2), rel=1e-9)
        assert zassenhaus_bound(f * IntPoly((-7,))) == zassenhaus_bound(f)
        assert math.sqrt(2) <= cauchy_bound(f).rho.value <= 1.5
        g = IntPoly.from_desc([1, -4, 4])
        assert 2 + 2 * math.sqrt(2) <= cauchy_bound(g).rho.value
        assert cauchy_bound(g).rho.value == pytest.approx(2 + 2 * math.sqrt(2), rel=1e-5)
        assert math.sqrt(2) <= refined_root_bound(f).rho.value <= 1.5

    def test_table_product(self):
        """Test the refined bound of a degree-8 table product."""
        largest = root_moduli(TABLE_PRODUCT).max()
        assert largest * (1 - 1e-9) <= refined_root_bound(TABLE_PRODUCT).rho.value <= 4.3
        deep = refined_root_bound(TABLE_PRODUCT, depth=TABLE_DEPTH)
        assert largest * (1 - 1e-9) <= deep.rho.value <= largest * 1.01

    def test_validity_on_known_roots(self):
        """Test every bound against exactly known root moduli."""
        for f, moduli in known_root_polynomials(500, seed=31):
            largest = max(moduli)
            degree = len(f) - 1
            knuth = knuth_bound(f).value
            assert largest <= knuth <= 2 * degree * largest * (1 + 1e-9)
            assert zassenhaus_bound(f).value >= largest
            assert cauchy_bound(f).rho.value >= largest
            assert refined_root_bound(f).rho.value >= largest

    def test_refined_bound_on_random_products(self, random_factorization):
        """Test that refined bounds cover the numerical root moduli."""
        for degrees in [(2, 3), (4, 4), (1, 6), (5,)]:
            f = random_factorization(degrees).product
            largest = root_moduli(f).max()
            result = refined_root_bound(f, depth=6)
            assert result.rho.value >= largest * (1 - 1e-9)
            assert result.rho.value <= knuth_bound(f).value * (1 + 1e-9)
            assert result.rho.value <= 1.2 * largest

    def test_depth_zero(self):
        """Test that depth zero never reports a Graeffe result."""
        result = refined_root_bound(IntPoly.from_desc([1, 5, 2]), depth=0)
        assert result.graeffe_depth == 0
        assert result.method != "graeffe"

    def test_zero_roots(self):
        """Test a power of x, whose only root is zero."""
        assert refined_root_bound(IntPoly.monomial(3)).rho.value == 0.0

    def test_constant_raises(self):
        """Test that constants have no root bound."""
        with pytest.raises(DomainError):
            knuth_bound(IntPoly((3,)))
        with pytest.raises(DomainError):
            refined_root_bound(IntPoly((3,)))

    def test_negative_depth_raises(self):
        """Test that a negative Graeffe depth is rejected."""
        with pytest.raises(DomainError, match="nonnegative"):
            refined_root_bound(IntPoly.from_desc([1, 1]), depth=-1)


class TestMahler:
    """Tests for the Graeffe estimate of the Mahler measure."""

    def test_cyclotomic_measure(self):
        """Test that the estimate for x + 1 approaches 1 from above."""
        estimate = mahler_upper(IntPoly.from_desc([1, 1]), depth=10)
        assert 1.0 <= estimate.upper.value <= 1.001
        assert estimate.graeffe_depth == 10

    def test_leading_coefficient(self):
        """Test that M(2x + 1) == 2 is bounded closely."""
        estimate = mahler_upper(IntPoly.from_desc([2, 1]), depth=10)
        assert 2.0 <= estimate.upper.value <= 2.01

    def test_estimate_covers_measure(self, random_factorization):
        """Test the estimate against the measure computed from numerical roots."""
        for degrees in [(3, 4), (2, 2, 2)]:
            f = random_factorization(degrees).product
            measure = abs(f.lc) * np.prod(np.maximum(1.0, root_moduli(f)))
            upper = mahler_upper(f, depth=10).upper.value
            assert upper >= measure * (1 - 1e-9)
            assert upper <= measure * 1.01

    def test_table_product(self):
        """Test the Mahler estimate of a degree-8 table product."""
        moduli = root_moduli(TABLE_PRODUCT)
        measure = float(np.prod(np.maximum(1.0, moduli)))
        upper = mahler_upper(TABLE_PRODUCT, depth=TABLE_DEPTH).upper.value
        assert measure * (1 - 1e-9) <= upper <= 1.15 * 197

    def test_validity_on_known_roots(self):
        """Test the estimate against exact measures and the 2-norm."""
        for f, moduli in known_root_polynomials(500, seed=47):
            measure = abs(f.lc) * math.prod(max(1, m) for m in moduli)
            upper = mahler_upper(f).upper.value
            assert upper >= measure
            assert upper <= math.sqrt(l2_norm_squared(f)) * (1 + 1e-9)

    def test_deep_iterates_stay_finite(self):
        """Test a depth large enough to need majorants."""
        f = IntPoly.from_desc([3, -1, 4, 1, -5, 9, -2, 6])
        estimate = mahler_upper(f, depth=20, cap_bits=256)
        assert estimate.upper.value < float("inf")
        assert estimate.upper.value >= 3.0

    def test_zero_raises(self):
        """Test that the zero polynomial has no Mahler measure."""
        with pytest.raises(DomainError):
            mahler_upper(IntPoly())
