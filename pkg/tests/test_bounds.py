import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

from factor_bounds.bounds import (
    METHODS,
    BoundReport,
    BoundVector,
    beauzamy_vector,
    binomial_vector,
    binomial_vector_refined,
    combined_report,
    knuth_cohen_vector,
    min_l2_multiple,
    mignotte_vector,
    rational_l2_squared,
    sf_best,
    sf_btw,
    sf_mignotte,
    sf_mignotte_refined,
)
from factor_bounds.exceptions import DomainError
from factor_bounds.polycore import IntPoly, l2_norm_squared
from factor_bounds.settings import BoundSettings

# Printed vectors, x^4 down to x^0, of the exact methods
PRINTED = {
    "favours-binomial": {
        "beauzamy": (275, 551, 675, 551, 275),
        "knuth_cohen": (1, 366, 1093, 369, 2),
    },
    "favours-mignotte": {
        "beauzamy": (180, 361, 443, 361, 180),
        "knuth_cohen": (2, 150, 440, 174, 10),
    },
    "favours-knuth-cohen": {
        "beauzamy": (189, 378, 463, 378, 189),
        "knuth_cohen": (2, 86, 248, 155, 25),
    },
    "favours-beauzamy": {
        "beauzamy": (197, 394, 482, 394, 197),
        "knuth_cohen": (3, 270, 793, 270, 3),
    },
    "combined-is-best": {
        "beauzamy": (118, 236, 290, 236, 118),
        "knuth_cohen": (2, 81, 231, 90, 5),
    },
}

# Printed vectors of the methods that go through root and Mahler estimates
PRINTED_ESTIMATED = {
    "favours-binomial": {
        "binomial": (1, 15, 88, 84, 2),
        "mignotte": (196, 787, 1181, 787, 196),
    },
    "favours-mignotte": {
        "binomial": (2, 48, 439, 129, 10),
        "mignotte": (33, 133, 200, 133, 33),
    },
    "favours-knuth-cohen": {
        "binomial": (2, 70, 628, 204, 25),
        "mignotte": (74, 298, 447, 298, 74),
    },
    "favours-beauzamy": {
        "binomial": (3, 83, 880, 83, 3),
        "mignotte": (258, 1035, 1553, 1035, 258),
    },
    "combined-is-best": {
        "binomial": (2, 22, 95, 178, 5),
        "mignotte": (63, 255, 382, 255, 63),
    },
}

SINGLE_FACTOR = {
    "mignotte-beats-btw": ([2, 5, 7, 6, 3], [3, 6, 7, 5, 2]),
    "btw-beats-mignotte": ([1, -4, 5, 4, 1], [1, 4, 5, -4, 1]),
    "high-degree-degree-aware-wins": (
        [1, 1, 1, 1, 1, 1, 1, 2, 4, 4, 5],
        [1, 1, 2, 2, 3, 4, 4, 4, 5, 5, 5],
    ),
    "high-degree-single-factor-wins": (
        [1, 5, -5, -3, 5, -5, -2, -4, -5, 1, 3],
        [1, 1, 0, -3, -1, 5, 1, -4, 5, 0, -1],
    ),
}


def single_factor_product(name: str) -> IntPoly:
    first, second = SINGLE_FACTOR[name]
    return IntPoly.from_desc(first) * IntPoly.from_desc(second)


class TestBoundModels:
    """Tests for the bound vector and report models."""

    def test_vector_model_validation(self):
        """Test length, sign and overall checks on a bound vector."""
        with pytest.raises(ValidationError, match="needs 3 entries"):
            BoundVector(delta=2, entries=(1, 2), overall=2, method="binomial")
        with pytest.raises(ValidationError, match="nonnegative"):
            BoundVector(delta=1, entries=(1, -2), overall=1, method="binomial")
        with pytest.raises(ValidationError, match="largest entry"):
            BoundVector(delta=1, entries=(1, 2), overall=1, method="binomial")

    def test_vector_build(self):
        """Test that build derives delta and overall."""
        vector = BoundVector.build("mignotte", [4, 6, 4])
        assert vector.delta == 2
        assert vector.overall == 6
        assert vector.entries_desc == (4, 6, 4)
        assert vector.to_json() == {"entries_desc": ["4", "6", "4"], "overall": "6"}

    def test_report_model_validation(self):
        """Test that a combined vector must be the column minimum."""
        vectors = {
            "binomial": BoundVector.build("binomial", [1, 5]),
            "mignotte": BoundVector.build("mignotte", [3, 2]),
        }
        with pytest.raises(ValidationError, match="column"):
            BoundReport(delta=1, vectors=vectors, combined=BoundVector.build("combined", [1, 5]))
        report = BoundReport(
            delta=1, vectors=vectors, combined=BoundVector.build("combined", [1, 2])
        )
        assert report.to_json()["combined"]["overall"] == "2"

    def test_settings_model_validation(self):
        """Test the Graeffe and threading settings."""
        with pytest.raises(ValidationError, match="multiple of 8"):
            BoundSettings(cap_bits=100)
        with pytest.raises(ValidationError):
            BoundSettings(cap_bits=32)
        with pytest.raises(ValidationError):
            BoundSettings(graeffe_depth=33)
        with pytest.raises(ValidationError):
            BoundSettings(workers=0)
        assert BoundSettings().graeffe_depth == 10


class TestDegreeAwareTables:
    """Tests against the printed degree-aware comparison tables."""

    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_exact_methods_match_printed(self, name, table_cases):
        """Test that the integer-exact methods reproduce the printed rows."""
        f = table_cases[name].product
        assert beauzamy_vector(f, 4).entries_desc == PRINTED[name]["beauzamy"]
        assert knuth_cohen_vector(f, 4).entries_desc == PRINTED[name]["knuth_cohen"]

    @pytest.mark.parametrize("name", sorted(PRINTED_ESTIMATED))
    def test_estimated_methods_near_printed(self, name, table_cases):
        """Test that certified binomial and Mignotte rows stay near the printed ones."""
        f = table_cases[name].product
        for method, vector in (
            ("binomial", binomial_vector(f, 4)),
            ("mignotte", mignotte_vector(f, 4)),
        ):
            printed = PRINTED_ESTIMATED[name][method]
            for ours, theirs in zip(vector.entries_desc, printed):
                assert ours <= theirs * 1.15 + 1, (method, vector.entries_desc, printed)

    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_every_factor_respects_every_method(self, name, table_cases, test_helpers):
        """Test both degree-4 factors against all four vectors and the minimum."""
        case = table_cases[name]
        report = combined_report(case.product, 4)
        assert list(report.vectors) == list(METHODS)
        for factor in case.factors:
            for vector in (*report.vectors.values(), report.combined):
                test_helpers.assert_bounds_factor(vector.entries, factor)

    def test_combined_is_column_minimum(self, table_cases):
        """Test the combined row of the table where no single method wins."""
        report = combined_report(table_cases["combined-is-best"].product, 4)
        for i, entry in enumerate(report.combined.entries):
            assert entry == min(v.entries[i] for v in report.vectors.values())
        assert report.combined.overall == 95

    def test_audit_fields(self, table_cases):
        """Test that the report records the estimates it used."""
        report = combined_report(table_cases["favours-binomial"].product, 4)
        assert set(report.audit) == {
            "rho",
            "rho_bar",
            "mahler",
            "l2_norm",
            "bombieri_norm",
            "graeffe_depth",
            "slack",
            "knuth_cohen_i0_rule",
        }
        assert report.audit["graeffe_depth"] == "10"

    def test_threaded_report_matches(self, table_cases):
        """Test that worker threads do not change the report."""
        f = table_cases["favours-mignotte"].product
        serial = combined_report(f, 4)
        threaded = combined_report(f, 4, settings=BoundSettings(workers=4))
        assert threaded.to_json() == serial.to_json()

    def test_method_subset(self, table_cases):
        """Test a report restricted to two methods."""
        f = table_cases["favours-beauzamy"].product
        report = combined_report(f, 4, methods=["knuth_cohen", "beauzamy"])
        assert list(report.vectors) == ["beauzamy", "knuth_cohen"]
        assert report.combined.entries_desc == (3, 270, 482, 270, 3)

    def test_random_factorizations_respect_combined(self, random_factorization, test_helpers):
        """Test the combined bound on random factors of mixed degrees."""
        for degrees in [(2, 3), (3, 3), (1, 4, 2)]:
            case = random_factorization(degrees)
            if case.product.tc == 0:
                continue
            for factor in case.factors:
                report = combined_report(case.product, factor.degree)
                test_helpers.assert_bounds_factor(report.combined.entries, factor)

    def test_slow_validity_sweep(self, random_factorization, test_helpers):
        """Test every bound on 1000 random factor pairs."""
        rng = random.Random(1000)
        for _ in range(1000):
            case = random_factorization((rng.randint(1, 12), rng.randint(1, 12)), cap=50)
            f = case.product
            for factor in case.factors:
                report = combined_report(f, factor.degree)
                for vector in report.vectors.values():
                    test_helpers.assert_bounds_factor(vector.entries, factor)
                    assert all(
                        c <= v for c, v in zip(report.combined.entries, vector.entries)
                    )
            lowest = min(case.heights)
            assert sf_mignotte_refined(f).value >= lowest
            assert sf_mignotte(f).value >= lowest
            if f.degree >= 3:
                assert sf_btw(f).value >= lowest

    @pytest.mark.parametrize(
        "coeffs_desc, delta, message",
        [
            ([5], 1, "degree at least 1"),
            ([1, 2, 0], 1, "trailing coefficient"),
            ([1, 2, 1], 0, "outside"),
            ([1, 2, 1], 3, "outside"),
        ],
    )
    def test_domain_errors(self, coeffs_desc, delta, message):
        """Test the preconditions of degree-aware bounds."""
        with pytest.raises(DomainError, match=message):
            combined_report(IntPoly.from_desc(coeffs_desc), delta)

    def test_unknown_methods(self):
        """Test that selecting no known method raises DomainError."""
        with pytest.raises(DomainError, match="no known method"):
            combined_report(IntPoly.from_desc([1, 2, 1]), 1, methods=["newton"])


class TestRefinedBinomial:
    """Tests for the binomial bound from individual root bounds."""

    def test_product_of_linear_terms(self):
        """Test lc * (x + 2)(x + 1) floored."""
        vector = binomial_vector_refined([2, 1], lc_abs=1, delta=2)
        assert vector.entries == (2, 3, 1)
        assert vector.method == "binomial_refined"

    def test_uses_largest_bounds(self):
        """Test that only the first delta bounds enter the product."""
        vector = binomial_vector_refined([Fraction(5, 2), 2, 1], lc_abs=2, delta=1)
        assert vector.entries == (5, 2)

    def test_domain_errors(self):
        """Test unsorted, short and degenerate input."""
        with pytest.raises(DomainError, match="descending"):
            binomial_vector_refined([1, 2], lc_abs=1, delta=2)
        with pytest.raises(DomainError, match="at least 2"):
            binomial_vector_refined([3], lc_abs=1, delta=2)
        with pytest.raises(DomainError, match="positive"):
            binomial_vector_refined([3], lc_abs=1, delta=0)


class TestSingleFactor:
    """Tests for bounds on the height of some factor."""

    @pytest.mark.parametrize(
        "name, expected",
        [
            ("mignotte-beats-btw", 47),
            ("btw-beats-mignotte", 21),
            ("high-degree-degree-aware-wins", 1920),
            ("high-degree-single-factor-wins", 713),
        ],
    )
    def test_btw_matches_printed(self, name, expected):
        """Test the Bombieri-norm bound against the printed values."""
        bound = sf_btw(single_factor_product(name))
        assert bound.value == expected
        assert bound.method == "btw"

    def test_mignotte_variants(self):
        """Test the plain and refined Mahler-measure bounds."""
        f = single_factor_product("mignotte-beats-btw")
        assert 48 <= sf_mignotte(f).value <= 49
        assert sf_mignotte_refined(f).value == 20
        g = single_factor_product("btw-beats-mignotte")
        assert 52 <= sf_mignotte_refined(g).value <= 53

    def test_best_is_btw(self):
        """Test a product where the Bombieri-norm bound wins."""
        f = single_factor_product("high-degree-single-factor-wins")
        best = sf_best(f)
        assert best.method == "btw"
        assert best.value == 713
        assert knuth_cohen_vector(f, 10).overall == 16339
        assert {"mignotte_l1_sqrt", "mignotte_refined", "btw", "degree_aware_at_half"} <= set(
            best.inputs
        )

    def test_best_is_degree_aware(self):
        """Test a product where the degree-aware bound at d/2 wins."""
        f = single_factor_product("high-degree-degree-aware-wins")
        best = sf_best(f)
        assert best.method == "degree_aware_at_half"
        assert best.value == combined_report(f, 10).combined.overall
        assert best.value <= 757

    def test_low_degree_factor(self, test_helpers):
        """Test degree information pointing at a quadratic factor."""
        g = test_helpers.poly(1, 5, 9)
        h = test_helpers.poly(
            1, 45, 981, 13740, 138366, 1062810, 6448386, 31582080, 126530811,
            417697775, 1138777300, 2558148480, 4700873394, 6973096410, 8170373934,
            7301999340, 4692092589, 1937102445, 387420489,
        )  # fmt: skip
        f = g * h
        best = sf_best(f, degree_info=[2])
        assert best.method == "degree_aware_at_half"
        assert 9 <= best.value <= 15
        assert sf_mignotte_refined(f).value > 20_000_000

    def test_degree_too_small(self):
        """Test the minimum degrees of the single-factor bounds."""
        with pytest.raises(DomainError):
            sf_mignotte(IntPoly.from_desc([1, 1]))
        with pytest.raises(DomainError, match="at least 3"):
            sf_btw(IntPoly.from_desc([1, 2, 1]))


class TestMinimalMultiple:
    """Tests for the l2-minimal monic rational multiple."""

    def test_linear_case(self):
        """Test (x + 1)(x + c), minimized at c = -1/2."""
        result = min_l2_multiple(IntPoly.from_desc([1, 1]), 1)
        assert result.cofactor == (Fraction(-1, 2), Fraction(1))
        assert result.cofactor_desc == (Fraction(1), Fraction(-1, 2))
        assert result.l2_squared == Fraction(3, 2)
        assert result.l2.value >= 1.5**0.5

    def test_beats_monomial_cofactor(self, table_cases):
        """Test that the optimum is no worse than multiplying by x**dhat."""
        f = table_cases["favours-knuth-cohen"].product
        for dhat in (1, 3, 6):
            result = min_l2_multiple(f, dhat)
            assert result.cofactor[-1] == 1
            assert len(result.cofactor) == dhat + 1
            assert result.l2_squared == rational_l2_squared(f, result.cofactor)
            assert result.l2_squared <= l2_norm_squared(f)

    def test_perturbations_increase_norm(self):
        """Test that moving any free cofactor coefficient away from the optimum costs norm."""
        rng = random.Random(2718)
        for _ in range(100):
            degree = rng.randint(1, 6)
            coeffs = [rng.randint(-9, 9) for _ in range(degree)]
            coeffs.append(rng.choice([c for c in range(-9, 10) if c]))
            f = IntPoly(coeffs)
            result = min_l2_multiple(f, rng.randint(1, 5))
            for j, c in enumerate(result.cofactor[:-1]):
                epsilon = max(abs(c), Fraction(1)) * Fraction(1, 10**6)
                for step in (epsilon, -epsilon):
                    moved = list(result.cofactor)
                    moved[j] += step
                    assert rational_l2_squared(f, moved) > result.l2_squared

    def test_domain_errors(self):
        """Test the zero polynomial and a nonpositive cofactor degree."""
        with pytest.raises(DomainError):
            min_l2_multiple(IntPoly(), 2)
        with pytest.raises(DomainError, match="positive"):
            min_l2_multiple(IntPoly.from_desc([1, 1]), 0)
