from fractions import Fraction

import pytest

from core.exceptions import PreconditionError, SizeLimitError, ValidationError
from core.measure import ProbabilityVector, SubsetFamily, canonical_star, is_cross_intersecting, threshold_family
from core.oracle import (
    DEDEKIND,
    EXAMPLE_C1,
    enumerate_up_sets,
    max_cross_product,
    max_cross_product_all_families,
    probe_conjecture_weak,
    probe_single_family_conjecture,
    probe_stability,
    scan_cross_products,
    single_family_counterexample_value,
    spot_check_non_monotone,
    verify_example_pairs,
)
from testkit.fixtures import load_fixture


def pv(text):
    return ProbabilityVector.parse(text)


# ---- catalog ------------------------------------------------------------------

@pytest.mark.parametrize("n", range(5))
def test_up_set_counts(n):
    assert len(enumerate_up_sets(n)) == DEDEKIND[n]


def test_filter_and_recursion_agree():
    filtered = {U.members for U in enumerate_up_sets(4, method="filter")}
    recursive = {U.members for U in enumerate_up_sets(4, method="recursive")}
    assert filtered == recursive


def test_recursive_count_at_five():
    assert len(enumerate_up_sets(5)) == 7581


def test_enumeration_caps():
    with pytest.raises(SizeLimitError):
        enumerate_up_sets(6)
    with pytest.raises(SizeLimitError):
        enumerate_up_sets(7, allow_large=True)
    with pytest.raises(SizeLimitError):
        enumerate_up_sets(5, method="filter")
    with pytest.raises(ValidationError):
        enumerate_up_sets(2, method="bogus")


# ---- maximum over pairs -----------------------------------------------------------

def test_unique_star_maximum(decreasing3):
    report = max_cross_product(decreasing3, decreasing3)
    assert report.max_product == Fraction(1, 4)
    assert report.max_equals_bound
    assert report.pairs_scanned == DEDEKIND[3]
    assert len(report.extremal_pairs) == 1
    assert report.extremal_pairs[0].family1 == canonical_star(3, 1).to_literal()
    assert report.stars_only
    assert report.hypotheses.uniqueness_expected
    assert report.verified


def test_exceptional_maximum_has_non_star_pairs(half3):
    report = max_cross_product(half3, half3)
    assert report.max_product == Fraction(1, 4)
    assert not report.stars_only
    assert not report.hypotheses.uniqueness_expected
    threshold = threshold_family(3, [1, 2, 3], 2).to_literal()
    assert any(pair.family1 == threshold and pair.family2 == threshold for pair in report.extremal_pairs)
    assert len(report.extremal_pairs) >= 4
    assert report.verified


def test_weak_only_maximum():
    report = max_cross_product(pv("1/2,1/3"), pv("1/3,1/2"))
    assert report.max_product == Fraction(1, 6)
    assert report.witness_weak == [1, 2]
    assert report.stars_only
    assert not report.hypotheses.main_theorem
    assert report.hypotheses.weak_assumption


def test_third_regime_maximum():
    report = max_cross_product(pv("1/3,1/4,1/5"), pv("1/3,1/5,1/4"))
    assert report.max_product == Fraction(1, 9)
    assert report.hypotheses.third_theorem
    assert report.stars_only
    assert report.verified


def test_scan_is_deterministic_across_jobs():
    p = pv("1/2,1/3,1/4,1/5")
    serial = scan_cross_products(p, p, jobs=1)
    parallel = scan_cross_products(p, p, jobs=2)
    assert serial == parallel


@pytest.mark.parametrize("p1, p2", [("1/2,1/3", "1/2,1/4"), ("1/3,1/2", "1/2,1/3"), ("3/5,1/3", "2/5,1/2")])
def test_all_families_agree_with_up_sets(p1, p2):
    a, b = pv(p1), pv(p2)
    assert max_cross_product_all_families(a, b).max_product == max_cross_product(a, b).max_product


def test_all_families_at_three(half3):
    result = max_cross_product_all_families(half3, half3)
    assert result.max_product == Fraction(1, 4)
    assert result.pairs_scanned == 256 * 256


def test_all_families_cap():
    p = ProbabilityVector.uniform(4, Fraction(1, 2))
    with pytest.raises(SizeLimitError):
        max_cross_product_all_families(p, p)


def test_spot_check_finds_nothing_above_the_maximum(decreasing3):
    spot = spot_check_non_monotone(decreasing3, decreasing3, Fraction(1, 4), samples=300, seed=3)
    assert spot.samples == 300
    assert spot.violations == 0
    assert spot.closure_failures == 0


# ---- literal examples -------------------------------------------------------------

def test_example_pairs():
    report = verify_example_pairs()
    assert [c.name for c in report.examples] == ["ex-n3", "ex-n3-in-4", "ex-n4"]
    assert report.all_passed
    ex4 = report.examples[-1]
    assert not ex4.intersecting1 and not ex4.intersecting2
    assert ex4.product_half == Fraction(1, 4)
    assert ex4.product_third == Fraction(49, 729)
    assert ex4.in_oracle


def test_example_fixture_matches_literal():
    assert load_fixture("ex-n4-C1", 4) == SubsetFamily.from_sets(4, EXAMPLE_C1)


# ---- probes -------------------------------------------------------------------------

def test_weak_probe_consistent():
    report = probe_conjecture_weak(pv("1/2,2/5"), pv("2/5,1/2"))
    assert report.witness_weak == [1, 2]
    assert report.max_product == Fraction(1, 5)
    assert report.conjecture_consistent
    assert report.counterexample == []


def test_weak_probe_needs_weak_assumption():
    with pytest.raises(PreconditionError):
        probe_conjecture_weak(pv("1/2,1/2"), pv("1/3,1/2"))


def test_stability_probe():
    p = ProbabilityVector.uniform(3, Fraction(1, 3))
    report = probe_stability(p, p)
    assert report.eps_grid == sorted(report.eps_grid)
    assert len(report.worst) == len(report.eps_grid)
    assert len(report.points) > len(report.worst)
    for point in report.points:
        assert (1 - point.eps) * Fraction(1, 9) < point.product <= Fraction(1, 9)
        assert point.distance >= 0
        U1 = SubsetFamily.from_literal(point.family1, 3)
        U2 = SubsetFamily.from_literal(point.family2, 3)
        assert is_cross_intersecting(U1, U2)
    distances = [point.distance for point in report.worst]
    assert distances == sorted(distances)
    for top in report.worst:
        at_eps = [point for point in report.points if point.eps == top.eps]
        assert top.distance == max(point.distance for point in at_eps)
    assert report.empirical_c == max(float(p.distance) / float(p.eps) ** 0.5 for p in report.worst)


def test_stability_probe_preconditions():
    with pytest.raises(PreconditionError):
        probe_stability(pv("1/2,1/3"), pv("1/3,1/3"))
    big = ProbabilityVector.uniform(5, Fraction(1, 3))
    with pytest.raises(SizeLimitError):
        probe_stability(big, big)
    small = ProbabilityVector.uniform(2, Fraction(1, 3))
    with pytest.raises(PreconditionError):
        probe_stability(small, small, [Fraction(3, 2)])


def test_single_family_counterexample():
    p = ProbabilityVector.uniform(3, Fraction(3, 5))
    report = probe_single_family_conjecture(p)
    assert report.counterexample_value == Fraction(81, 125)
    assert report.max_measure == Fraction(81, 125)
    assert report.max_exceeds_first
    assert threshold_family(3, [1, 2, 3], 2).to_literal() in report.extremal_families


def test_single_family_within_hypotheses(decreasing3):
    report = probe_single_family_conjecture(decreasing3)
    assert report.hypotheses_hold
    assert report.max_measure == Fraction(1, 2)
    assert report.extremal_families == [canonical_star(3, 1).to_literal()]
    assert report.counterexample_value is None


def test_single_family_at_half_has_many_maximizers(half3):
    report = probe_single_family_conjecture(half3)
    assert report.max_measure == Fraction(1, 2)
    assert len(report.extremal_families) == 4


def test_counterexample_value_needs_three_equal_large_coordinates():
    assert single_family_counterexample_value(pv("3/5,3/5")) is None
    assert single_family_counterexample_value(pv("3/5,3/5,1/2")) is None
    assert single_family_counterexample_value(pv("1/2,1/2,1/2")) is None
