import random
from fractions import Fraction

import pytest

from core.exceptions import DimensionMismatchError, ValidationError
from core.measure import (
    ProbabilityVector,
    SubsetFamily,
    atom_weights,
    blocker,
    box_product,
    canonical_star,
    complements,
    cross_intersection_witness,
    down_closure,
    is_co_complex,
    is_cross_intersecting,
    is_intersecting,
    maximal_partner,
    product_measure,
    restrict,
    threshold_family,
    up_closure,
)

from conftest import family


@pytest.mark.parametrize("entries", [(0,), (1,), (Fraction(1, 2), Fraction(3, 2)), ()])
def test_probability_vector_rejects_out_of_range(entries):
    with pytest.raises(ValidationError):
        ProbabilityVector(entries)


def test_probability_vector_accessors():
    pv = ProbabilityVector.parse("1/2,1/3,1/4")
    assert pv.n == 3
    assert pv.first == Fraction(1, 2)
    assert pv[3] == Fraction(1, 4)
    assert pv.restricted(0b101).entries == (Fraction(1, 2), Fraction(1, 4))
    assert pv.with_coordinate(1, Fraction(3, 5)).first == Fraction(3, 5)
    with pytest.raises(IndexError):
        pv[0]


def test_atom_weights_sum_to_one(decreasing3):
    weights = atom_weights(decreasing3)
    assert len(weights) == 8
    assert sum(weights) == 1
    # {1, 3}
    assert weights[0b101] == Fraction(1, 2) * Fraction(2, 3) * Fraction(1, 4)


def test_star_measure_is_its_coordinate(decreasing3):
    for ell in range(1, 4):
        assert product_measure(decreasing3, canonical_star(3, ell)) == decreasing3[ell]
    assert product_measure(decreasing3, SubsetFamily.full(3)) == 1
    assert product_measure(decreasing3, SubsetFamily.empty(3)) == 0


def test_threshold_measures(half3):
    threshold = threshold_family(3, [1, 2, 3], 2)
    assert product_measure(half3, threshold) == Fraction(1, 2)
    assert product_measure(ProbabilityVector.uniform(3, Fraction(1, 3)), threshold) == Fraction(7, 27)


def test_measure_dimension_mismatch(half3):
    with pytest.raises(DimensionMismatchError):
        product_measure(half3, canonical_star(2, 1))


def test_family_literal_roundtrip_order():
    assert canonical_star(2, 1).to_literal() == [[1], [1, 2]]
    F = SubsetFamily.from_literal([[2, 3], [1]], 3)
    assert F.to_literal() == [[1], [2, 3]]
    assert len(F) == 2
    assert 0b110 in F


def test_family_literal_validation():
    with pytest.raises(ValidationError):
        SubsetFamily.from_literal([[4]], 3)
    with pytest.raises(ValidationError):
        SubsetFamily.from_literal([1, 2], 3)
    with pytest.raises(ValidationError):
        SubsetFamily(1, 0b111)


def test_closures():
    assert up_closure(family(2, [1])) == canonical_star(2, 1)
    assert down_closure(family(2, [1, 2])) == SubsetFamily.full(2)
    assert up_closure(SubsetFamily.empty(3)) == SubsetFamily.empty(3)


def test_complements_and_blocker():
    assert complements(family(2, [1])) == family(2, [2])
    assert complements(SubsetFamily.empty(2)) == SubsetFamily.empty(2)
    # sets disjoint from {1}: those avoiding 1
    assert blocker(family(2, [1])) == family(2, [], [2])


def test_maximal_partner_of_self_dual_families():
    threshold = threshold_family(3, [1, 2, 3], 2)
    assert maximal_partner(threshold) == threshold
    assert maximal_partner(canonical_star(4, 2)) == canonical_star(4, 2)
    assert maximal_partner(SubsetFamily.empty(2)) == SubsetFamily.full(2)


def test_cross_intersection_predicates():
    star1, star2 = canonical_star(2, 1), canonical_star(2, 2)
    assert not is_cross_intersecting(star1, star2)
    assert cross_intersection_witness(star1, star2) == (0b01, 0b10)
    assert cross_intersection_witness(star1, star1) is None
    assert is_intersecting(threshold_family(3, [1, 2, 3], 2))
    assert not is_intersecting(threshold_family(4, [1, 2, 3, 4], 2))
    with pytest.raises(DimensionMismatchError):
        is_cross_intersecting(star1, canonical_star(3, 1))


def test_co_complex_predicate():
    assert is_co_complex(canonical_star(3, 2))
    assert is_co_complex(SubsetFamily.empty(3))
    assert not is_co_complex(family(2, [1]))


def test_restrict_and_box_product():
    assert restrict(canonical_star(3, 1), 0b011) == canonical_star(2, 1)
    assert box_product(family(1, [1]), 0b010, 3) == canonical_star(3, 2)
    kernel = threshold_family(3, [1, 2, 3], 2)
    lifted = box_product(kernel, 0b111, 4)
    assert len(lifted) == 8
    assert restrict(lifted, 0b111) == kernel
    with pytest.raises(DimensionMismatchError):
        box_product(kernel, 0b011, 4)
    with pytest.raises(ValidationError):
        restrict(kernel, 0b1000)


def test_canonical_star_pivot_range():
    with pytest.raises(ValidationError):
        canonical_star(3, 0)
    with pytest.raises(ValidationError):
        canonical_star(3, 4)


def _random_pv(rng, n):
    return ProbabilityVector(tuple(Fraction(rng.randint(1, 11), 12) for _ in range(n)))


def _random_family(rng, n):
    return SubsetFamily(n, rng.getrandbits(1 << n))


def test_measure_is_monotone_and_complementary():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 5)
        pv = _random_pv(rng, n)
        U = _random_family(rng, n)
        V = U.union(_random_family(rng, n))
        assert U.issubset(V)
        assert product_measure(pv, U) <= product_measure(pv, V)
        assert product_measure(pv, U) + product_measure(pv, U.complement()) == 1


def test_up_closure_is_extensive_and_idempotent():
    rng = random.Random(4)
    for _ in range(200):
        U = _random_family(rng, rng.randint(1, 5))
        closed = up_closure(U)
        assert U.issubset(closed)
        assert up_closure(closed) == closed
        assert is_co_complex(closed)


def test_restrict_undoes_box_product():
    rng = random.Random(6)
    for _ in range(200):
        n = rng.randint(1, 5)
        w = rng.randrange(1, 1 << n)
        K = _random_family(rng, bin(w).count("1"))
        assert restrict(box_product(K, w, n), w) == K
