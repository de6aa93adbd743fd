from fractions import Fraction

import pytest

from core.exceptions import ValidationError
from core.surd import ExactSurd, rational_sqrt


def test_rational_sqrt_perfect_squares():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(1, 36)) == Fraction(1, 6)
    assert rational_sqrt(Fraction(1, 6)) is None
    assert rational_sqrt(Fraction(-1, 4)) is None


def test_root_squares_to_radicand():
    r = ExactSurd.root(Fraction(2))
    assert r * r == 2
    assert (r * r).is_rational


def test_sign_is_exact_near_cancellation():
    d = Fraction(1, 6)
    root = ExactSurd.root(d)
    # sqrt(1/6) is just above 0.408248
    assert (root - Fraction(408248, 10**6)).sign() == 1
    assert (root - Fraction(408249, 10**6)).sign() == -1
    assert (ExactSurd(Fraction(1, 6), Fraction(-1), d * d)).sign() == 0


def test_ordering_and_equality():
    d = Fraction(1, 12)
    half_root = ExactSurd.root(d, Fraction(1, 2))
    assert half_root < ExactSurd.root(d)
    assert half_root > 0
    assert ExactSurd.rational(Fraction(1, 3), d) == Fraction(1, 3)
    assert hash(ExactSurd.rational(Fraction(1, 3), d)) == hash(Fraction(1, 3))


def test_division_roundtrip():
    d = Fraction(1, 6)
    x = ExactSurd(Fraction(1, 2), Fraction(3), d)
    y = ExactSurd(Fraction(2), Fraction(-1), d)
    assert (x / y) * y == x


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ExactSurd.root(Fraction(1, 4)) / ExactSurd(Fraction(0), Fraction(0), Fraction(1, 4))


def test_rational_operand_adopts_other_radicand():
    rational = ExactSurd.rational(Fraction(1, 2), Fraction(2))
    root3 = ExactSurd.root(Fraction(3))
    product = rational * root3
    assert product.d == 3
    assert product.square() == Fraction(3, 4)


def test_mixing_radicands_is_refused():
    with pytest.raises(ValidationError):
        ExactSurd.root(Fraction(2)) + ExactSurd.root(Fraction(3))


def test_exact_value_and_to_fraction():
    assert ExactSurd.root(Fraction(1, 4), 3).exact_value() == Fraction(3, 2)
    assert ExactSurd.root(Fraction(1, 6)).exact_value() is None
    with pytest.raises(ValidationError):
        ExactSurd.root(Fraction(1, 6)).to_fraction()


def test_string_form():
    s = ExactSurd(Fraction(1, 4), Fraction(-1, 2), Fraction(1, 6))
    assert str(s) == "1/4 + -1/2*sqrt(p1p2)"


def test_radicand_must_be_positive():
    with pytest.raises(ValidationError):
        ExactSurd(Fraction(1), Fraction(1), Fraction(0))
