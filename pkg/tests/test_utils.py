import json
from fractions import Fraction

import pytest

from core.exceptions import ValidationError
from utils import dump_json, elements_of, load_json, mask_of, parse_rational, parse_rational_list, write_json


def test_parse_rational_forms():
    assert parse_rational("3/8") == Fraction(3, 8)
    assert parse_rational(" -2 / 4 ") == Fraction(-1, 2)
    assert parse_rational("5") == 5


@pytest.mark.parametrize("text", ["0.5", "1e-3", "1/0", "a/b", ""])
def test_parse_rational_refuses_inexact_or_malformed(text):
    with pytest.raises(ValidationError):
        parse_rational(text)


def test_parse_rational_list():
    assert parse_rational_list("1/2,1/3") == [Fraction(1, 2), Fraction(1, 3)]
    assert parse_rational_list(["1/4"]) == [Fraction(1, 4)]
    with pytest.raises(ValidationError):
        parse_rational_list(",")


def test_masks_are_one_based():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == [1, 3]
    assert elements_of(0) == []
    with pytest.raises(ValidationError):
        mask_of([0])


def test_write_json_creates_parent(tmp_path):
    target = tmp_path / "nested" / "out.json"
    text = write_json({"bound": "1/4"}, str(target))
    assert target.read_text(encoding="utf-8") == text
    assert load_json(str(target)) == {"bound": "1/4"}


def test_write_json_without_path_only_returns():
    assert json.loads(write_json([1, 2])) == [1, 2]
    assert dump_json({}).endswith("\n")


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_json(str(bad))
    with pytest.raises(ValidationError):
        load_json(str(tmp_path / "missing.json"))
