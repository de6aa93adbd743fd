import json
from fractions import Fraction

import pytest

from core.measure import ProbabilityVector, SubsetFamily


@pytest.fixture
def half3():
    return ProbabilityVector.uniform(3, Fraction(1, 2))


@pytest.fixture
def decreasing3():
    """(1/2, 1/3, 1/4): main theorem hypotheses with w = {1}."""
    return ProbabilityVector.parse("1/2,1/3,1/4")


@pytest.fixture
def family_file(tmp_path):
    """Write a family literal to a JSON file and return its path."""

    def write(literal, name="family.json", n=None):
        payload = literal if n is None else {"n": n, "family": literal}
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write


def family(n, *sets):
    return SubsetFamily.from_sets(n, sets)
