import os

from core.exceptions import PreconditionError, ValidationError
from core.measure import SubsetFamily, box_product, canonical_star
from utils.utils import load_json

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
FIXTURE_NAMES = ("ex-n3", "ex-n4-C1", "ex-n4-C2", "single-counterexample", "star-1")


def fixture_path(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise ValidationError(f"unknown fixture {name!r}")
    return os.path.join(FIXTURE_DIR, f"{name}.json")


def load_fixture(name: str, n: int) -> SubsetFamily:
    """The fixture's family on [k], extended to [n] as K x 2^([n] minus [k])."""
    payload = load_json(fixture_path(name))
    k = payload["n"]
    if n < k:
        raise PreconditionError(f"fixture {name} lives on [{k}], cannot embed into [{n}]")
    kernel = SubsetFamily.from_literal(payload["family"], k)
    return box_product(kernel, (1 << k) - 1, n)


def example_families(n: int = 4) -> dict[str, SubsetFamily]:
    """Named example families over [n] (n >= 4), plus every star."""
    families = {name: load_fixture(name, n) for name in FIXTURE_NAMES}
    for ell in range(2, n + 1):
        families[f"star-{ell}"] = canonical_star(n, ell)
    return families
