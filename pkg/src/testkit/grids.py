import random
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache
from typing import Iterator, Optional

from core.certificate import HALF, THIRD, normalize_sides
from core.exceptions import PreconditionError, ValidationError
from core.measure import ProbabilityVector, SubsetFamily, maximal_partner, up_closure
from core.oracle import enumerate_up_sets
from core.reductions import main_assumption_holds, main_theorem_hypotheses, weak_assumption_holds, witness_set

MAX_RANDOM_N = 8

MAIN_SMALL = "main-small"
MAIN_LARGE = "main-large"
THIRD_THEOREM = "third"
WEAK_ONLY = "weak-only"
EXCEPTIONAL = "exceptional"
REGIMES = (MAIN_SMALL, MAIN_LARGE, THIRD_THEOREM, WEAK_ONLY, EXCEPTIONAL)


def _exceptional(a: ProbabilityVector, b: ProbabilityVector) -> bool:
    return a.first == b.first == HALF and len(witness_set(a, b, "strong")) >= 3


def regime_holds(regime: str, pv1: ProbabilityVector, pv2: ProbabilityVector) -> bool:
    a, b, _ = normalize_sides(pv1, pv2)
    small = all(p <= THIRD for p in a.entries + b.entries)
    if regime == MAIN_SMALL:
        return main_theorem_hypotheses(a, b) and a.first <= HALF and not _exceptional(a, b)
    if regime == MAIN_LARGE:
        return main_theorem_hypotheses(a, b) and a.first > HALF and a.n >= 2
    if regime == THIRD_THEOREM:
        return weak_assumption_holds(a, b) and small
    if regime == WEAK_ONLY:
        return weak_assumption_holds(a, b) and not main_assumption_holds(a, b) and not small
    if regime == EXCEPTIONAL:
        return main_theorem_hypotheses(a, b) and _exceptional(a, b)
    raise ValidationError(f"unknown regime {regime!r}")


# Five-coordinate patterns; truncating to the first n coordinates keeps each regime.
_PATTERNS = {
    MAIN_SMALL: [
        ((F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 6)), (F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 6))),
        ((F(1, 3), F(1, 3), F(1, 4), F(1, 3), F(1, 5)), (F(1, 4), F(1, 4), F(1, 5), F(1, 4), F(1, 6))),
        ((F(1, 2), F(1, 3), F(1, 2), F(1, 4), F(1, 5)), (F(1, 3), F(1, 4), F(1, 3), F(1, 5), F(1, 6))),
        ((F(2, 5), F(1, 3), F(2, 5), F(1, 4), F(2, 5)), (F(1, 3), F(1, 3), F(1, 3), F(1, 4), F(1, 3))),
        ((F(1, 2), F(1, 2), F(1, 3), F(1, 4), F(1, 5)), (F(1, 4), F(1, 4), F(1, 6), F(1, 6), F(1, 12))),
    ],
    MAIN_LARGE: [
        ((F(3, 5), F(1, 3), F(1, 2), F(1, 4), F(1, 5)), (F(1, 2), F(1, 4), F(1, 2), F(1, 5), F(1, 6))),
        ((F(2, 3), F(1, 3), F(1, 3), F(1, 4), F(1, 4)), (F(2, 3), F(1, 3), F(1, 3), F(1, 4), F(1, 4))),
        ((F(3, 5), F(1, 3), F(1, 4), F(1, 5), F(1, 6)), (F(3, 5), F(1, 3), F(1, 4), F(1, 5), F(1, 6))),
        ((F(3, 4), F(1, 2), F(1, 3), F(1, 4), F(1, 5)), (F(1, 3), F(1, 4), F(1, 5), F(1, 6), F(1, 7))),
    ],
    THIRD_THEOREM: [
        ((F(1, 3), F(1, 4), F(1, 5), F(1, 6), F(1, 6)), (F(1, 3), F(1, 5), F(1, 4), F(1, 6), F(1, 6))),
        ((F(1, 4), F(1, 3), F(1, 4), F(1, 6), F(1, 5)), (F(1, 3), F(1, 4), F(1, 3), F(1, 5), F(1, 6))),
        ((F(1, 3),) * 5, (F(1, 3),) * 5),
        ((F(1, 6), F(1, 3), F(1, 4), F(1, 4), F(1, 5)), (F(1, 3), F(1, 6), F(1, 5), F(1, 6), F(1, 6))),
    ],
    WEAK_ONLY: [
        ((F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 6)), (F(1, 3), F(1, 2), F(1, 4), F(1, 5), F(1, 6))),
        ((F(1, 2), F(2, 5), F(1, 3), F(1, 4), F(1, 4)), (F(2, 5), F(1, 2), F(1, 3), F(1, 4), F(1, 4))),
    ],
    EXCEPTIONAL: [
        ((F(1, 2),) * 5, (F(1, 2),) * 5),
        ((F(1, 2), F(1, 2), F(1, 2), F(1, 3), F(1, 4)), (F(1, 2), F(1, 2), F(1, 2), F(1, 4), F(1, 3))),
    ],
}

_MIN_N = {MAIN_SMALL: 1, MAIN_LARGE: 2, THIRD_THEOREM: 1, WEAK_ONLY: 2, EXCEPTIONAL: 3}


@dataclass(frozen=True)
class GridEntry:
    regime: str
    pv1: ProbabilityVector
    pv2: ProbabilityVector

    @property
    def id(self) -> str:
        return f"{self.regime}:{','.join(self.pv1.to_strings())}|{','.join(self.pv2.to_strings())}"


@dataclass
class ParameterGrid:
    """(pv1, pv2) pairs tagged by regime; every tag is checked on construction."""

    entries: list[GridEntry] = field(default_factory=list)

    def __post_init__(self):
        for entry in self.entries:
            if not regime_holds(entry.regime, entry.pv1, entry.pv2):
                raise ValidationError(f"grid entry {entry.id} does not satisfy its regime")

    def __iter__(self) -> Iterator[GridEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def for_regime(self, regime: str) -> list[GridEntry]:
        return [e for e in self.entries if e.regime == regime]


def default_grid(n: int) -> ParameterGrid:
    if not 1 <= n <= 5:
        raise PreconditionError(f"grid patterns cover 1 <= n <= 5, got {n}")
    entries = []
    for regime in REGIMES:
        if n < _MIN_N[regime]:
            continue
        for p1, p2 in _PATTERNS[regime]:
            entries.append(GridEntry(regime, ProbabilityVector(p1[:n]), ProbabilityVector(p2[:n])))
    return ParameterGrid(entries)


# ------------------ random families --------------------------------------

MAX_CATALOG_N = 5


@lru_cache(maxsize=None)
def _up_sets(n: int) -> tuple:
    return enumerate_up_sets(n, method="recursive").families


def random_co_complex(n: int, rng: random.Random, generators: Optional[int] = None) -> SubsetFamily:
    """Uniform over all up-sets for n <= 5; above that, the up-closure of up to 2n random subsets."""
    if n <= MAX_CATALOG_N and generators is None:
        return rng.choice(_up_sets(n))
    count = rng.randint(0, 2 * n if generators is None else generators)
    return up_closure(SubsetFamily.from_masks(n, (rng.randrange(1 << n) for _ in range(count))))



def random_cross_pair(n: int, seed: int) -> tuple[SubsetFamily, SubsetFamily]:
    """Seeded cross-intersecting up-set pair, both sides non-empty."""
    if not 1 <= n <= MAX_RANDOM_N:
        raise PreconditionError(f"random pairs need 1 <= n <= {MAX_RANDOM_N}, got {n}")
    rng = random.Random(seed)
    nonempty = range(1, 1 << n)
    U1 = up_closure(SubsetFamily.from_masks(n, rng.sample(nonempty, rng.randint(1, min(len(nonempty), 2 * n)))))
    partner = list(maximal_partner(U1))
    U2 = up_closure(SubsetFamily.from_masks(n, rng.sample(partner, rng.randint(1, min(len(partner), 2 * n)))))
    return U1, U2
