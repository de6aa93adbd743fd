"""
Exhaustive ground truth for small n.

Only up-sets need to be scanned: for a fixed U1 the largest family
cross-intersecting it is maximal_partner(U1), which is itself an up-set,
and every atom has positive measure, so that partner is the unique best U2.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from core.certificate import HALF, THIRD, normalize_sides
from core.exceptions import (
    DimensionMismatchError,
    ExtremalError,
    PreconditionError,
    SizeLimitError,
    ValidationError,
)
from core.measure import (
    ProbabilityVector,
    SubsetFamily,
    blocker,
    canonical_star,
    is_co_complex,
    is_cross_intersecting,
    is_intersecting,
    maximal_partner,
    product_measure,
    threshold_family,
    up_closure,
)
from core.reductions import main_theorem_hypotheses, weak_assumption_holds, witness_set
from core.schema import (
    ExampleCheck,
    ExamplesReport,
    ExtremalReport,
    FamilyPair,
    RegimeFlags,
    SingleFamilyReport,
    StabilityPoint,
    StabilityReport,
    WeakProbeReport,
)
from utils.utils import elements_of

logger = logging.getLogger(__name__)

MAX_ORACLE_N = 5
MAX_ORACLE_N_OVERRIDE = 6
MAX_FILTER_N = 4
MAX_ALL_FAMILIES_N = 3
MAX_STABILITY_N = 4
DEFAULT_EPS_GRID = (Fraction(1, 100), Fraction(1, 20), Fraction(1, 10), Fraction(1, 5))

# Dedekind numbers M(0) .. M(6)
DEDEKIND = (2, 3, 6, 20, 168, 7581, 7828354)

# Exceptional pair on [4] at p = 1/2 where neither side is intersecting
EXAMPLE_C1 = [[1, 2], [3, 4], [1, 3], [1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 3, 4]]
EXAMPLE_C2 = [[1, 4], [2, 3], [1, 3], [1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 3, 4]]


# ------------------ up-set catalog ---------------------------------------

@dataclass(frozen=True)
class UpSetCatalog:
    n: int
    families: tuple

    def __len__(self) -> int:
        return len(self.families)

    def __iter__(self):
        return iter(self.families)

    @property
    def expected_size(self) -> int:
        return DEDEKIND[self.n]


@lru_cache(maxsize=None)
def _recursive_bits(n: int) -> tuple:
    """U = A + {x + {n} : x in B} is an up-set iff A, B are up-sets on [n-1] and A is inside B."""
    if n == 0:
        return (0, 1)
    lower = _recursive_bits(n - 1)
    shift = 1 << (n - 1)
    out = []
    for b in lower:
        for a in lower:
            if a & ~b == 0:
                out.append(a | (b << shift))
    return tuple(sorted(out))


def _filtered_bits(n: int) -> tuple:
    return tuple(bits for bits in range(1 << (1 << n)) if is_co_complex(SubsetFamily(n, bits)))


def _check_size(n: int, allow_large: bool, cap: int = MAX_ORACLE_N) -> None:
    limit = MAX_ORACLE_N_OVERRIDE if allow_large else cap
    if n < 0 or n > limit:
        hint = "" if allow_large or n > MAX_ORACLE_N_OVERRIDE else " (pass allow_large for n = 6)"
        raise SizeLimitError(f"n = {n} exceeds the oracle cap {limit}{hint}")


def enumerate_up_sets(n: int, allow_large: bool = False, method: str = "auto") -> UpSetCatalog:
    """All co-complexes over 2^[n]; filtering for n <= 4, recursion on pairs A inside B above."""
    _check_size(n, allow_large)
    if method == "auto":
        method = "filter" if n <= MAX_FILTER_N else "recursive"
    if method == "filter":
        if n > MAX_FILTER_N:
            raise SizeLimitError(f"filtering all 2^(2^{n}) families is infeasible")
        bits = _filtered_bits(n)
    elif method == "recursive":
        bits = _recursive_bits(n)
    else:
        raise ValidationError(f"unknown enumeration method {method!r}")
    if len(bits) != DEDEKIND[n]:
        raise ExtremalError(f"found {len(bits)} up-sets on {n} points, expected {DEDEKIND[n]}")
    logger.info(f"enumerated {len(bits)} up-sets for n={n} ({method})")
    return UpSetCatalog(n, tuple(SubsetFamily(n, b) for b in bits))


# ------------------ pair scan --------------------------------------------

def _best_partner_products(pv1: ProbabilityVector, pv2: ProbabilityVector, chunk: list[int]) -> list[tuple[int, int, Fraction]]:
    """(U1 bits, partner bits, product) for every U1 in the chunk."""
    out = []
    for bits in chunk:
        U1 = SubsetFamily(pv1.n, bits)
        partner = maximal_partner(U1)
        out.append((bits, partner.members, product_measure(pv1, U1) * product_measure(pv2, partner)))
    return out


def _chunks(items: list, jobs: int) -> list[list]:
    size = max(1, -(-len(items) // (4 * jobs)))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _scan(pv1: ProbabilityVector, pv2: ProbabilityVector, catalog: UpSetCatalog, jobs: int) -> list[tuple[int, int, Fraction]]:
    members = [U.members for U in catalog]
    if jobs <= 1 or len(members) < 64:
        return _best_partner_products(pv1, pv2, members)
    results = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_best_partner_products, pv1, pv2, chunk) for chunk in _chunks(members, jobs)]
        for future in futures:
            results.extend(future.result())
    return results


def _pair(pv1, pv2, U1: SubsetFamily, U2: SubsetFamily) -> FamilyPair:
    return FamilyPair(
        family1=U1.to_literal(),
        family2=U2.to_literal(),
        measure1=product_measure(pv1, U1),
        measure2=product_measure(pv2, U2),
    )


def _star_pairs(n: int, w: int) -> set[tuple[int, int]]:
    out = set()
    for ell in elements_of(w):
        star = canonical_star(n, ell).members
        out.add((star, star))
    return out


@dataclass(frozen=True)
class ScanResult:
    max_product: Fraction
    extremal: list[tuple[int, int]]
    scanned: int


def scan_cross_products(pv1: ProbabilityVector, pv2: ProbabilityVector, allow_large: bool = False, jobs: int = 1) -> ScanResult:
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    catalog = enumerate_up_sets(pv1.n, allow_large)
    results = _scan(pv1, pv2, catalog, jobs)
    best = max(product for _, _, product in results)
    extremal = sorted((a, b) for a, b, product in results if product == best)
    logger.info(f"scanned {len(results)} up-sets for n={pv1.n}: max {best}, {len(extremal)} extremal pairs")
    return ScanResult(best, extremal, len(results))


def regime_flags(pv1: ProbabilityVector, pv2: ProbabilityVector) -> RegimeFlags:
    a, b, _ = normalize_sides(pv1, pv2)
    main = main_theorem_hypotheses(a, b)
    weak = weak_assumption_holds(a, b)
    w = witness_set(a, b, "strong")
    exceptional = a.first == b.first == HALF and len(w) >= 3
    return RegimeFlags(
        main_theorem=main,
        uniqueness_expected=main and not exceptional,
        weak_assumption=weak,
        third_theorem=weak and all(p <= THIRD for p in a.entries + b.entries),
    )


def max_cross_product(pv1: ProbabilityVector, pv2: ProbabilityVector, allow_large: bool = False, jobs: int = 1) -> ExtremalReport:
    """Max of mu1(U1) mu2(U2) over cross-intersecting pairs, with every maximizing pair."""
    scan = scan_cross_products(pv1, pv2, allow_large, jobs)
    n = pv1.n
    bound = pv1.first * pv2.first
    flags = regime_flags(pv1, pv2)
    strong = witness_set(pv1, pv2, "strong")
    weak = witness_set(pv1, pv2, "weak")
    stars = _star_pairs(n, weak.mask if flags.weak_assumption else strong.mask)
    stars_only = set(scan.extremal) == stars

    verified = True
    if flags.main_theorem or flags.third_theorem:
        verified = scan.max_product == bound
        if flags.uniqueness_expected or flags.third_theorem:
            verified = verified and stars_only
    if not verified:
        logger.warning(f"oracle disagrees with the bound for p1={pv1.to_strings()} p2={pv2.to_strings()}")

    return ExtremalReport(
        n=n,
        pv1=list(pv1.entries),
        pv2=list(pv2.entries),
        up_set_count=scan.scanned,
        pairs_scanned=scan.scanned,
        max_product=scan.max_product,
        p1p2=bound,
        max_equals_bound=scan.max_product == bound,
        witness_strong=strong.elements,
        witness_weak=weak.elements,
        extremal_pairs=[_pair(pv1, pv2, SubsetFamily(n, a), SubsetFamily(n, b)) for a, b in scan.extremal],
        stars_only=stars_only,
        hypotheses=flags,
        verified=verified,
    )


@dataclass(frozen=True)
class AllFamiliesMax:
    max_product: Fraction
    pairs_scanned: int
    cross_intersecting_pairs: int


def max_cross_product_all_families(pv1: ProbabilityVector, pv2: ProbabilityVector) -> AllFamiliesMax:
    """Every pair of families, monotone or not (n <= 3)."""
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    n = pv1.n
    if n > MAX_ALL_FAMILIES_N:
        raise SizeLimitError(f"n = {n} exceeds the all-families cap {MAX_ALL_FAMILIES_N}")
    families = [SubsetFamily(n, bits) for bits in range(1 << (1 << n))]
    measures2 = [product_measure(pv2, U) for U in families]
    best = Fraction(0)
    crossing = 0
    for U1 in families:
        block = blocker(U1).members
        m1 = product_measure(pv1, U1)
        for U2, m2 in zip(families, measures2):
            if block & U2.members:
                continue
            crossing += 1
            if m1 * m2 > best:
                best = m1 * m2
    return AllFamiliesMax(best, len(families) ** 2, crossing)


@dataclass(frozen=True)
class SpotCheck:
    samples: int
    violations: int
    closure_failures: int


def spot_check_non_monotone(pv1: ProbabilityVector, pv2: ProbabilityVector, max_product: Fraction,
                            samples: int = 200, seed: int = 0) -> SpotCheck:
    """Random cross-intersecting pairs never beat the up-set maximum, and up-closure keeps them crossing."""
    n = pv1.n
    rng = random.Random(seed)
    violations = closures = 0
    for _ in range(samples):
        U1 = SubsetFamily(n, rng.getrandbits(1 << n))
        partner = maximal_partner(U1).members
        U2 = SubsetFamily(n, partner & rng.getrandbits(1 << n))
        if product_measure(pv1, U1) * product_measure(pv2, U2) > max_product:
            violations += 1
        if U1.members and U2.members and not is_cross_intersecting(up_closure(U1), up_closure(U2)):
            closures += 1
    return SpotCheck(samples, violations, closures)


# ------------------ literal examples -------------------------------------

def _example_check(name: str, U1: SubsetFamily, U2: SubsetFamily, oracle_pairs: Optional[set]) -> ExampleCheck:
    half = ProbabilityVector.uniform(U1.n, HALF)
    third = ProbabilityVector.uniform(U1.n, THIRD)
    crossing = is_cross_intersecting(U1, U2)
    product_half = product_measure(half, U1) * product_measure(half, U2)
    product_third = product_measure(third, U1) * product_measure(third, U2)
    inter1, inter2 = is_intersecting(U1), is_intersecting(U2)
    in_oracle = None if oracle_pairs is None else (U1.members, U2.members) in oracle_pairs
    passed = crossing and product_half == Fraction(1, 4) and product_third < Fraction(1, 9)
    if name.startswith("ex-n4"):
        passed = passed and not inter1 and not inter2
    passed = passed and in_oracle is not False
    return ExampleCheck(
        name=name,
        n=U1.n,
        cross_intersecting=crossing,
        intersecting1=inter1,
        intersecting2=inter2,
        product_half=product_half,
        product_third=product_third,
        in_oracle=in_oracle,
        passed=passed,
    )


def verify_example_pairs(with_oracle: bool = True) -> ExamplesReport:
    checks = []
    for n in (3, 4):
        U = threshold_family(n, [1, 2, 3], 2)
        pairs = None
        if with_oracle:
            pairs = set(scan_cross_products(ProbabilityVector.uniform(n, HALF), ProbabilityVector.uniform(n, HALF)).extremal)
        if n == 3:
            checks.append(_example_check("ex-n3", U, U, pairs))
        else:
            checks.append(_example_check("ex-n3-in-4", U, U, pairs))
            c1 = SubsetFamily.from_sets(4, EXAMPLE_C1)
            c2 = SubsetFamily.from_sets(4, EXAMPLE_C2)
            checks.append(_example_check("ex-n4", c1, c2, pairs))
    return ExamplesReport(examples=checks, all_passed=all(c.passed for c in checks))


# ------------------ probes -----------------------------------------------

def probe_conjecture_weak(pv1: ProbabilityVector, pv2: ProbabilityVector, allow_large: bool = False, jobs: int = 1) -> WeakProbeReport:
    """Brute-force check of the bound under p1 p2 = max_l p1^(l) p2^(l) alone."""
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    if not weak_assumption_holds(pv1, pv2):
        raise PreconditionError("weak assumption fails: p1 p2 is not the largest coordinate product")
    scan = scan_cross_products(pv1, pv2, allow_large, jobs)
    n = pv1.n
    bound = pv1.first * pv2.first
    w = witness_set(pv1, pv2, "weak")
    stars = _star_pairs(n, w.mask)
    stars_only = set(scan.extremal) == stars
    exceptional = pv1.first == pv2.first == HALF and len(w) >= 3
    consistent = scan.max_product == bound and (stars_only or exceptional)
    counterexample = []
    if not consistent:
        offending = [p for p in scan.extremal if p not in stars]
        counterexample = [_pair(pv1, pv2, SubsetFamily(n, a), SubsetFamily(n, b)) for a, b in offending]
        logger.warning(f"weak-assumption probe found {len(counterexample)} non-star extremal pairs")
    return WeakProbeReport(
        n=n,
        pv1=list(pv1.entries),
        pv2=list(pv2.entries),
        witness_weak=w.elements,
        max_product=scan.max_product,
        p1p2=bound,
        max_equals_bound=scan.max_product == bound,
        extremal_stars_only=stars_only,
        conjecture_consistent=consistent,
        counterexample=counterexample,
    )


def _star_distances(pv: ProbabilityVector, U: SubsetFamily) -> list[Fraction]:
    return [product_measure(pv, U.symmetric_difference(canonical_star(U.n, ell))) for ell in range(1, U.n + 1)]


def probe_stability(pv1: ProbabilityVector, pv2: ProbabilityVector, eps_grid: Iterable = DEFAULT_EPS_GRID) -> StabilityReport:
    """Distance to the nearest star pair for every pair with product > (1 - eps) p1 p2.

    `points` holds one entry per (eps, pair); `worst` keeps the farthest pair per eps
    and `empirical_c` is the largest distance / sqrt(eps) among those.
    """
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    if not (pv1.first < HALF and pv2.first < HALF):
        raise PreconditionError(f"stability probe needs p1, p2 < 1/2, got {pv1.first}, {pv2.first}")
    n = pv1.n
    if n > MAX_STABILITY_N:
        raise SizeLimitError(f"n = {n} exceeds the stability cap {MAX_STABILITY_N}")
    grid = sorted({Fraction(e) for e in eps_grid})
    if any(not 0 < e < 1 for e in grid):
        raise PreconditionError("eps values must lie in (0, 1)")
    catalog = enumerate_up_sets(n)
    bound = pv1.first * pv2.first
    floor = (1 - grid[-1]) * bound if grid else bound
    measures1 = [product_measure(pv1, U) for U in catalog]
    measures2 = [product_measure(pv2, U) for U in catalog]
    blockers = [blocker(U).members for U in catalog]

    candidates = []
    scanned = 0
    for i, U1 in enumerate(catalog):
        for j, U2 in enumerate(catalog):
            if blockers[i] & U2.members:
                continue
            scanned += 1
            product = measures1[i] * measures2[j]
            if product > floor:
                candidates.append((product, i, j))

    distance_cache: dict[tuple[int, int], list[Fraction]] = {}

    def distances(side: int, idx: int) -> list[Fraction]:
        key = (side, idx)
        if key not in distance_cache:
            distance_cache[key] = _star_distances(pv1 if side == 1 else pv2, catalog.families[idx])
        return distance_cache[key]

    points, worst = [], []
    for eps in grid:
        at_eps = []
        for product, i, j in candidates:
            if product <= (1 - eps) * bound:
                continue
            per_star = [max(a, b) for a, b in zip(distances(1, i), distances(2, j))]
            distance = min(per_star)
            at_eps.append(StabilityPoint(
                eps=eps,
                product=product,
                distance=distance,
                pivot=per_star.index(distance) + 1,
                family1=catalog.families[i].to_literal(),
                family2=catalog.families[j].to_literal(),
            ))
        if at_eps:
            points.extend(at_eps)
            worst.append(max(at_eps, key=lambda p: p.distance))
    ratios = [float(p.distance) / float(p.eps) ** 0.5 for p in worst]
    return StabilityReport(
        n=n,
        pv1=list(pv1.entries),
        pv2=list(pv2.entries),
        eps_grid=grid,
        pairs_scanned=scanned,
        points=points,
        worst=worst,
        empirical_c=max(ratios) if ratios else None,
    )


def single_family_counterexample_value(pv: ProbabilityVector) -> Optional[Fraction]:
    """p^3 + 3p^2(1 - p) when p(1) = p(2) = p(3) = p > 1/2."""
    if pv.n < 3:
        return None
    p = pv.first
    if not (p > HALF and pv[2] == p and pv[3] == p):
        return None
    return p ** 3 + 3 * p * p * (1 - p)


def probe_single_family_conjecture(pv: ProbabilityVector, allow_large: bool = False) -> SingleFamilyReport:
    """Max of mu_p(U) over intersecting up-sets, against p(1)."""
    catalog = enumerate_up_sets(pv.n, allow_large)
    best = Fraction(0)
    extremal: list[SubsetFamily] = []
    for U in catalog:
        if not is_intersecting(U):
            continue
        m = product_measure(pv, U)
        if m > best:
            best, extremal = m, [U]
        elif m == best:
            extremal.append(U)
    first_is_max = pv.first == max(pv.entries)
    return SingleFamilyReport(
        n=pv.n,
        pv=list(pv.entries),
        max_measure=best,
        p_first=pv.first,
        max_exceeds_first=best > pv.first,
        hypotheses_hold=first_is_max and all(p <= HALF for p in pv.entries[1:]),
        conjecture_hypotheses_hold=first_is_max and all(p <= HALF for p in pv.entries[2:]),
        extremal_families=[U.to_literal() for U in extremal],
        counterexample_value=single_family_counterexample_value(pv),
    )
