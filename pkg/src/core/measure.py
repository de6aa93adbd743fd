"""
Subsets, families and product measures over the ground set [n].

A subset x of [n] is an n-bit mask (element l <-> bit l-1). A family U is a
Python int used as a bitset of length 2^n: bit x is set iff x is in U. All
closure operations act on whole bitsets at once, one coordinate at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from core.exceptions import DimensionMismatchError, ValidationError
from utils.utils import elements_of, iter_bits, mask_of, parse_rational_list

MAX_MEASURE_N = 20


# ------------------ Probability vectors ----------------------------------

@dataclass(frozen=True)
class ProbabilityVector:
    """(p^(1), ..., p^(n)) with every entry an exact rational in (0, 1)."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        if not entries:
            raise ValidationError("probability vector needs at least one coordinate")
        for ell, p in enumerate(entries, start=1):
            if not (0 < p < 1):
                raise ValidationError(f"p^({ell}) = {p} is not in the open interval (0, 1)")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text) -> "ProbabilityVector":
        return cls(tuple(parse_rational_list(text)))

    @classmethod
    def uniform(cls, n: int, p) -> "ProbabilityVector":
        return cls((Fraction(p),) * n)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def first(self) -> Fraction:
        """p := p^(1), the coordinate the theorems single out."""
        return self.entries[0]

    def __getitem__(self, ell: int) -> Fraction:
        """1-based coordinate access."""
        if not 1 <= ell <= self.n:
            raise IndexError(f"coordinate {ell} outside [1, {self.n}]")
        return self.entries[ell - 1]

    def with_coordinate(self, ell: int, value) -> "ProbabilityVector":
        entries = list(self.entries)
        entries[ell - 1] = Fraction(value)
        return ProbabilityVector(tuple(entries))

    def restricted(self, z: int) -> "ProbabilityVector":
        """(p^(l) : l in z), re-indexed."""
        return ProbabilityVector(tuple(self[ell] for ell in elements_of(z)))

    def to_strings(self) -> list[str]:
        return [str(p) for p in self.entries]


@lru_cache(maxsize=256)
def atom_weights(pv: ProbabilityVector) -> tuple:
    """mu_p({x}) for every mask x, built one coordinate at a time."""
    if pv.n > MAX_MEASURE_N:
        raise ValidationError(f"n = {pv.n} exceeds the measure cap {MAX_MEASURE_N}")
    weights = [Fraction(1)]
    for p in pv.entries:
        q = 1 - p
        weights = [w * q for w in weights] + [w * p for w in weights]
    return tuple(weights)


# ------------------ Families ----------------------------------------------

@lru_cache(maxsize=64)
def _coordinate_masks(n: int) -> tuple:
    """M[l] = bitset of all masks containing element l+1."""
    size = 1 << n
    masks = []
    for ell in range(n):
        block = 1 << ell
        pattern = ((1 << block) - 1) << block
        width = 2 * block
        while width < size:
            pattern |= pattern << width
            width *= 2
        masks.append(pattern)
    return tuple(masks)


def _full_bits(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class SubsetFamily:
    """A family U of subsets of [n], stored as a bitset over the 2^n masks."""

    n: int
    members: int

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError(f"ground set size must be non-negative, got {self.n}")
        if self.members < 0 or self.members.bit_length() > (1 << self.n):
            raise ValidationError(f"bitset does not fit 2^{self.n} positions")

    # ---- construction ----

    @classmethod
    def empty(cls, n: int) -> "SubsetFamily":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "SubsetFamily":
        return cls(n, _full_bits(n))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SubsetFamily":
        bits = 0
        for x in masks:
            if not 0 <= x < (1 << n):
                raise ValidationError(f"mask {x} is not a subset of [{n}]")
            bits |= 1 << x
        return cls(n, bits)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SubsetFamily":
        masks = []
        for s in sets:
            s = list(s)
            if any(not 1 <= int(e) <= n for e in s):
                raise ValidationError(f"subset {s} is not contained in [{n}]")
            masks.append(mask_of(s))
        return cls.from_masks(n, masks)

    @classmethod
    def from_literal(cls, literal, n: int) -> "SubsetFamily":
        """JSON family literal: [[1,2],[3,4]]."""
        if not isinstance(literal, list) or any(not isinstance(s, list) for s in literal):
            raise ValidationError("family literal must be a JSON array of arrays")
        return cls.from_sets(n, literal)

    def to_literal(self) -> list[list[int]]:
        return [elements_of(x) for x in self]

    # ---- container protocol ----

    def __contains__(self, x: int) -> bool:
        return 0 <= x < (1 << self.n) and bool((self.members >> x) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.members)

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def issubset(self, other: "SubsetFamily") -> bool:
        _same_ground(self, other)
        return self.members & ~other.members == 0

    def complement(self) -> "SubsetFamily":
        """2^[n] minus U."""
        return SubsetFamily(self.n, _full_bits(self.n) ^ self.members)

    def union(self, other: "SubsetFamily") -> "SubsetFamily":
        _same_ground(self, other)
        return SubsetFamily(self.n, self.members | other.members)

    def difference(self, other: "SubsetFamily") -> "SubsetFamily":
        _same_ground(self, other)
        return SubsetFamily(self.n, self.members & ~other.members)

    def symmetric_difference(self, other: "SubsetFamily") -> "SubsetFamily":
        _same_ground(self, other)
        return SubsetFamily(self.n, self.members ^ other.members)


def _same_ground(*families) -> None:
    sizes = {f.n for f in families}
    if len(sizes) > 1:
        raise DimensionMismatchError(f"families over different ground sets: n = {sorted(sizes)}")


def canonical_star(n: int, ell: int) -> SubsetFamily:
    """U(l) = {x : l in x}."""
    if not 1 <= ell <= n:
        raise ValidationError(f"pivot {ell} outside [1, {n}]")
    return SubsetFamily(n, _coordinate_masks(n)[ell - 1])


def threshold_family(n: int, support: Iterable[int], k: int) -> SubsetFamily:
    """{x : |x cap support| >= k}."""
    s = mask_of(support)
    return SubsetFamily.from_masks(n, (x for x in range(1 << n) if bin(x & s).count("1") >= k))


# ------------------ Measure ----------------------------------------------

def product_measure(pv: ProbabilityVector, U: SubsetFamily) -> Fraction:
    """mu_p(U) = sum over x in U of prod_{l in x} p^(l) prod_{k not in x} (1 - p^(k))."""
    if pv.n != U.n:
        raise DimensionMismatchError(f"probability vector has n = {pv.n}, family has n = {U.n}")
    weights = atom_weights(pv)
    return sum((weights[x] for x in U), Fraction(0))


# ------------------ Closures and predicates ------------------------------

def up_closure(U: SubsetFamily) -> SubsetFamily:
    """Smallest co-complex containing U."""
    bits = U.members
    full = _full_bits(U.n)
    for ell, m in enumerate(_coordinate_masks(U.n)):
        bits |= (bits & (full ^ m)) << (1 << ell)
    return SubsetFamily(U.n, bits)


def down_closure(U: SubsetFamily) -> SubsetFamily:
    bits = U.members
    for ell, m in enumerate(_coordinate_masks(U.n)):
        bits |= (bits & m) >> (1 << ell)
    return SubsetFamily(U.n, bits)


def complements(U: SubsetFamily) -> SubsetFamily:
    """{[n] minus x : x in U}; position x maps to position 2^n - 1 - x."""
    size = 1 << U.n
    if U.members == 0:
        return U
    reversed_bits = int(format(U.members, f"0{size}b")[::-1], 2)
    return SubsetFamily(U.n, reversed_bits)


def blocker(U: SubsetFamily) -> SubsetFamily:
    """All y disjoint from at least one member of U (down-set of complements)."""
    return down_closure(complements(U))


def is_cross_intersecting(U1: SubsetFamily, U2: SubsetFamily) -> bool:
    _same_ground(U1, U2)
    return blocker(U1).members & U2.members == 0


def cross_intersection_witness(U1: SubsetFamily, U2: SubsetFamily) -> Optional[tuple[int, int]]:
    """A disjoint pair (x, y), x in U1, y in U2, or None."""
    _same_ground(U1, U2)
    if is_cross_intersecting(U1, U2):
        return None
    members2 = list(U2)
    for x in U1:
        for y in members2:
            if x & y == 0:
                return x, y
    return None


def is_intersecting(U: SubsetFamily) -> bool:
    return is_cross_intersecting(U, U)


def is_co_complex(U: SubsetFamily) -> bool:
    """x in U and x subset of y imply y in U."""
    return up_closure(U).members == U.members


def maximal_partner(U: SubsetFamily) -> SubsetFamily:
    """The largest family cross-intersecting U: {y : y meets every x in U}."""
    return blocker(U).complement()


# ------------------ Restriction and box products -------------------------

def _compress(x: int, z_elements: list[int]) -> int:
    out = 0
    for i, ell in enumerate(z_elements):
        if x >> (ell - 1) & 1:
            out |= 1 << i
    return out


def _expand(x: int, z_elements: list[int]) -> int:
    out = 0
    for i, ell in enumerate(z_elements):
        if x >> i & 1:
            out |= 1 << (ell - 1)
    return out


def restrict(U: SubsetFamily, z: int) -> SubsetFamily:
    """U|z = {x cap z : x in U}, re-indexed over the ground set z."""
    if z >> U.n:
        raise ValidationError(f"{elements_of(z)} is not contained in [{U.n}]")
    z_elements = elements_of(z)
    return SubsetFamily.from_masks(len(z_elements), {_compress(x & z, z_elements) for x in U})


def box_product(K: SubsetFamily, w: int, n: int) -> SubsetFamily:
    """K x Omega|([n] minus w) = {x + y : x in K, y subset of [n] minus w}."""
    if w >> n:
        raise ValidationError(f"{elements_of(w)} is not contained in [{n}]")
    w_elements = elements_of(w)
    if K.n != len(w_elements):
        raise DimensionMismatchError(f"kernel lives on {K.n} points, w has {len(w_elements)}")
    bits = 0
    for x in K:
        bits |= 1 << _expand(x, w_elements)
    full = _full_bits(n)
    masks = _coordinate_masks(n)
    for ell in range(1, n + 1):
        if not w >> (ell - 1) & 1:
            bits |= (bits & (full ^ masks[ell - 1])) << (1 << (ell - 1))
    return SubsetFamily(n, bits)
