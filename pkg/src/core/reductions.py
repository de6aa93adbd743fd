"""
Structural reductions around the main bound.

- witness sets w (strong and weak form)
- eigenbasis coefficients theta(z) of a normalized characteristic vector
- the junta expansion lambda(z) (exact by Moebius inversion)
- kernel extraction U = U|w x Omega|([n] minus w)
- the monotone scaling step for co-complexes and the p1 > 1/2 chain
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from core.certificate import (
    HALF,
    DualCertificate,
    block_spectrum,
    normalize_sides,
    verify_dual_feasibility,
    weak_assumption_holds,
)
from core.exceptions import DimensionMismatchError, PreconditionError, SizeLimitError, ValidationError
from core.measure import (
    ProbabilityVector,
    SubsetFamily,
    atom_weights,
    box_product,
    canonical_star,
    cross_intersection_witness,
    is_co_complex,
    is_cross_intersecting,
    product_measure,
    restrict,
    up_closure,
)
from core.schema import ChainLink, ChainReport, ClaimCheck, KernelReport, MonotoneReport
from utils.utils import elements_of

logger = logging.getLogger(__name__)

MAX_EIGEN_N = 12


# ------------------ witness sets -----------------------------------------

@dataclass(frozen=True)
class WitnessSet:
    mask: int
    form: str
    holds: bool

    @property
    def elements(self) -> list[int]:
        return elements_of(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")


def main_assumption_holds(pv1: ProbabilityVector, pv2: ProbabilityVector) -> bool:
    """p_i = max_l p_i^(l) for both sides."""
    return pv1.first == max(pv1.entries) and pv2.first == max(pv2.entries)


def main_theorem_hypotheses(pv1: ProbabilityVector, pv2: ProbabilityVector) -> bool:
    """The max assumption plus p_i^(l) <= 1/2 for every l >= 2."""
    tails = pv1.entries[1:] + pv2.entries[1:]
    return main_assumption_holds(pv1, pv2) and all(p <= HALF for p in tails)


def witness_set(pv1: ProbabilityVector, pv2: ProbabilityVector, form: str = "strong") -> WitnessSet:
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    p1, p2 = pv1.first, pv2.first
    mask = 0
    if form == "strong":
        for ell, (a, b) in enumerate(zip(pv1.entries, pv2.entries)):
            if (a, b) == (p1, p2):
                mask |= 1 << ell
        holds = main_assumption_holds(pv1, pv2)
    elif form == "weak":
        for ell, (a, b) in enumerate(zip(pv1.entries, pv2.entries)):
            if a * b == p1 * p2:
                mask |= 1 << ell
        holds = weak_assumption_holds(pv1, pv2)
    else:
        raise ValidationError(f"unknown witness form {form!r}; expected 'strong' or 'weak'")
    return WitnessSet(mask, form, holds)


# ------------------ eigenbasis -------------------------------------------

def kron_matvec(factors: list, vec: np.ndarray) -> np.ndarray:
    """(factors[n-1] (x) ... (x) factors[0]) @ vec without forming the product."""
    n = len(factors)
    t = np.asarray(vec, dtype=float).reshape((2,) * n)
    for ell, m in enumerate(factors, start=1):
        # coordinate l is bit l-1, i.e. axis n-l in C order
        axis = n - ell
        t = np.moveaxis(np.tensordot(m, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def _c_values(pv: ProbabilityVector) -> list[float]:
    return [float(p / (1 - p)) ** 0.5 for p in pv.entries]


@dataclass(frozen=True)
class EigenCoefficients:
    """theta(z) = v(z)' Delta x / sqrt(mu(U)), indexed by the mask z."""

    n: int
    theta: np.ndarray
    measure: Fraction
    parseval: float
    reconstruction_residual: float

    def __getitem__(self, z: int) -> float:
        return float(self.theta[z])

    def support(self, tolerance: float = 1e-10) -> list[int]:
        return [z for z in range(1 << self.n) if abs(self.theta[z]) > tolerance]

    def max_outside(self, w: int) -> float:
        """max |theta(z)| over z not contained in w."""
        outside = [abs(self.theta[z]) for z in range(1 << self.n) if z & ~w]
        return float(max(outside, default=0.0))

    def max_above_order(self, k: int) -> float:
        """max |theta(z)| over |z| > k."""
        values = [abs(self.theta[z]) for z in range(1 << self.n) if bin(z).count("1") > k]
        return float(max(values, default=0.0))


def eigen_coefficients(pv: ProbabilityVector, U: SubsetFamily) -> EigenCoefficients:
    if pv.n != U.n:
        raise DimensionMismatchError(f"probability vector has n = {pv.n}, family has n = {U.n}")
    if pv.n > MAX_EIGEN_N:
        raise SizeLimitError(f"n = {pv.n} exceeds the eigenbasis cap {MAX_EIGEN_N}")
    measure = product_measure(pv, U)
    if measure == 0:
        raise ValidationError("eigenbasis coefficients need a family of positive measure")
    weights = np.array([float(w) for w in atom_weights(pv)])
    x = np.zeros(1 << pv.n)
    for member in U:
        x[member] = 1.0
    root = float(measure) ** 0.5
    cs = _c_values(pv)
    v_factors = [np.array([[1.0, c], [1.0, -1.0 / c]]) for c in cs]
    theta = kron_matvec([v.T for v in v_factors], weights * x) / root
    rebuilt = kron_matvec(v_factors, theta)
    return EigenCoefficients(
        n=pv.n,
        theta=theta,
        measure=measure,
        parseval=float(np.sum(theta * theta)),
        reconstruction_residual=float(np.abs(rebuilt - x / root).max()),
    )


def junta_coefficients(U: SubsetFamily) -> np.ndarray:
    """Integer lambda with 1_U = sum_z lambda(z) [z subset of x] (Moebius inversion)."""
    t = np.zeros(1 << U.n, dtype=np.int64)
    for member in U:
        t[member] = 1
    t = t.reshape((2,) * U.n)
    for axis in range(U.n):
        view = np.moveaxis(t, axis, 0)
        view[1] -= view[0]
    return t.reshape(-1)


def junta_from_eigen(pv: ProbabilityVector, eig: EigenCoefficients) -> np.ndarray:
    """sqrt(mu) (T_n (x) ... (x) T_1) theta with T = [[1, c], [0, -c - 1/c]]."""
    factors = [np.array([[1.0, c], [0.0, -c - 1.0 / c]]) for c in _c_values(pv)]
    return float(eig.measure) ** 0.5 * kron_matvec(factors, eig.theta)


def block_slack(cert: DualCertificate, U1: SubsetFamily, U2: SubsetFamily) -> float:
    """S.X evaluated blockwise: sum_z (theta1(z), theta2(z)) S(z) (theta1(z), theta2(z))'."""
    if cert.swapped:
        U1, U2 = U2, U1
    eig1 = eigen_coefficients(cert.pv1, U1)
    eig2 = eigen_coefficients(cert.pv2, U2)
    total = 0.0
    for z, blk in block_spectrum(cert):
        vec = np.array([eig1[z], eig2[z]])
        total += float(vec @ blk.to_array() @ vec)
    return total


# ------------------ kernels ----------------------------------------------

def kernel_extract(pv1: ProbabilityVector, pv2: ProbabilityVector, U1: SubsetFamily, U2: SubsetFamily) -> KernelReport:
    """Kernels K_i = U_i|w and the box structure U_i = K_i x Omega|([n] minus w)."""
    if not (pv1.n == pv2.n == U1.n == U2.n):
        raise DimensionMismatchError("vectors and families must share n")
    if max(pv1.first, pv2.first) > HALF:
        raise PreconditionError("kernel extraction needs p1, p2 <= 1/2")
    n = pv1.n
    w = witness_set(pv1, pv2, "strong").mask
    k1, k2 = restrict(U1, w), restrict(U2, w)
    box1 = box_product(k1, w, n) == U1
    box2 = box_product(k2, w, n) == U2
    crossing = is_cross_intersecting(k1, k2)
    expected = None
    size_ok = None
    if pv1.first == pv2.first == HALF:
        expected = 1 << (bin(w).count("1") - 1)
        size_ok = len(k1) == expected and len(k2) == expected
    problems = []
    if not box1:
        problems.append("U1 is not a box product over w")
    if not box2:
        problems.append("U2 is not a box product over w")
    if not crossing:
        problems.append("kernels are not cross-intersecting")
    if size_ok is False:
        problems.append(f"kernel sizes {len(k1)}, {len(k2)} differ from {expected}")
    if problems:
        logger.warning(f"kernel structure violated: {'; '.join(problems)}")
    return KernelReport(
        w=elements_of(w),
        kernel1=k1.to_literal(),
        kernel2=k2.to_literal(),
        box_structure1=box1,
        box_structure2=box2,
        kernels_cross_intersecting=crossing,
        kernel_sizes=[len(k1), len(k2)],
        kernel_size_expected=expected,
        kernel_size_ok=size_ok,
        violation="; ".join(problems) or None,
    )


# ------------------ monotone scaling -------------------------------------

def monotone_scale(pv: ProbabilityVector, pv_tilde: ProbabilityVector, U: SubsetFamily) -> MonotoneReport:
    """mu_p(U) <= (p(1) / p~(1)) mu_p~(U) for a co-complex U, with the U' + U'' + U''' split."""
    if not (pv.n == pv_tilde.n == U.n):
        raise DimensionMismatchError("vectors and family must share n")
    if pv.entries[1:] != pv_tilde.entries[1:]:
        raise PreconditionError("vectors may differ only in coordinate 1")
    if not pv.first > pv_tilde.first:
        raise PreconditionError(f"needs p(1) > p~(1), got {pv.first} and {pv_tilde.first}")
    if not is_co_complex(U):
        raise PreconditionError("monotone scaling needs a co-complex")
    star = canonical_star(U.n, 1)
    lower = U.difference(star)                       # U': members without 1
    lifted = SubsetFamily(U.n, lower.members << 1)   # U'': the same members with 1 added
    remainder = U.difference(lower).difference(lifted)
    ratio = pv.first / pv_tilde.first
    lhs = product_measure(pv, U)
    rhs = ratio * product_measure(pv_tilde, U)
    paired = lower.union(lifted)
    pairing = product_measure(pv, paired) == product_measure(pv_tilde, paired)
    equality = lhs == rhs
    containment = len(lower) == 0
    return MonotoneReport(
        lhs=lhs,
        rhs=rhs,
        equality=equality,
        pivot_containment=containment,
        unpaired_size=len(lower),
        lifted_size=len(lifted),
        remainder_size=len(remainder),
        pairing_invariant=pairing,
        consistent=lhs <= rhs and equality == containment,
    )


# ------------------ p1 > 1/2 ---------------------------------------------

@dataclass(frozen=True)
class ReducedPair:
    pv1_tilde: ProbabilityVector
    pv2_tilde: ProbabilityVector
    w_tilde: WitnessSet
    swapped: bool


def reduce_large_p(pv1: ProbabilityVector, pv2: ProbabilityVector) -> ReducedPair:
    """Lower coordinate 1 on each side to p~_i = max_{l >= 2} p_i^(l)."""
    a, b, swapped = normalize_sides(pv1, pv2)
    if a.n < 2:
        raise PreconditionError("the reduction needs n >= 2")
    if not main_theorem_hypotheses(a, b):
        raise PreconditionError("needs p_i = max_l p_i^(l) and p_i^(l) <= 1/2 for l >= 2")
    if a.first <= HALF:
        raise PreconditionError(f"the reduction is for p1 > 1/2, got p1 = {a.first}")
    tilde1 = a.with_coordinate(1, max(a.entries[1:]))
    tilde2 = b.with_coordinate(1, max(b.entries[1:]))
    return ReducedPair(tilde1, tilde2, witness_set(tilde1, tilde2, "strong"), swapped)


def _claim_applies(pv1: ProbabilityVector, pv2: ProbabilityVector) -> bool:
    return pv1.first > HALF and all(p == HALF for p in pv1.entries[1:] + pv2.entries)


def verify_reduction_chain(pv1: ProbabilityVector, pv2: ProbabilityVector, U1: SubsetFamily, U2: SubsetFamily) -> ChainReport:
    """Each link of mu1 mu2 <= (p1 p2 / p~1 p~2) mu~1 mu~2 <= p1 p2, on the up-closures of U1, U2."""
    if not (pv1.n == pv2.n == U1.n == U2.n):
        raise DimensionMismatchError("vectors and families must share n")
    reduced = reduce_large_p(pv1, pv2)
    if reduced.swapped:
        pv1, pv2, U1, U2 = pv2, pv1, U2, U1
    U1, U2 = up_closure(U1), up_closure(U2)
    if not is_cross_intersecting(U1, U2):
        x, y = cross_intersection_witness(U1, U2)
        raise PreconditionError(f"families are not cross-intersecting: {elements_of(x)} and {elements_of(y)} are disjoint")

    t1, t2 = reduced.pv1_tilde, reduced.pv2_tilde
    m1, m2 = product_measure(pv1, U1), product_measure(pv2, U2)
    mt1, mt2 = product_measure(t1, U1), product_measure(t2, U2)
    p1, p2, pt1, pt2 = pv1.first, pv2.first, t1.first, t2.first

    links = [ChainLink(name="tilde_bound", lhs=mt1 * mt2, rhs=pt1 * pt2,
                       holds=mt1 * mt2 <= pt1 * pt2, tight=mt1 * mt2 == pt1 * pt2)]
    for side, (pv, tilde, family, m, mt) in enumerate(((pv1, t1, U1, m1, mt1), (pv2, t2, U2, m2, mt2)), start=1):
        if pv.first > tilde.first:
            report = monotone_scale(pv, tilde, family)
            lhs, rhs = report.lhs, report.rhs
        else:
            lhs, rhs = m, mt
        links.append(ChainLink(name=f"monotone_side{side}", lhs=lhs, rhs=rhs, holds=lhs <= rhs, tight=lhs == rhs))
    scaled = (p1 * p2) / (pt1 * pt2) * mt1 * mt2
    product = m1 * m2
    bound = p1 * p2
    links.append(ChainLink(name="combined", lhs=product, rhs=scaled, holds=product <= scaled, tight=product == scaled))
    links.append(ChainLink(name="final_bound", lhs=scaled, rhs=bound, holds=scaled <= bound, tight=scaled == bound))

    equality = product == bound
    in_star1 = in_star2 = None
    if equality:
        in_star1 = U1.issubset(canonical_star(U1.n, 1))
        if p2 > HALF:
            in_star2 = U2.issubset(canonical_star(U2.n, 1))

    claim = None
    star1 = canonical_star(U1.n, 1)
    if _claim_applies(pv1, pv2) and U1.issubset(star1):
        extra = len(U2.difference(star1))
        n = U1.n
        claim_bound = p1 / 2 * (1 - Fraction(extra * extra, 1 << (2 * n - 2)))
        claim = ClaimCheck(extra_size=extra, bound=claim_bound, product=product, holds=product <= claim_bound)

    tilde_feasible = verify_dual_feasibility(t1, t2).feasible
    all_hold = all(link.holds for link in links) and (claim is None or claim.holds) and tilde_feasible
    logger.debug(f"reduction chain n={U1.n}: product {product}, bound {bound}, equality {equality}")
    return ChainReport(
        n=U1.n,
        pv1=list(pv1.entries),
        pv2=list(pv2.entries),
        swapped=reduced.swapped,
        pv1_tilde=list(t1.entries),
        pv2_tilde=list(t2.entries),
        w_tilde=reduced.w_tilde.elements,
        links=links,
        product=product,
        bound=bound,
        equality=equality,
        family1_in_star=in_star1,
        family2_in_star=in_star2,
        claim=claim,
        tilde_certificate_feasible=tilde_feasible,
        all_links_hold=all_hold,
    )
