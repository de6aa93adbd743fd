"""
Closed-form dual certificate for the bipartite disjointness graph.

The slack matrix S is a Kronecker product of per-coordinate 2x2 pieces, so
after conjugation by V1 (+) V2 it splits into 2^n blocks S(z) of size 2x2.
Every entry of S(z) lies in Q[sqrt(p1 p2)], and off-diagonal entries are
stored squared, so feasibility is decided without floating point.

Rows and columns of each 2x2 coordinate matrix are ordered (empty, {l}).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from core.exceptions import (
    CertificateError,
    DimensionMismatchError,
    PreconditionError,
    SizeLimitError,
    ValidationError,
)
from core.measure import ProbabilityVector
from core.schema import BlockDiagnostic, CheckResult, DetInequality, FeasibilityReport
from core.surd import ExactSurd
from utils.utils import elements_of

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
MAX_BLOCK_N = 20
MAX_HALVINGS = 60
MAX_REPORTED_BLOCKS = 256


# ------------------ sides and coordinates --------------------------------

def normalize_sides(pv1: ProbabilityVector, pv2: ProbabilityVector):
    """Order the sides so that p1 >= p2. Returns (pv1, pv2, swapped)."""
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    if pv1.first < pv2.first:
        return pv2, pv1, True
    return pv1, pv2, False


@dataclass(frozen=True)
class CoordinateBlocks:
    """The 2x2 building blocks of one coordinate l for both sides."""

    ell: int
    p1: Fraction
    p2: Fraction

    def p(self, i: int) -> Fraction:
        return self.p1 if i == 1 else self.p2

    def q(self, i: int) -> Fraction:
        return 1 - self.p(i)

    def r(self, i: int) -> Fraction:
        """c_i^2 = p_i / q_i"""
        return self.p(i) / self.q(i)

    def a_matrix(self, i: int, j: int):
        ratio = self.p(j) / self.q(i)
        return ((1 - ratio, ratio), (Fraction(1), Fraction(0)))

    def delta(self, i: int):
        return ((self.q(i), Fraction(0)), (Fraction(0), self.p(i)))

    def delta_a(self, i: int, j: int):
        a = self.a_matrix(i, j)
        q, p = self.q(i), self.p(i)
        return ((q * a[0][0], q * a[0][1]), (p * a[1][0], p * a[1][1]))

    def exact_identities(self) -> dict[str, bool]:
        out = {}
        for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)):
            a = self.a_matrix(i, j)
            out[f"row_sums_{i}{j}"] = a[0][0] + a[0][1] == 1 and a[1][0] + a[1][1] == 1
            out[f"disjoint_support_{i}{j}"] = a[1][1] == 0
        m12, m21 = self.delta_a(1, 2), self.delta_a(2, 1)
        out["delta_a_symmetry"] = all(m12[x][y] == m21[y][x] for x in range(2) for y in range(2))
        return out

    # numeric forms, only for cross-validation

    def c(self, i: int) -> float:
        return float(self.r(i)) ** 0.5

    def v_matrix(self, i: int) -> np.ndarray:
        c = self.c(i)
        return np.array([[1.0, c], [1.0, -1.0 / c]])

    def d_matrix(self, i: int, j: int) -> np.ndarray:
        return np.diag([1.0, -self.c(i) * self.c(j)])

    def to_array(self, matrix) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in matrix])


def coordinate_blocks(pv1: ProbabilityVector, pv2: ProbabilityVector) -> list[CoordinateBlocks]:
    if pv1.n != pv2.n:
        raise DimensionMismatchError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    return [CoordinateBlocks(ell, pv1[ell], pv2[ell]) for ell in range(1, pv1.n + 1)]


@dataclass(frozen=True)
class IdentityResiduals:
    numeric: dict[str, float]
    exact: dict[str, bool]

    def within(self, tolerance: float = 1e-12) -> bool:
        return all(v <= tolerance for v in self.numeric.values()) and all(self.exact.values())


def coordinate_identity_residuals(pv1: ProbabilityVector, pv2: ProbabilityVector) -> IdentityResiduals:
    """Max residual of A V = V D, V'DeltaV = I, V'(Delta A)V = D, V'(Delta J Delta)V = E over all coordinates."""
    numeric = {"AV=VD": 0.0, "VtDV=I": 0.0, "VtDAV=D": 0.0, "VtDJDV=E": 0.0}
    exact: dict[str, bool] = {}
    ones = np.ones((2, 2))
    e00 = np.array([[1.0, 0.0], [0.0, 0.0]])
    for blk in coordinate_blocks(pv1, pv2):
        for i in (1, 2):
            v_i, delta_i = blk.v_matrix(i), blk.to_array(blk.delta(i))
            numeric["VtDV=I"] = max(numeric["VtDV=I"], float(np.abs(v_i.T @ delta_i @ v_i - np.eye(2)).max()))
            for j in (1, 2):
                v_j, delta_j = blk.v_matrix(j), blk.to_array(blk.delta(j))
                a_ij, d_ij = blk.to_array(blk.a_matrix(i, j)), blk.d_matrix(i, j)
                numeric["AV=VD"] = max(numeric["AV=VD"], float(np.abs(a_ij @ v_j - v_i @ d_ij).max()))
                numeric["VtDAV=D"] = max(
                    numeric["VtDAV=D"], float(np.abs(v_i.T @ delta_i @ a_ij @ v_j - d_ij).max())
                )
                numeric["VtDJDV=E"] = max(
                    numeric["VtDJDV=E"], float(np.abs(v_i.T @ delta_i @ ones @ delta_j @ v_j - e00).max())
                )
        for name, ok in blk.exact_identities().items():
            exact[name] = exact.get(name, True) and ok
    return IdentityResiduals(numeric, exact)


# ------------------ the certificate --------------------------------------

@dataclass(frozen=True)
class DualCertificate:
    """(alpha, beta, eps1, eps2, eta) over normalized sides (p1 >= p2)."""

    pv1: ProbabilityVector
    pv2: ProbabilityVector
    alpha: ExactSurd
    beta: ExactSurd
    eps1: ExactSurd
    eps2: ExactSurd
    eta: ExactSurd
    swapped: bool = False

    @property
    def n(self) -> int:
        return self.pv1.n

    @property
    def d(self) -> Fraction:
        return self.pv1.first * self.pv2.first

    @property
    def root(self) -> ExactSurd:
        return ExactSurd.root(self.d)

    @property
    def objective(self) -> ExactSurd:
        return self.alpha + self.beta

    def eps(self, i: int) -> ExactSurd:
        return self.eps1 if i == 1 else self.eps2

    def pv(self, i: int) -> ProbabilityVector:
        return self.pv1 if i == 1 else self.pv2


def _as_surd(value, d: Fraction) -> ExactSurd:
    if isinstance(value, ExactSurd):
        if value.d != d and value.b != 0:
            raise CertificateError(f"value {value!r} is not in Q[sqrt({d})]")
        return ExactSurd(value.a, value.b, d)
    return ExactSurd.rational(Fraction(value), d)


def epsilon_eta(pv1: ProbabilityVector, pv2: ProbabilityVector, eps2) -> tuple[ExactSurd, ExactSurd]:
    """(eps1, eta) on the one-parameter family through eps2, for p1 >= p2."""
    p1, p2 = pv1.first, pv2.first
    if p1 < p2:
        raise PreconditionError(f"expected p1 >= p2, got p1 = {p1} < p2 = {p2}; swap sides first")
    d = p1 * p2
    eps2 = _as_surd(eps2, d)
    half_root = ExactSurd.root(d, HALF)
    if eps2.sign() < 0 or (half_root - eps2).sign() < 0:
        raise CertificateError(f"eps2 = {eps2} outside [0, sqrt(p1p2)/2]")
    # p2/sqrt(d) = sqrt(d)/p1 and (p1 - p2) p2 / (2 sqrt(d)) = (p1 - p2)/(2 p1) sqrt(d)
    eps1 = eps2 * (p2 / p1) + ExactSurd.root(d, (p1 - p2) / (2 * p1))
    eta = eps2 * ExactSurd.root(d, 1 / p1) + (1 - p2) / 2
    return eps1, eta


def build_certificate(pv1: ProbabilityVector, pv2: ProbabilityVector, eps2=0, alpha=None, beta=None) -> DualCertificate:
    """Certificate for eps2 (default 0). alpha, beta default to sqrt(p1p2)/2."""
    a, b, swapped = normalize_sides(pv1, pv2)
    d = a.first * b.first
    eps1, eta = epsilon_eta(a, b, eps2)
    half_root = ExactSurd.root(d, HALF)
    return DualCertificate(
        pv1=a,
        pv2=b,
        alpha=half_root if alpha is None else _as_surd(alpha, d),
        beta=half_root if beta is None else _as_surd(beta, d),
        eps1=eps1,
        eps2=_as_surd(eps2, d),
        eta=eta,
        swapped=swapped,
    )


@dataclass(frozen=True)
class CProduct:
    """c(z)_{i,j} = prod_{l in z} (-c_i c_j) as a sign and a rational square."""

    sign: int
    square: Fraction
    value: Optional[Fraction] = None


def c_product(cert: DualCertificate, i: int, j: int, z: int) -> CProduct:
    if z >> cert.n:
        raise CertificateError(f"{elements_of(z)} is not contained in [{cert.n}]")
    sign = -1 if bin(z).count("1") % 2 else 1
    square = Fraction(1)
    for ell in elements_of(z):
        square *= _ratio(cert.pv(i)[ell]) * _ratio(cert.pv(j)[ell])
    value = None
    if i == j:
        # square is (prod r_i)^2 here; c_ii itself is rational
        magnitude = Fraction(1)
        for ell in elements_of(z):
            magnitude *= _ratio(cert.pv(i)[ell])
        value = sign * magnitude
    return CProduct(sign, square, value)


def _ratio(p: Fraction) -> Fraction:
    return p / (1 - p)


# ------------------ 2x2 blocks -------------------------------------------

@dataclass(frozen=True)
class BlockMatrix:
    """[[s11, o], [o, s22]] with o stored as (sign, o^2)."""

    s11: ExactSurd
    s22: ExactSurd
    off_square: ExactSurd
    off_sign: int

    @property
    def determinant(self) -> ExactSurd:
        return self.s11 * self.s22 - self.off_square

    @property
    def trace(self) -> ExactSurd:
        return self.s11 + self.s22

    def is_psd(self) -> bool:
        return self.s11.sign() >= 0 and self.s22.sign() >= 0 and self.determinant.sign() >= 0

    def is_pd(self) -> bool:
        return self.s11.sign() > 0 and self.determinant.sign() > 0

    def to_array(self) -> np.ndarray:
        off = self.off_sign * float(self.off_square) ** 0.5
        return np.array([[float(self.s11), off], [off, float(self.s22)]])

    @classmethod
    def from_entries(cls, matrix) -> "BlockMatrix":
        """From [[a, b], [b, c]] with int / Fraction / ExactSurd entries."""
        (a, b), (b2, c) = matrix
        radicands = [v.d for v in (a, b, c) if isinstance(v, ExactSurd) and v.b != 0]
        d = radicands[0] if radicands else Fraction(1)
        a, b, b2, c = (_as_surd(v, d) for v in (a, b, b2, c))
        if b != b2:
            raise CertificateError("block is not symmetric")
        return cls(a, c, b * b, b.sign())


def is_block_psd(matrix) -> bool:
    if not isinstance(matrix, BlockMatrix):
        matrix = BlockMatrix.from_entries(matrix)
    return matrix.is_psd()


def _block(cert: DualCertificate, z: int, prod1: Fraction, prod2: Fraction) -> BlockMatrix:
    if z == 0:
        off = cert.eta - HALF
        return BlockMatrix(cert.alpha - cert.eps1, cert.beta - cert.eps2, off * off, off.sign())
    sign = -1 if bin(z).count("1") % 2 else 1
    c11, c22 = sign * prod1, sign * prod2
    return BlockMatrix(
        cert.alpha - cert.eps1 * c11,
        cert.beta - cert.eps2 * c22,
        cert.eta.square() * (prod1 * prod2),
        cert.eta.sign() * sign,
    )


def block_S(z: int, cert: DualCertificate) -> BlockMatrix:
    """S(z): the (z, z) block of (V1 (+) V2)' S (V1 (+) V2)."""
    prod1 = abs(c_product(cert, 1, 1, z).value)
    prod2 = abs(c_product(cert, 2, 2, z).value)
    return _block(cert, z, prod1, prod2)


def block_spectrum(cert: DualCertificate) -> Iterator[tuple[int, BlockMatrix]]:
    """(z, S(z)) for every z, products built incrementally from z minus its lowest bit."""
    if cert.n > MAX_BLOCK_N:
        raise SizeLimitError(f"n = {cert.n} exceeds the block cap {MAX_BLOCK_N}")
    r1 = [_ratio(p) for p in cert.pv1.entries]
    r2 = [_ratio(p) for p in cert.pv2.entries]
    size = 1 << cert.n
    prod1 = [Fraction(1)] * size
    prod2 = [Fraction(1)] * size
    for z in range(size):
        if z:
            low = z & -z
            bit = low.bit_length() - 1
            prod1[z] = prod1[z ^ low] * r1[bit]
            prod2[z] = prod2[z ^ low] * r2[bit]
        yield z, _block(cert, z, prod1[z], prod2[z])


def _diagnostic(z: int, blk: BlockMatrix) -> BlockDiagnostic:
    return BlockDiagnostic(
        z=elements_of(z),
        s11=blk.s11,
        s22=blk.s22,
        off_diagonal_squared=blk.off_square,
        determinant=blk.determinant,
        psd=blk.is_psd(),
        strict=blk.is_pd(),
    )


# ------------------ feasibility ------------------------------------------

def _z_check(cert: DualCertificate) -> CheckResult:
    offending = []
    for i in (1, 2):
        if cert.eps(i).sign() > 0:
            for ell, p in enumerate(cert.pv(i).entries, start=1):
                if p > HALF:
                    offending.append(f"side {i} coordinate {ell}: p = {p} > 1/2")
    detail = "; ".join(offending) if offending else None
    return CheckResult(name="z_nonnegative", passed=not offending, detail=detail)


def _largest_intersecting_entry(blocks: list[CoordinateBlocks], i: int, j: int) -> Fraction:
    """max |(Delta_i A_ij)[x, y]| over x, y sharing an element, from the Kronecker factors.

    An intersecting pair takes the (1, 1) entry at one shared coordinate at least
    and any entry elsewhere.
    """
    meet, anywhere = [], []
    for b in blocks:
        m = b.delta_a(i, j)
        meet.append(abs(m[1][1]))
        anywhere.append(max(abs(v) for row in m for v in row))
    best = Fraction(0)
    for ell in range(len(blocks)):
        value = meet[ell]
        for k, other in enumerate(anywhere):
            if k != ell:
                value *= other
        best = max(best, value)
    return best


def gamma_support_check(cert: DualCertificate, blocks: Optional[list[CoordinateBlocks]] = None) -> CheckResult:
    """gamma = eta Delta_1 A_12 vanishes on every intersecting pair."""
    if blocks is None:
        blocks = coordinate_blocks(cert.pv1, cert.pv2)
    if cert.eta.sign() == 0:
        return CheckResult(name="gamma_support", passed=True)
    worst = max(_largest_intersecting_entry(blocks, 1, 2), _largest_intersecting_entry(blocks, 2, 1))
    detail = f"|gamma| reaches {abs(float(cert.eta)) * float(worst):.3e} on an intersecting pair" if worst else None
    return CheckResult(name="gamma_support", passed=worst == 0, detail=detail)


def _epsilon_check(cert: DualCertificate) -> CheckResult:
    half_root = cert.root * HALF
    ok = cert.eps1.sign() >= 0 and cert.eps2.sign() >= 0 and (half_root - cert.eps2).sign() >= 0
    detail = None if ok else f"eps1 = {cert.eps1}, eps2 = {cert.eps2}"
    return CheckResult(name="epsilon_range", passed=ok, detail=detail)


def check_certificate(cert: DualCertificate, kind: str = "tensor") -> FeasibilityReport:
    """All feasibility checks; failures are report entries."""
    checks = [_epsilon_check(cert), _z_check(cert), gamma_support_check(cert)]
    failing = []
    failing_count = 0
    count = 0
    for z, blk in block_spectrum(cert):
        count += 1
        if not blk.is_psd():
            failing_count += 1
            if len(failing) < MAX_REPORTED_BLOCKS:
                failing.append(_diagnostic(z, blk))
    psd_detail = None
    if failing_count:
        psd_detail = f"{failing_count} of {count} blocks are not PSD"
    checks.append(CheckResult(name="blocks_psd", passed=failing_count == 0, detail=psd_detail))

    objective = cert.objective
    objective_ok = objective == cert.root
    checks.append(CheckResult(
        name="objective",
        passed=objective_ok,
        detail=None if objective_ok else f"alpha + beta = {objective} differs from sqrt(p1p2)",
    ))
    feasible = all(c.passed for c in checks)
    bound = None
    if feasible:
        bound = objective.square().exact_value()
    hint = None
    if not checks[1].passed:
        hint = "a coordinate exceeds 1/2 on a side with positive epsilon; use the `chain` command for p1 > 1/2"
    logger.debug(f"certificate n={cert.n} eps2={cert.eps2}: {count} blocks, {failing_count} failing")
    return FeasibilityReport(
        kind=kind,
        n=cert.n,
        pv1=list(cert.pv1.entries),
        pv2=list(cert.pv2.entries),
        swapped=cert.swapped,
        alpha=cert.alpha,
        beta=cert.beta,
        eps1=cert.eps1,
        eps2=cert.eps2,
        eta=cert.eta,
        objective=objective,
        checks=checks,
        blocks_checked=count,
        failing_blocks=failing,
        feasible=feasible,
        bound=bound,
        hint=hint,
    )


def verify_dual_feasibility(pv1: ProbabilityVector, pv2: ProbabilityVector, eps2=0) -> FeasibilityReport:
    return check_certificate(build_certificate(pv1, pv2, eps2))


def weak_assumption_holds(pv1: ProbabilityVector, pv2: ProbabilityVector) -> bool:
    """p1 p2 = max_l p1^(l) p2^(l)"""
    products = [a * b for a, b in zip(pv1.entries, pv2.entries)]
    return pv1.first * pv2.first == max(products)


def verify_third_certificate(pv1: ProbabilityVector, pv2: ProbabilityVector) -> FeasibilityReport:
    """eps1 = eps2 = sqrt(p1p2)/2, eta = 1/2, with the rewritten inequality checked for every z."""
    a, b, _ = normalize_sides(pv1, pv2)
    preconditions = [
        CheckResult(name="weak_assumption", passed=weak_assumption_holds(a, b)),
        CheckResult(
            name="all_at_most_one_third",
            passed=all(p <= THIRD for p in a.entries + b.entries),
            detail=None if all(p <= THIRD for p in a.entries + b.entries) else "some coordinate exceeds 1/3",
        ),
    ]
    d = a.first * b.first
    cert = build_certificate(pv1, pv2, eps2=ExactSurd.root(d, HALF))
    report = check_certificate(cert, kind="third")

    inequalities = []
    small_ok, all_ok = True, True
    for z, blk in block_spectrum(cert):
        if z == 0:
            continue
        size = bin(z).count("1")
        sign = -1 if size % 2 else 1
        prod1 = abs(c_product(cert, 1, 1, z).value)
        prod2 = abs(c_product(cert, 2, 2, z).value)
        lhs = d * (1 - sign * prod1) * (1 - sign * prod2)
        rhs = prod1 * prod2
        holds = lhs >= rhs
        det = blk.determinant.to_fraction()
        if size <= 2:
            small_ok = small_ok and holds
        all_ok = all_ok and holds
        if size <= 2 or not holds:
            inequalities.append(DetInequality(
                z=elements_of(z), form="e1=e2", lhs=lhs, rhs=rhs, holds=holds,
                general_determinant=det, agrees=holds == (det >= 0),
            ))

    feasible = report.feasible and all(p.passed for p in preconditions) and all_ok
    return report.model_copy(update={
        "preconditions": preconditions,
        "inequalities": inequalities,
        "small_blocks_sufficient": (not small_ok) or all_ok,
        "feasible": feasible,
        "bound": report.bound if feasible else None,
    })


def certificate_bound(cert: DualCertificate, report: Optional[FeasibilityReport] = None) -> Fraction:
    """(alpha + beta)^2 for a verified certificate."""
    report = report or check_certificate(cert)
    if not report.feasible:
        raise CertificateError("certificate did not pass verification")
    bound = cert.objective.square().exact_value()
    if bound is None:
        raise CertificateError(f"(alpha + beta)^2 = {cert.objective.square()} is not rational")
    return bound


def strict_block_set(cert: DualCertificate) -> frozenset[int]:
    """All z with S(z) positive definite."""
    return frozenset(z for z, blk in block_spectrum(cert) if blk.is_pd())


def choose_small_epsilon2(pv1: ProbabilityVector, pv2: ProbabilityVector) -> ExactSurd:
    """Halve eps2 from sqrt(p1p2)/2 until the blocks with |z| >= 2 are exactly the strict ones."""
    a, b, _ = normalize_sides(pv1, pv2)
    if a.first >= HALF:
        raise PreconditionError(f"needs p1 < 1/2, got p1 = {a.first}")
    if any((x, y) != (a.first, b.first) for x, y in zip(a.entries, b.entries)):
        raise PreconditionError("needs w = [n]: every coordinate must equal (p1, p2)")
    target = frozenset(z for z in range(1 << a.n) if bin(z).count("1") >= 2)
    eps2 = ExactSurd.root(a.first * b.first, HALF)
    for step in range(MAX_HALVINGS):
        cert = build_certificate(a, b, eps2)
        if check_certificate(cert).feasible and strict_block_set(cert) == target:
            logger.debug(f"eps2 accepted after {step} halvings: {eps2}")
            return eps2
        eps2 = eps2 * HALF
    raise CertificateError(f"no admissible eps2 found in {MAX_HALVINGS} halvings")


# ------------------ rewritten inequalities at eps2 = 0 -------------------

def det_inequalities(cert: DualCertificate) -> list[DetInequality]:
    """4 det S(z) >= 0 in its odd / even form for every nonempty z (eps2 = 0 only)."""
    if cert.eps2.sign() != 0:
        raise CertificateError("the odd/even forms are stated for eps2 = 0")
    p1, p2 = cert.pv1.first, cert.pv2.first
    q2 = 1 - p2
    out = []
    for z, blk in block_spectrum(cert):
        if z == 0:
            continue
        prod1 = abs(c_product(cert, 1, 1, z).value)
        prod2 = abs(c_product(cert, 2, 2, z).value)
        odd = bin(z).count("1") % 2 == 1
        drift = p2 * (p1 - p2) * prod1
        lhs = p1 * p2 + drift if odd else p1 * p2 - drift
        rhs = q2 * q2 * prod1 * prod2
        det = blk.determinant.exact_value()
        if det is None:
            raise CertificateError(f"determinant of S({elements_of(z)}) is not rational")
        holds = lhs >= rhs
        out.append(DetInequality(
            z=elements_of(z), form="odd" if odd else "even", lhs=lhs, rhs=rhs,
            holds=holds, general_determinant=det, agrees=holds == (det >= 0),
        ))
    return out


# ------------------ the one-coordinate dual ------------------------------

@dataclass(frozen=True)
class SingleCoordinateDual:
    """n = 1: alpha = beta = sqrt(p1p2)/2, gamma on the three disjoint pairs, Z = 0."""

    p1: Fraction
    p2: Fraction
    alpha: ExactSurd
    beta: ExactSurd
    gamma: dict = field(default_factory=dict)

    def slack_matrix(self) -> np.ndarray:
        """[[alpha Delta1, Gamma - Delta1 J Delta2 / 2], [., beta Delta2]] over (empty, {1}) x 2."""
        q1, q2 = 1 - self.p1, 1 - self.p2
        w1, w2 = (q1, self.p1), (q2, self.p2)
        s = np.zeros((4, 4))
        for x in range(2):
            s[x, x] = float(self.alpha) * float(w1[x])
            s[2 + x, 2 + x] = float(self.beta) * float(w2[x])
            for y in range(2):
                entry = float(self.gamma.get((x, y), 0)) - float(w1[x] * w2[y]) / 2
                s[x, 2 + y] = s[2 + y, x] = entry
        return s


def single_coordinate_dual(p1, p2) -> SingleCoordinateDual:
    p1, p2 = Fraction(p1), Fraction(p2)
    if not (0 < p1 < 1 and 0 < p2 < 1):
        raise ValidationError(f"probabilities must lie in (0, 1), got {p1}, {p2}")
    q1, q2 = 1 - p1, 1 - p2
    half_root = ExactSurd.root(p1 * p2, HALF)
    gamma = {(0, 0): q1 * q2 / 2, (0, 1): q1 * p2 / 2, (1, 0): p1 * q2 / 2}
    return SingleCoordinateDual(p1, p2, half_root, half_root, gamma)
