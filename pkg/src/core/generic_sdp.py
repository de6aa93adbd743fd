"""
SDP bound for cross-independent pairs in a measured bipartite graph.

Primal:  X = v v' with v = (x1 / sqrt(mu1(U1)), x2 / sqrt(mu2(U2))).
Dual:    S = [[alpha D1, Gamma - D1 J D2 / 2], [., beta D2]] - Z >= 0,
         Z >= 0 entrywise, Gamma supported on edges.
Weak duality: alpha + beta - sqrt(mu1 mu2) = S.X + Z.X for cross-independent
pairs, so both inner products vanish at an optimal pair.

Also: the classical ratio / singular-value bounds (exact spectra through
sympy) and the dense Kronecker cross-check of the closed-form certificate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional, Union

import networkx as nx
import numpy as np
import sympy as sp

from core.certificate import DualCertificate, SingleCoordinateDual, block_spectrum, coordinate_blocks
from core.exceptions import InfeasibleDualError, PreconditionError, SizeLimitError, ValidationError
from core.measure import ProbabilityVector, SubsetFamily, atom_weights, down_closure
from core.schema import AuditReport, DenseAudit, SpectralBound
from core.surd import rational_sqrt
from utils.utils import elements_of, iter_bits, parse_rational

logger = logging.getLogger(__name__)

MAX_DENSE_N = 10
MAX_GRAPH_N = 12
MAX_EXACT_PSD_SIZE = 16
MAX_BRUTE_FORCE_SIDE = 16
MAX_REPORTED_VIOLATIONS = 64
EIGEN_EPS = Fraction(1, 10**12)
SQRT_DIGITS = 15


# ------------------ graphs -----------------------------------------------

@dataclass(frozen=True)
class MeasuredBipartiteGraph:
    """Bipartite graph with left/right vertex measures; adjacency[x] is a bitset over the right side."""

    left: int
    right: int
    adjacency: tuple
    mu1: tuple
    mu2: tuple
    ground_n: Optional[int] = None

    def __post_init__(self):
        if self.left < 1 or self.right < 1:
            raise ValidationError("both sides need at least one vertex")
        if len(self.adjacency) != self.left:
            raise ValidationError(f"adjacency has {len(self.adjacency)} rows, expected {self.left}")
        if any(row < 0 or row >> self.right for row in self.adjacency):
            raise ValidationError("adjacency row refers to a vertex outside the right side")
        for name, mu, size in (("mu1", self.mu1, self.left), ("mu2", self.mu2, self.right)):
            if len(mu) != size:
                raise ValidationError(f"{name} has {len(mu)} entries, expected {size}")
            if any(m < 0 for m in mu):
                raise ValidationError(f"{name} has a negative entry")
            if sum(mu, Fraction(0)) != 1:
                raise ValidationError(f"{name} sums to {sum(mu, Fraction(0))}, not 1")
        object.__setattr__(self, "mu1", tuple(Fraction(m) for m in self.mu1))
        object.__setattr__(self, "mu2", tuple(Fraction(m) for m in self.mu2))

    @classmethod
    def from_edges(cls, left: int, right: int, edges: Iterable, mu1=None, mu2=None) -> "MeasuredBipartiteGraph":
        rows = [0] * left
        for x, y in edges:
            if not (0 <= x < left and 0 <= y < right):
                raise ValidationError(f"edge ({x}, {y}) is outside {left} x {right}")
            rows[x] |= 1 << y
        mu1 = tuple(Fraction(m) for m in mu1) if mu1 is not None else (Fraction(1, left),) * left
        mu2 = tuple(Fraction(m) for m in mu2) if mu2 is not None else (Fraction(1, right),) * right
        return cls(left, right, tuple(rows), mu1, mu2)

    @classmethod
    def from_json(cls, payload: dict) -> "MeasuredBipartiteGraph":
        """{"left": m1, "right": m2, "edges": [[x, y], ...], "mu1": [...], "mu2": [...]}"""
        try:
            left, right = int(payload["left"]), int(payload["right"])
            edges = [(int(x), int(y)) for x, y in payload.get("edges", [])]
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed graph JSON: {e}")
        mu1 = [parse_rational(m) for m in payload["mu1"]] if "mu1" in payload else None
        mu2 = [parse_rational(m) for m in payload["mu2"]] if "mu2" in payload else None
        return cls.from_edges(left, right, edges, mu1, mu2)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, left_nodes: list, right_nodes: list) -> "MeasuredBipartiteGraph":
        index = {v: i for i, v in enumerate(right_nodes)}
        edges = []
        for x, u in enumerate(left_nodes):
            for v in graph.neighbors(u):
                if v in index:
                    edges.append((x, index[v]))
        return cls.from_edges(len(left_nodes), len(right_nodes), edges)

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x] >> y & 1)

    def left_degrees(self) -> list[int]:
        return [bin(row).count("1") for row in self.adjacency]

    def right_degrees(self) -> list[int]:
        degrees = [0] * self.right
        for row in self.adjacency:
            for y in iter_bits(row):
                degrees[y] += 1
        return degrees

    def biadjacency(self) -> np.ndarray:
        b = np.zeros((self.left, self.right), dtype=np.int64)
        for x, row in enumerate(self.adjacency):
            for y in iter_bits(row):
                b[x, y] = 1
        return b


def disjointness_graph(pv1: ProbabilityVector, pv2: ProbabilityVector) -> MeasuredBipartiteGraph:
    """Both sides 2^[n]; x ~ y iff x and y are disjoint."""
    if pv1.n != pv2.n:
        raise ValidationError(f"probability vectors have n = {pv1.n} and n = {pv2.n}")
    n = pv1.n
    if n > MAX_GRAPH_N:
        raise SizeLimitError(f"n = {n} exceeds the graph cap {MAX_GRAPH_N}")
    full = (1 << n) - 1
    rows = tuple(down_closure(SubsetFamily.from_masks(n, [full ^ x])).members for x in range(1 << n))
    return MeasuredBipartiteGraph(1 << n, 1 << n, rows, atom_weights(pv1), atom_weights(pv2), ground_n=n)


# ------------------ primal -----------------------------------------------

def _members(family: Union[SubsetFamily, int]) -> int:
    return family.members if isinstance(family, SubsetFamily) else int(family)


@dataclass(frozen=True)
class PrimalWitness:
    graph: MeasuredBipartiteGraph
    members1: int
    members2: int
    measure1: Fraction
    measure2: Fraction
    trace1: Fraction
    trace2: Fraction
    violation_count: int
    violations: tuple = ()

    @property
    def objective_squared(self) -> Fraction:
        return self.measure1 * self.measure2

    @property
    def feasible(self) -> bool:
        return self.violation_count == 0 and self.trace1 == 1 and self.trace2 == 1

    def vector(self) -> np.ndarray:
        x1 = np.zeros(self.graph.left)
        x2 = np.zeros(self.graph.right)
        for x in iter_bits(self.members1):
            x1[x] = 1.0
        for y in iter_bits(self.members2):
            x2[y] = 1.0
        return np.concatenate([x1 / np.sqrt(float(self.measure1)), x2 / np.sqrt(float(self.measure2))])


def build_primal(graph: MeasuredBipartiteGraph, U1, U2) -> PrimalWitness:
    bits1, bits2 = _members(U1), _members(U2)
    if bits1 >> graph.left or bits2 >> graph.right:
        raise ValidationError("family does not fit the graph")
    m1 = sum((graph.mu1[x] for x in iter_bits(bits1)), Fraction(0))
    m2 = sum((graph.mu2[y] for y in iter_bits(bits2)), Fraction(0))
    if m1 == 0 or m2 == 0:
        raise PreconditionError("both families need positive measure")
    # Delta-trace of the diagonal blocks of v v'
    trace1 = sum((graph.mu1[x] for x in iter_bits(bits1)), Fraction(0)) / m1
    trace2 = sum((graph.mu2[y] for y in iter_bits(bits2)), Fraction(0)) / m2
    count = 0
    violations = []
    for x in iter_bits(bits1):
        hit = graph.adjacency[x] & bits2
        count += bin(hit).count("1")
        for y in iter_bits(hit):
            if len(violations) >= MAX_REPORTED_VIOLATIONS:
                break
            violations.append((x, y))
    return PrimalWitness(graph, bits1, bits2, m1, m2, trace1, trace2, count, tuple(violations))


# ------------------ dual -------------------------------------------------

@dataclass
class GenericDualSolution:
    s_matrix: np.ndarray
    z_matrix: np.ndarray
    alpha_plus_beta: float
    bound_squared: Optional[Fraction] = None
    exact_s: Optional[list] = None
    certificate: Optional[DualCertificate] = None
    dense: Optional[DenseAudit] = None

    @classmethod
    def from_certificate(cls, cert: DualCertificate, tolerance: float = 1e-9) -> "GenericDualSolution":
        dense = dense_certificate_oracle(cert, tolerance)
        objective = cert.objective
        exact_s = None
        if rational_sqrt(cert.d) is not None and 2 << cert.n <= MAX_EXACT_PSD_SIZE:
            exact_s = _exact_slack(cert)
        return cls(
            s_matrix=dense.s_matrix,
            z_matrix=dense.z_matrix,
            alpha_plus_beta=float(objective),
            bound_squared=objective.square().exact_value(),
            exact_s=exact_s,
            certificate=cert,
            dense=dense.audit,
        )

    @classmethod
    def from_single_coordinate(cls, dual: SingleCoordinateDual) -> "GenericDualSolution":
        objective = dual.alpha + dual.beta
        return cls(
            s_matrix=dual.slack_matrix(),
            z_matrix=np.zeros((4, 4)),
            alpha_plus_beta=float(objective),
            bound_squared=objective.square().exact_value(),
        )


def _exact_kron(factors: list) -> list:
    """Kronecker product of 2x2 Fraction matrices, coordinate 1 the least significant index bit."""
    out = [[Fraction(1)]]
    for m in factors:
        size = len(out)
        nxt = [[Fraction(0)] * (2 * size) for _ in range(2 * size)]
        for a in range(2):
            for b in range(2):
                for x in range(size):
                    for y in range(size):
                        nxt[a * size + x][b * size + y] = m[a][b] * out[x][y]
        out = nxt
    return out


def _exact_slack(cert: DualCertificate) -> list:
    """S with Fraction entries; only possible when sqrt(p1 p2) is rational."""
    values = {}
    for name in ("alpha", "beta", "eps1", "eps2", "eta"):
        values[name] = getattr(cert, name).exact_value()
    blocks = coordinate_blocks(cert.pv1, cert.pv2)
    da = {(i, j): _exact_kron([b.delta_a(i, j) for b in blocks]) for i in (1, 2) for j in (1, 2)}
    w1, w2 = atom_weights(cert.pv1), atom_weights(cert.pv2)
    size = 1 << cert.n
    s = [[Fraction(0)] * (2 * size) for _ in range(2 * size)]
    for x in range(size):
        for y in range(size):
            s[x][y] = (values["alpha"] * w1[x] if x == y else 0) - values["eps1"] * da[1, 1][x][y]
            s[size + x][size + y] = (values["beta"] * w2[x] if x == y else 0) - values["eps2"] * da[2, 2][x][y]
            s[x][size + y] = values["eta"] * da[1, 2][x][y] - w1[x] * w2[y] / 2
            s[size + x][y] = values["eta"] * da[2, 1][x][y] - w2[x] * w1[y] / 2
    return s


def _to_sympy(matrix: list) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in matrix])


def weak_duality_audit(witness: PrimalWitness, dual: GenericDualSolution, tolerance: float = 1e-9) -> AuditReport:
    s, z = dual.s_matrix, dual.z_matrix
    scale = max(1.0, float(np.abs(s).max()))
    min_eig = float(np.linalg.eigvalsh((s + s.T) / 2).min())
    if min_eig < -tolerance * scale:
        raise InfeasibleDualError(f"dual slack matrix has eigenvalue {min_eig:.3e} < 0")
    if float(z.min()) < -tolerance:
        raise InfeasibleDualError(f"Z has a negative entry {float(z.min()):.3e}")
    exact_psd = None
    if dual.exact_s is not None and len(dual.exact_s) <= MAX_EXACT_PSD_SIZE:
        exact_psd = bool(_to_sympy(dual.exact_s).is_positive_semidefinite)
        if not exact_psd:
            raise InfeasibleDualError("dual slack matrix is not PSD (exact check)")

    v = witness.vector()
    s_dot_x = float(v @ s @ v)
    z_dot_x = float(v @ z @ v)
    gap = dual.alpha_plus_beta - float(witness.objective_squared) ** 0.5
    gap_squared = None
    if dual.bound_squared is not None:
        gap_squared = dual.bound_squared - witness.objective_squared
    slack_ok = abs(s_dot_x) <= tolerance * scale and abs(z_dot_x) <= tolerance * scale

    n = witness.graph.ground_n
    family1 = family2 = None
    if n is not None:
        family1 = SubsetFamily(n, witness.members1).to_literal()
        family2 = SubsetFamily(n, witness.members2).to_literal()
    violations = []
    for x, y in witness.violations:
        if n is not None:
            violations.append([elements_of(x), elements_of(y)])
        else:
            violations.append([[x], [y]])

    logger.info(f"weak duality audit: gap={gap:.3e}, S.X={s_dot_x:.3e}, Z.X={z_dot_x:.3e}")
    return AuditReport(
        n=n,
        family1=family1,
        family2=family2,
        measure1=witness.measure1,
        measure2=witness.measure2,
        objective_squared=witness.objective_squared,
        cross_independent=witness.violation_count == 0,
        edge_violations=violations,
        alpha_plus_beta=dual.alpha_plus_beta,
        bound_squared=dual.bound_squared,
        gap=gap,
        gap_squared=gap_squared,
        s_dot_x=s_dot_x,
        z_dot_x=z_dot_x,
        identity_residual=abs(gap - (s_dot_x + z_dot_x)),
        complementary_slackness=slack_ok,
        exact_psd=exact_psd,
        tolerance=tolerance,
        dense=dual.dense,
    )


# ------------------ exact spectra ----------------------------------------

@dataclass(frozen=True)
class Eigenvalue:
    lower: Fraction
    upper: Fraction
    exact: Optional[Fraction]
    multiplicity: int

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"[{self.lower}, {self.upper}]"


def _frac(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def exact_spectrum(matrix: sp.Matrix) -> list[Eigenvalue]:
    """Real eigenvalues, ascending, as exact rationals or isolating intervals."""
    lam = sp.Symbol("lam")
    poly = sp.Poly(matrix.charpoly(lam).as_expr(), lam)
    _, factors = poly.factor_list()
    out = []
    for factor, mult in factors:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            root = _frac(-b / a)
            out.append(Eigenvalue(root, root, root, int(mult)))
            continue
        for (lo, hi), k in factor.intervals(eps=sp.Rational(EIGEN_EPS.numerator, EIGEN_EPS.denominator)):
            lo, hi = _frac(lo), _frac(hi)
            out.append(Eigenvalue(lo, hi, lo if lo == hi else None, int(mult) * int(k)))
    return sorted(out, key=lambda e: (e.lower, e.upper))


def _sqrt_bounds(value: Fraction) -> tuple[Fraction, Fraction]:
    root = rational_sqrt(value)
    if root is not None:
        return root, root
    scale = 10 ** SQRT_DIGITS
    low = Fraction(isqrt(int(value * scale * scale)), scale)
    return low, low + Fraction(1, scale)


def hoffman_ratio_bound(graph: nx.Graph) -> SpectralBound:
    """-lambda_min / (lambda_max - lambda_min) as a fraction of |V|, for a regular graph."""
    degrees = {d for _, d in graph.degree()}
    if len(degrees) != 1:
        raise ValidationError(f"ratio bound needs a regular graph, degrees are {sorted(degrees)}")
    k = degrees.pop()
    if k == 0:
        raise ValidationError("ratio bound is undefined for a graph without edges")
    adjacency = nx.to_numpy_array(graph, dtype=int)
    spectrum = exact_spectrum(sp.Matrix(adjacency.tolist()))
    smallest = spectrum[0]

    def ratio(lam: Fraction) -> Fraction:
        return -lam / (k - lam)

    # ratio is decreasing in lambda
    lower, upper = ratio(smallest.upper), ratio(smallest.lower)
    exact = smallest.exact is not None
    return SpectralBound(
        kind="ratio",
        vertices=graph.number_of_nodes(),
        fraction=lower if exact else None,
        lower=lower,
        upper=upper,
        value=float((lower + upper) / 2),
        exact=exact,
        top=str(k),
        second=str(smallest),
    )


def bipartite_svd_bound(graph: MeasuredBipartiteGraph) -> SpectralBound:
    """sigma2 / (sigma1 + sigma2) for a biregular graph."""
    left, right = set(graph.left_degrees()), set(graph.right_degrees())
    if len(left) != 1 or len(right) != 1:
        raise ValidationError(
            f"singular-value bound needs a biregular graph; left degrees {sorted(left)}, right degrees {sorted(right)}"
        )
    b = graph.biadjacency()
    gram = sp.Matrix((b @ b.T).tolist())
    descending = []
    for eig in reversed(exact_spectrum(gram)):
        descending.extend([eig] * eig.multiplicity)
    top = descending[0]
    second = descending[1] if len(descending) > 1 else Eigenvalue(Fraction(0), Fraction(0), Fraction(0), 1)
    if top.upper <= 0:
        raise ValidationError("singular-value bound is undefined for a graph without edges")

    lo1, _ = _sqrt_bounds(max(top.lower, Fraction(0)))
    _, hi1 = _sqrt_bounds(max(top.upper, Fraction(0)))
    lo2, _ = _sqrt_bounds(max(second.lower, Fraction(0)))
    _, hi2 = _sqrt_bounds(max(second.upper, Fraction(0)))
    lower = lo2 / (hi1 + lo2) if hi1 + lo2 else Fraction(0)
    upper = hi2 / (lo1 + hi2)
    exact = lower == upper
    return SpectralBound(
        kind="singular_value",
        vertices=graph.left + graph.right,
        fraction=lower if exact else None,
        lower=lower,
        upper=upper,
        value=float((lower + upper) / 2),
        exact=exact,
        top=f"sqrt({top})",
        second=f"sqrt({second})",
    )


# ------------------ brute force ------------------------------------------

def independence_number(graph: nx.Graph) -> int:
    """Largest clique of the complement."""
    if graph.number_of_nodes() == 0:
        return 0
    return max((len(c) for c in nx.find_cliques(nx.complement(graph))), default=0)


@dataclass(frozen=True)
class CrossIndependentMax:
    product: Fraction
    members1: int
    members2: int


def max_cross_independent(graph: MeasuredBipartiteGraph) -> CrossIndependentMax:
    """max mu1(U1) mu2(U2) over cross-independent pairs; U2 is always the full non-neighbourhood of U1."""
    if graph.left > MAX_BRUTE_FORCE_SIDE:
        raise SizeLimitError(f"left side has {graph.left} vertices, cap is {MAX_BRUTE_FORCE_SIDE}")
    size = 1 << graph.left
    full_right = (1 << graph.right) - 1
    neighbours = [0] * size
    measure = [Fraction(0)] * size
    best = CrossIndependentMax(Fraction(0), 0, 0)
    for u in range(1, size):
        low = u & -u
        x = low.bit_length() - 1
        neighbours[u] = neighbours[u ^ low] | graph.adjacency[x]
        measure[u] = measure[u ^ low] + graph.mu1[x]
        partner = full_right & ~neighbours[u]
        product = measure[u] * sum((graph.mu2[y] for y in iter_bits(partner)), Fraction(0))
        if product > best.product:
            best = CrossIndependentMax(product, u, partner)
    return best


# ------------------ dense cross-check ------------------------------------

@dataclass
class DenseCertificate:
    s_matrix: np.ndarray
    z_matrix: np.ndarray
    audit: DenseAudit = field(repr=False, default=None)


def _kron_all(factors: list) -> np.ndarray:
    out = factors[0]
    for m in factors[1:]:
        out = np.kron(m, out)
    return out


def dense_certificate_oracle(cert: DualCertificate, tolerance: float = 1e-9) -> DenseCertificate:
    """Materialize S and Z and compare the conjugated matrix with the 2x2 blocks."""
    n = cert.n
    if n > MAX_DENSE_N:
        raise SizeLimitError(f"n = {n} exceeds the dense cap {MAX_DENSE_N}")
    blocks = coordinate_blocks(cert.pv1, cert.pv2)
    delta = {i: _kron_all([b.to_array(b.delta(i)) for b in blocks]) for i in (1, 2)}
    delta_a = {(i, j): _kron_all([b.to_array(b.delta_a(i, j)) for b in blocks]) for i in (1, 2) for j in (1, 2)}
    v = {i: _kron_all([b.v_matrix(i) for b in blocks]) for i in (1, 2)}
    w1, w2 = np.diag(delta[1]), np.diag(delta[2])
    alpha, beta = float(cert.alpha), float(cert.beta)
    eps1, eps2, eta = float(cert.eps1), float(cert.eps2), float(cert.eta)

    s11 = alpha * delta[1] - eps1 * delta_a[1, 1]
    s22 = beta * delta[2] - eps2 * delta_a[2, 2]
    s12 = eta * delta_a[1, 2] - 0.5 * np.outer(w1, w2)
    s21 = eta * delta_a[2, 1] - 0.5 * np.outer(w2, w1)
    s = np.block([[s11, s12], [s21, s22]])
    size = s.shape[0] // 2
    zeros = np.zeros((size, size))
    z = np.block([[eps1 * delta_a[1, 1], zeros], [zeros, eps2 * delta_a[2, 2]]])

    w = np.block([[v[1], zeros], [zeros, v[2]]])
    conj = w.T @ s @ w
    residue = conj.copy()
    deviation = 0.0
    for zmask, blk in block_spectrum(cert):
        idx = [zmask, size + zmask]
        actual = conj[np.ix_(idx, idx)]
        deviation = max(deviation, float(np.abs(actual - blk.to_array()).max()))
        residue[np.ix_(idx, idx)] = 0.0

    masks = np.arange(size)
    intersecting = (masks[:, None] & masks[None, :]) != 0
    gamma = eta * delta_a[1, 2]
    gamma_off = float(np.abs(gamma[intersecting]).max()) if intersecting.any() else 0.0

    raw = np.linalg.eigvalsh((s + s.T) / 2)
    conjugated = np.sort(np.linalg.eigvalsh((conj + conj.T) / 2))
    scale = max(1.0, float(np.abs(s).max()))
    audit = DenseAudit(
        n=n,
        size=2 * size,
        tolerance=tolerance,
        raw_min_eigenvalue=float(raw.min()),
        conjugated_eigenvalues=[float(x) for x in (conjugated if conjugated.size <= 64 else conjugated[:16])],
        block_max_deviation=deviation,
        off_block_max=float(np.abs(residue).max()),
        asymmetry=float(np.abs(s - s.T).max()),
        z_min_entry=float(z.min()),
        gamma_offsupport_max=gamma_off,
        psd=float(raw.min()) >= -tolerance * scale,
        agrees_with_blocks=deviation <= tolerance * scale and float(np.abs(residue).max()) <= tolerance * scale,
    )
    logger.debug(f"dense oracle n={n}: min eig {audit.raw_min_eigenvalue:.3e}, deviation {deviation:.3e}")
    return DenseCertificate(s, z, audit)
