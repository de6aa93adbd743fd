from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer

from core.surd import ExactSurd

# CUSTOM CLASSES
# Every report is a CustomModel; model_dump defaults to JSON mode and to the
# wire aliases, so exact values come out as strings ("3/8",
# "1/4 + -1/2*sqrt(p1p2)") and the version field comes out as "schema".

Rational = Annotated[Fraction, PlainSerializer(lambda v: str(v), return_type=str)]
Surd = Annotated[ExactSurd, PlainSerializer(lambda v: str(v), return_type=str)]
FamilyLiteral = list[list[int]]

SCHEMA_VERSION = 1


class CustomModel(BaseModel):
    """Base model class with common features."""

    model_config = ConfigDict(arbitrary_types_allowed=True, populate_by_name=True)

    # The following keeps Fraction / ExactSurd fields serializable as strings
    def model_dump(self, **kwargs):
        """Override model_dump to use JSON mode and aliases by default"""
        if 'mode' not in kwargs:
            kwargs['mode'] = 'json'
        if 'by_alias' not in kwargs:
            kwargs['by_alias'] = True
        return super().model_dump(**kwargs)


class VersionedReport(CustomModel):
    """Top-level report; carries the schema version."""

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")


# ------------------ certificate ------------------------------------------

class CheckResult(CustomModel):
    name: str
    passed: bool
    detail: Optional[str] = None


class BlockDiagnostic(CustomModel):
    z: list[int]
    s11: Surd
    s22: Surd
    off_diagonal_squared: Surd
    determinant: Surd
    psd: bool
    strict: bool


class DetInequality(CustomModel):
    """One rewritten determinant inequality lhs >= rhs for a block z."""

    z: list[int]
    form: str
    lhs: Rational
    rhs: Rational
    holds: bool
    general_determinant: Rational
    agrees: bool


class FeasibilityReport(VersionedReport):
    kind: str = "tensor"
    n: int
    pv1: list[Rational]
    pv2: list[Rational]
    swapped: bool = False
    alpha: Surd
    beta: Surd
    eps1: Surd
    eps2: Surd
    eta: Surd
    objective: Surd
    preconditions: list[CheckResult] = []
    checks: list[CheckResult] = []
    blocks_checked: int = 0
    failing_blocks: list[BlockDiagnostic] = []
    inequalities: list[DetInequality] = []
    small_blocks_sufficient: Optional[bool] = None
    feasible: bool
    bound: Optional[Rational] = None
    hint: Optional[str] = None


# ------------------ generic_sdp ------------------------------------------

class DenseAudit(CustomModel):
    n: int
    size: int
    tolerance: float
    raw_min_eigenvalue: float
    conjugated_eigenvalues: list[float]
    block_max_deviation: float
    off_block_max: float
    asymmetry: float
    z_min_entry: float
    gamma_offsupport_max: float
    psd: bool
    agrees_with_blocks: bool


class SpectralBound(CustomModel):
    """Ratio / singular-value bound with a certified enclosure [lower, upper]."""

    kind: str
    vertices: int
    fraction: Optional[Rational] = None
    lower: Rational
    upper: Rational
    value: float
    exact: bool
    top: str
    second: str

    def vertex_bound(self) -> Fraction:
        """Upper end of the enclosure scaled by the vertex count."""
        return self.upper * self.vertices


class AuditReport(VersionedReport):
    n: Optional[int] = None
    family1: Optional[FamilyLiteral] = None
    family2: Optional[FamilyLiteral] = None
    measure1: Rational
    measure2: Rational
    objective_squared: Rational
    cross_independent: bool
    edge_violations: list[list[list[int]]] = []
    alpha_plus_beta: float
    bound_squared: Optional[Rational] = None
    gap: float
    gap_squared: Optional[Rational] = None
    s_dot_x: float
    z_dot_x: float
    block_path_s_dot_x: Optional[float] = None
    identity_residual: float
    complementary_slackness: bool
    exact_psd: Optional[bool] = None
    tolerance: float
    dense: Optional[DenseAudit] = None
    certificate: Optional[FeasibilityReport] = None
    chain: Optional["ChainReport"] = None


# ------------------ oracle -----------------------------------------------

class FamilyPair(CustomModel):
    family1: FamilyLiteral
    family2: FamilyLiteral
    measure1: Rational
    measure2: Rational


class RegimeFlags(CustomModel):
    main_theorem: bool
    uniqueness_expected: bool
    weak_assumption: bool
    third_theorem: bool


class ExtremalReport(VersionedReport):
    n: int
    pv1: list[Rational]
    pv2: list[Rational]
    up_set_count: int
    pairs_scanned: int
    max_product: Rational
    p1p2: Rational
    max_equals_bound: bool
    witness_strong: list[int]
    witness_weak: list[int]
    extremal_pairs: list[FamilyPair]
    stars_only: bool
    hypotheses: RegimeFlags
    non_monotone_samples: int = 0
    non_monotone_violations: int = 0
    verified: bool


class ExampleCheck(CustomModel):
    name: str
    n: int
    cross_intersecting: bool
    intersecting1: bool
    intersecting2: bool
    product_half: Rational
    product_third: Rational
    in_oracle: Optional[bool] = None
    passed: bool


class ExamplesReport(VersionedReport):
    examples: list[ExampleCheck]
    all_passed: bool


class WeakProbeReport(VersionedReport):
    n: int
    pv1: list[Rational]
    pv2: list[Rational]
    witness_weak: list[int]
    max_product: Rational
    p1p2: Rational
    max_equals_bound: bool
    extremal_stars_only: bool
    conjecture_consistent: bool
    counterexample: list[FamilyPair] = []


class StabilityPoint(CustomModel):
    eps: Rational
    product: Rational
    distance: Rational
    pivot: int
    family1: FamilyLiteral
    family2: FamilyLiteral


class StabilityReport(VersionedReport):
    n: int
    pv1: list[Rational]
    pv2: list[Rational]
    eps_grid: list[Rational]
    pairs_scanned: int
    points: list[StabilityPoint]
    worst: list[StabilityPoint] = []
    empirical_c: Optional[float] = None


class SingleFamilyReport(VersionedReport):
    n: int
    pv: list[Rational]
    max_measure: Rational
    p_first: Rational
    max_exceeds_first: bool
    hypotheses_hold: bool
    conjecture_hypotheses_hold: bool
    extremal_families: list[FamilyLiteral]
    counterexample_value: Optional[Rational] = None


# ------------------ reductions -------------------------------------------

class KernelReport(CustomModel):
    w: list[int]
    kernel1: FamilyLiteral
    kernel2: FamilyLiteral
    box_structure1: bool
    box_structure2: bool
    kernels_cross_intersecting: bool
    kernel_sizes: list[int]
    kernel_size_expected: Optional[int] = None
    kernel_size_ok: Optional[bool] = None
    violation: Optional[str] = None


class MonotoneReport(CustomModel):
    lhs: Rational
    rhs: Rational
    equality: bool
    pivot_containment: bool
    unpaired_size: int
    lifted_size: int
    remainder_size: int
    pairing_invariant: bool
    consistent: bool


class ChainLink(CustomModel):
    name: str
    lhs: Rational
    rhs: Rational
    holds: bool
    tight: bool


class ClaimCheck(CustomModel):
    """Kernel claim for p1 = (p, 1/2, ..., 1/2), p2 = (1/2, ..., 1/2)."""

    extra_size: int
    bound: Rational
    product: Rational
    holds: bool


class ChainReport(VersionedReport):
    n: int
    pv1: list[Rational]
    pv2: list[Rational]
    swapped: bool
    pv1_tilde: list[Rational]
    pv2_tilde: list[Rational]
    w_tilde: list[int]
    links: list[ChainLink]
    product: Rational
    bound: Rational
    equality: bool
    family1_in_star: Optional[bool] = None
    family2_in_star: Optional[bool] = None
    claim: Optional[ClaimCheck] = None
    tilde_certificate_feasible: bool
    all_links_hold: bool


# ------------------ cli --------------------------------------------------

class RunConfig(CustomModel):
    """Validated bundle handed from the CLI to the services."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    command: str
    probe: Optional[str] = None
    n: Optional[int] = None
    pv1: Optional[list[Rational]] = None
    pv2: Optional[list[Rational]] = None
    family1_path: Optional[str] = None
    family2_path: Optional[str] = None
    eps2: Optional[str] = None
    third: bool = False
    allow_large: bool = False
    eps_grid: list[Rational] = []
    tolerance: float = 1e-9
    jobs: int = 1
    seed: int = 0
    output: Optional[str] = None


AuditReport.model_rebuild()
