"""Dense cross-validation: materialize S and compare against the 2x2 block path."""

from dataclasses import dataclass

from core.certificate import build_certificate, coordinate_identity_residuals
from core.generic_sdp import GenericDualSolution, build_primal, disjointness_graph, weak_duality_audit
from core.measure import ProbabilityVector
from core.reductions import block_slack
from core.schema import AuditReport, DenseAudit
from testkit.grids import random_cross_pair


@dataclass(frozen=True)
class HarnessResult:
    dense: DenseAudit
    identities_ok: bool
    audit: AuditReport
    block_path_s_dot_x: float

    @property
    def slack_paths_agree(self) -> bool:
        return abs(self.audit.s_dot_x - self.block_path_s_dot_x) <= 1e-8

    @property
    def ok(self) -> bool:
        return self.dense.agrees_with_blocks and self.identities_ok and self.slack_paths_agree


def cross_validate(pv1: ProbabilityVector, pv2: ProbabilityVector, eps2=0, seed: int = 0,
                   tolerance: float = 1e-9) -> HarnessResult:
    """Dense oracle, coordinate identities and both S.X paths on one seeded random pair."""
    cert = build_certificate(pv1, pv2, eps2)
    dual = GenericDualSolution.from_certificate(cert, tolerance)
    U1, U2 = random_cross_pair(pv1.n, seed)
    first, second = (U2, U1) if cert.swapped else (U1, U2)
    witness = build_primal(disjointness_graph(cert.pv1, cert.pv2), first, second)
    audit = weak_duality_audit(witness, dual, tolerance)
    return HarnessResult(
        dense=dual.dense,
        identities_ok=coordinate_identity_residuals(pv1, pv2).within(1e-12),
        audit=audit,
        block_path_s_dot_x=block_slack(cert, U1, U2),
    )
