import logging
from fractions import Fraction
from typing import Optional

from core.certificate import (
    HALF,
    build_certificate,
    check_certificate,
    choose_small_epsilon2,
    normalize_sides,
    verify_third_certificate,
)
from core.exceptions import PreconditionError, ValidationError
from core.generic_sdp import GenericDualSolution, build_primal, disjointness_graph, weak_duality_audit
from core.measure import ProbabilityVector, SubsetFamily
from core.oracle import (
    DEFAULT_EPS_GRID,
    max_cross_product,
    probe_conjecture_weak,
    probe_single_family_conjecture,
    probe_stability,
    spot_check_non_monotone,
    verify_example_pairs,
)
from core.reductions import block_slack, main_theorem_hypotheses, reduce_large_p, verify_reduction_chain
from core.schema import CustomModel, RunConfig
from services.base import BaseService
from utils.utils import load_json, parse_rational

logger = logging.getLogger(__name__)

PROBES = ("weak", "stability", "single")
SPOT_CHECK_SAMPLES = 200


class VerificationService(BaseService):
    """One entry point per CLI command; each returns (exit code, report)."""

    # ---- input --------------------------------------------------------

    def vectors(self, config: RunConfig) -> tuple[ProbabilityVector, ProbabilityVector]:
        if not config.pv1:
            raise ValidationError("missing probability vector --p1")
        pv1 = self._vector(config.pv1, config.n)
        pv2 = self._vector(config.pv2 or config.pv1, config.n)
        if pv1.n != pv2.n:
            raise ValidationError(f"--p1 has {pv1.n} coordinates, --p2 has {pv2.n}")
        return pv1, pv2

    def _vector(self, entries: list[Fraction], n: Optional[int]) -> ProbabilityVector:
        if n is not None and len(entries) == 1:
            entries = entries * n
        pv = ProbabilityVector(tuple(entries))
        if n is not None and pv.n != n:
            raise ValidationError(f"--n {n} does not match a vector with {pv.n} coordinates")
        return pv

    def load_family(self, path: Optional[str], n: int) -> SubsetFamily:
        """Family file: either a bare literal [[1,2],[3]] or {"n": 3, "family": [[1,2],[3]]}."""
        if not path:
            raise ValidationError("missing family file")
        payload = load_json(path)
        if isinstance(payload, dict):
            if "family" not in payload:
                raise ValidationError(f"{path}: expected a 'family' key")
            declared = payload.get("n", n)
            if declared != n:
                raise ValidationError(f"{path}: family is over n = {declared}, vectors have n = {n}")
            payload = payload["family"]
        return SubsetFamily.from_literal(payload, n)

    def _eps2(self, config: RunConfig, pv1: ProbabilityVector, pv2: ProbabilityVector):
        if config.eps2 is None:
            return 0
        if config.eps2 == "auto":
            return choose_small_epsilon2(pv1, pv2)
        return parse_rational(config.eps2)

    # ---- commands -----------------------------------------------------

    def certify(self, config: RunConfig) -> tuple[int, CustomModel]:
        pv1, pv2 = self.vectors(config)

        def run():
            if config.third:
                return verify_third_certificate(pv1, pv2)
            return check_certificate(build_certificate(pv1, pv2, self._eps2(config, pv1, pv2)))

        report = self._run(run, "Certificate verification")
        logger.info(f"certificate feasible={report.feasible} bound={report.bound}")
        return (0 if report.feasible else 1), report

    def oracle(self, config: RunConfig) -> tuple[int, CustomModel]:
        pv1, pv2 = self.vectors(config)
        report = self._run(lambda: max_cross_product(pv1, pv2, config.allow_large, config.jobs), "Oracle scan")
        spot = self._run(
            lambda: spot_check_non_monotone(pv1, pv2, report.max_product, SPOT_CHECK_SAMPLES, config.seed),
            "Non-monotone spot check",
        )
        report = report.model_copy(update={
            "non_monotone_samples": spot.samples,
            "non_monotone_violations": spot.violations + spot.closure_failures,
            "verified": report.verified and spot.violations + spot.closure_failures == 0,
        })
        return (0 if report.verified else 1), report

    def _audit_certificate(self, pv1, pv2, config: RunConfig):
        """The certificate the families are audited against; the reduced one when p1 > 1/2.

        The reduced vectors are handed back in the caller's side order, so cert.swapped
        alone decides which family goes with cert.pv1.
        """
        a, b, _ = normalize_sides(pv1, pv2)
        if a.first > HALF and a.n >= 2 and main_theorem_hypotheses(a, b):
            reduced = reduce_large_p(pv1, pv2)
            tilde1, tilde2 = reduced.pv1_tilde, reduced.pv2_tilde
            if reduced.swapped:
                tilde1, tilde2 = tilde2, tilde1
            return build_certificate(tilde1, tilde2), True
        return build_certificate(pv1, pv2, self._eps2(config, pv1, pv2)), False

    def audit(self, config: RunConfig) -> tuple[int, CustomModel]:
        pv1, pv2 = self.vectors(config)
        U1 = self.load_family(config.family1_path, pv1.n)
        U2 = self.load_family(config.family2_path, pv2.n)

        cert, reduced = self._run(lambda: self._audit_certificate(pv1, pv2, config), "Audit certificate")
        feasibility = self._run(lambda: check_certificate(cert), "Certificate verification")
        if not feasibility.feasible:
            logger.warning(f"certificate for the audit is infeasible: {feasibility.hint or 'see checks'}")
            return 1, feasibility

        def run():
            first, second = (U2, U1) if cert.swapped else (U1, U2)
            graph = disjointness_graph(cert.pv1, cert.pv2)
            witness = build_primal(graph, first, second)
            dual = GenericDualSolution.from_certificate(cert, config.tolerance)
            report = weak_duality_audit(witness, dual, config.tolerance)
            update = {"certificate": feasibility, "block_path_s_dot_x": block_slack(cert, U1, U2)}
            if cert.swapped:
                # report in the caller's side order
                update.update(
                    family1=report.family2, family2=report.family1,
                    measure1=report.measure2, measure2=report.measure1,
                    edge_violations=[[y, x] for x, y in report.edge_violations],
                )
            if reduced and witness.violation_count == 0:
                update["chain"] = verify_reduction_chain(pv1, pv2, U1, U2)
            return report.model_copy(update=update)

        report = self._run(run, "Weak duality audit")
        if not report.cross_independent:
            logger.warning(f"families are not cross-intersecting: {report.edge_violations[:1]}")
            return 1, report
        return 0, report

    def chain(self, config: RunConfig) -> tuple[int, CustomModel]:
        pv1, pv2 = self.vectors(config)
        U1 = self.load_family(config.family1_path, pv1.n)
        U2 = self.load_family(config.family2_path, pv2.n)
        report = self._run(lambda: verify_reduction_chain(pv1, pv2, U1, U2), "Reduction chain")
        return (0 if report.all_links_hold else 1), report

    def probe(self, config: RunConfig) -> tuple[int, CustomModel]:
        if config.probe not in PROBES:
            raise ValidationError(f"unknown probe {config.probe!r}; expected one of {', '.join(PROBES)}")
        if config.probe == "single":
            if not config.pv1:
                raise ValidationError("missing probability vector --p")
            pv = self._vector(config.pv1, config.n)
            return 0, self._run(lambda: probe_single_family_conjecture(pv, config.allow_large), "Single-family probe")
        pv1, pv2 = self.vectors(config)
        if config.probe == "weak":
            return 0, self._run(lambda: probe_conjecture_weak(pv1, pv2, config.allow_large, config.jobs), "Weak probe")
        grid = config.eps_grid or list(DEFAULT_EPS_GRID)
        return 0, self._run(lambda: probe_stability(pv1, pv2, grid), "Stability probe")

    def examples(self, config: RunConfig) -> tuple[int, CustomModel]:
        report = self._run(verify_example_pairs, "Example verification")
        return (0 if report.all_passed else 1), report

    def dispatch(self, config: RunConfig) -> tuple[int, CustomModel]:
        handler = getattr(self, config.command, None)
        if config.command not in ("certify", "oracle", "audit", "chain", "probe", "examples") or handler is None:
            raise PreconditionError(f"unknown command {config.command!r}")
        return handler(config)
