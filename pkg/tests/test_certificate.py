from fractions import Fraction

import numpy as np
import pytest

from core.certificate import (
    BlockMatrix,
    build_certificate,
    CoordinateBlocks,
    c_product,
    certificate_bound,
    check_certificate,
    choose_small_epsilon2,
    coordinate_identity_residuals,
    det_inequalities,
    epsilon_eta,
    gamma_support_check,
    is_block_psd,
    normalize_sides,
    single_coordinate_dual,
    strict_block_set,
    verify_dual_feasibility,
    verify_third_certificate,
)
from core.exceptions import CertificateError, PreconditionError
from core.measure import ProbabilityVector
from core.surd import ExactSurd


def pv(text):
    return ProbabilityVector.parse(text)


def test_normalize_sides_swaps_when_needed():
    a, b, swapped = normalize_sides(pv("1/3,1/4"), pv("1/2,1/4"))
    assert swapped
    assert a.first == Fraction(1, 2)


def test_epsilon_eta_at_zero():
    eps1, eta = epsilon_eta(pv("1/2,1/3"), pv("1/3,1/4"), 0)
    d = Fraction(1, 6)
    assert eps1 == ExactSurd.root(d, Fraction(1, 6))
    assert eta == Fraction(1, 3)


def test_epsilon_eta_rejects_out_of_range_eps2():
    with pytest.raises(CertificateError):
        epsilon_eta(pv("1/2"), pv("1/2"), Fraction(1))
    with pytest.raises(PreconditionError):
        epsilon_eta(pv("1/3"), pv("1/2"), 0)


def test_feasible_at_half_with_small_second_side():
    report = verify_dual_feasibility(pv("1/2,1/3"), pv("1/2,1/4"))
    assert report.feasible
    assert report.bound == Fraction(1, 4)
    assert report.blocks_checked == 4
    assert report.eps1 == 0 and report.eps2 == 0
    assert report.eta == Fraction(1, 4)


def test_feasible_for_main_theorem_vector():
    report = verify_dual_feasibility(pv("1/3,1/3,1/4,1/3"), pv("1/4,1/4,1/5,1/4"))
    assert report.feasible
    assert report.bound == Fraction(1, 12)
    assert not report.failing_blocks


def test_empty_block_is_singular():
    cert = build_certificate(pv("1/3,1/4"), pv("1/4,1/5"))
    assert 0 not in strict_block_set(cert)


def test_large_p_fails_z_check_with_hint():
    report = verify_dual_feasibility(pv("3/5,1/3"), pv("1/2,1/3"))
    assert not report.feasible
    assert report.bound is None
    z_check = next(c for c in report.checks if c.name == "z_nonnegative")
    assert not z_check.passed
    assert "chain" in report.hint


def test_third_certificate():
    report = verify_third_certificate(pv("1/3,1/4"), pv("1/3,1/5"))
    assert report.kind == "third"
    assert report.feasible
    assert report.bound == Fraction(1, 9)
    assert report.eps1 == report.eps2 == Fraction(1, 6)
    assert report.eta == Fraction(1, 2)
    assert all(p.passed for p in report.preconditions)
    assert report.small_blocks_sufficient


def test_third_certificate_preconditions_fail_above_one_third():
    report = verify_third_certificate(pv("1/2,1/3"), pv("1/2,1/4"))
    assert not report.feasible
    assert not next(p for p in report.preconditions if p.name == "all_at_most_one_third").passed


def test_choose_small_epsilon2_on_uniform_third():
    a = ProbabilityVector.uniform(3, Fraction(1, 3))
    eps2 = choose_small_epsilon2(a, a)
    assert eps2 == Fraction(1, 12)
    cert = build_certificate(a, a, eps2)
    expected = {z for z in range(8) if bin(z).count("1") >= 2}
    assert strict_block_set(cert) == expected


def test_choose_small_epsilon2_preconditions():
    with pytest.raises(PreconditionError):
        choose_small_epsilon2(pv("1/2,1/2"), pv("1/2,1/2"))
    with pytest.raises(PreconditionError):
        choose_small_epsilon2(pv("1/3,1/4"), pv("1/3,1/4"))


def test_c_product_signs():
    cert = build_certificate(pv("1/3,1/4"), pv("1/3,1/4"))
    single = c_product(cert, 1, 1, 0b01)
    assert single.sign == -1
    assert single.value == Fraction(-1, 2)
    pair = c_product(cert, 1, 1, 0b11)
    assert pair.value == Fraction(1, 2) * Fraction(1, 3)
    assert c_product(cert, 1, 2, 0b11).square == (Fraction(1, 2) * Fraction(1, 3)) ** 2


def test_block_psd_helpers():
    assert is_block_psd([[1, -1], [-1, 1]])
    assert not is_block_psd([[1, 2], [2, 1]])
    half_root = ExactSurd.root(Fraction(1, 6), Fraction(1, 2))
    block = BlockMatrix.from_entries([[half_root, 0], [0, half_root]])
    assert block.is_pd()
    assert np.allclose(block.to_array(), np.eye(2) * float(half_root))
    with pytest.raises(CertificateError):
        BlockMatrix.from_entries([[1, 2], [3, 1]])


def test_det_inequalities_agree_with_determinants():
    cert = build_certificate(pv("1/2,1/3,1/2"), pv("1/3,1/4,1/3"))
    rows = det_inequalities(cert)
    assert len(rows) == 7
    assert all(row.agrees for row in rows)
    assert all(row.holds for row in rows)
    with pytest.raises(CertificateError):
        det_inequalities(build_certificate(pv("1/3"), pv("1/3"), Fraction(1, 12)))


def test_certificate_bound_requires_feasibility():
    assert certificate_bound(build_certificate(pv("1/3,1/3"), pv("1/3,1/3"))) == Fraction(1, 9)
    with pytest.raises(CertificateError):
        certificate_bound(build_certificate(pv("3/5,1/3"), pv("1/2,1/3"), Fraction(1, 100)))


def test_swapped_sides_are_reported():
    report = check_certificate(build_certificate(pv("1/2,1/4"), pv("1/2,1/3")))
    assert not report.swapped
    report = check_certificate(build_certificate(pv("1/3,1/4"), pv("1/2,1/4")))
    assert report.swapped
    assert report.pv1[0] == Fraction(1, 2)


def test_coordinate_identities():
    residuals = coordinate_identity_residuals(pv("1/2,1/3,3/5"), pv("1/4,2/3,1/5"))
    assert residuals.within(1e-12)


def test_single_coordinate_dual_slack_is_psd():
    for p1, p2 in ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 5)), (Fraction(4, 5), Fraction(2, 3))):
        dual = single_coordinate_dual(p1, p2)
        s = dual.slack_matrix()
        assert np.allclose(s, s.T)
        assert np.linalg.eigvalsh(s).min() >= -1e-12
        assert dual.alpha + dual.beta == ExactSurd.root(p1 * p2)


def test_report_serializes_surds_as_strings():
    dumped = verify_dual_feasibility(pv("1/2,1/3"), pv("1/3,1/4")).model_dump()
    assert dumped["schema"] == 1
    assert dumped["alpha"] == "0 + 1/2*sqrt(p1p2)"
    assert dumped["pv1"] == ["1/2", "1/3"]


def test_objective_check_rejects_alpha_beta_off_the_root():
    report = check_certificate(build_certificate(pv("1/3,1/4"), pv("1/3,1/4"), alpha=1, beta=1))
    objective = next(c for c in report.checks if c.name == "objective")
    assert not objective.passed
    assert not report.feasible
    assert report.bound is None


def test_objective_check_accepts_an_uneven_split():
    a = pv("1/3,1/4")
    d = Fraction(1, 9)
    cert = build_certificate(a, a, alpha=ExactSurd.root(d, Fraction(1, 4)), beta=ExactSurd.root(d, Fraction(3, 4)))
    objective = next(c for c in check_certificate(cert).checks if c.name == "objective")
    assert objective.passed


class _LeakyBlocks(CoordinateBlocks):
    def a_matrix(self, i, j):
        ratio = self.p(j) / self.q(i)
        return ((1 - ratio, ratio), (Fraction(1, 2), Fraction(1, 2)))


def test_gamma_support_holds_for_the_closed_form_blocks():
    cert = build_certificate(pv("1/3,1/4"), pv("1/3,1/4"))
    assert gamma_support_check(cert).passed


def test_gamma_support_catches_mass_on_intersecting_pairs():
    a = pv("1/3,1/4")
    cert = build_certificate(a, a)
    blocks = [_LeakyBlocks(ell, p, p) for ell, p in enumerate(a.entries, start=1)]
    result = gamma_support_check(cert, blocks)
    assert not result.passed
    assert "intersecting" in result.detail
