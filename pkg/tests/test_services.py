from fractions import Fraction

import pytest

from core.exceptions import CertificateError, OperationError, PreconditionError, ValidationError
from core.measure import canonical_star
from core.schema import FeasibilityReport, RunConfig
from services import VerificationService
from services.base import BaseService


def config(**kwargs):
    return RunConfig(**kwargs)


def test_base_service_wraps_foreign_errors():
    with pytest.raises(OperationError):
        BaseService()._run(lambda: 1 / 0, "Division")


def test_base_service_passes_toolkit_errors():
    def fail():
        raise CertificateError("infeasible")

    with pytest.raises(CertificateError):
        BaseService()._run(fail)


def test_vectors_broadcast_and_default_second_side():
    service = VerificationService()
    pv1, pv2 = service.vectors(config(command="oracle", pv1=[Fraction(1, 2)], n=3))
    assert pv1.entries == (Fraction(1, 2),) * 3
    assert pv2 == pv1


def test_vector_errors():
    service = VerificationService()
    with pytest.raises(ValidationError):
        service.vectors(config(command="oracle"))
    with pytest.raises(ValidationError):
        service.vectors(config(command="oracle", pv1=[Fraction(1, 2)], pv2=[Fraction(1, 2), Fraction(1, 3)]))
    with pytest.raises(ValidationError):
        service.vectors(config(command="oracle", pv1=[Fraction(1, 2), Fraction(1, 3)], n=3))


def test_load_family_formats(family_file):
    service = VerificationService()
    bare = service.load_family(family_file([[1], [1, 2]], "bare.json"), 2)
    wrapped = service.load_family(family_file([[1], [1, 2]], "wrapped.json", n=2), 2)
    assert bare == wrapped == canonical_star(2, 1)


def test_load_family_errors(family_file):
    service = VerificationService()
    with pytest.raises(ValidationError):
        service.load_family(family_file([[1]], "small.json", n=1), 2)
    with pytest.raises(ValidationError):
        service.load_family(None, 2)


def test_certify_auto_eps2():
    third = [Fraction(1, 3)] * 3
    code, report = VerificationService().certify(config(command="certify", pv1=third, eps2="auto"))
    assert code == 0
    assert report.eps2 == Fraction(1, 12)


def test_audit_rejects_out_of_range_eps2(family_file):
    path = family_file([[1]], n=2)
    run = config(command="audit", pv1=[Fraction(1, 2), Fraction(1, 2)], family1_path=path, family2_path=path,
                 eps2="1/2")
    with pytest.raises(CertificateError):
        VerificationService().audit(run)


def test_audit_returns_the_failing_certificate(family_file):
    path = family_file([[1]], n=2)
    run = config(command="audit", pv1=[Fraction(1, 2), Fraction(1, 2)], family1_path=path, family2_path=path,
                 eps2="1/4")
    code, report = VerificationService().audit(run)
    assert code == 1
    assert isinstance(report, FeasibilityReport)
    assert not report.feasible
    assert [b.z for b in report.failing_blocks] == [[1, 2]]


def test_audit_keeps_each_family_on_its_own_side(family_file):
    # p1 < p2 with p2 > 1/2: the reduced certificate is built over swapped sides
    first = family_file([[1, 2]], "first.json", n=2)
    second = family_file([[1]], "second.json", n=2)
    run = config(command="audit", pv1=[Fraction(1, 2), Fraction(1, 4)], pv2=[Fraction(3, 5), Fraction(1, 3)],
                 family1_path=first, family2_path=second)
    code, report = VerificationService().audit(run)
    assert code == 0
    assert report.certificate.swapped
    assert report.family1 == [[1, 2]]
    assert report.family2 == [[1]]
    assert report.measure1 == Fraction(1, 16)
    assert report.measure2 == Fraction(2, 9)
    assert report.gap_squared == Fraction(1, 12) - Fraction(1, 72)
    assert abs(report.s_dot_x - report.block_path_s_dot_x) < 1e-9
    assert report.chain is not None


def test_unknown_probe_and_command():
    service = VerificationService()
    with pytest.raises(ValidationError):
        service.probe(config(command="probe", probe="nope", pv1=[Fraction(1, 3)]))
    with pytest.raises(PreconditionError):
        service.dispatch(config(command="vectors"))
