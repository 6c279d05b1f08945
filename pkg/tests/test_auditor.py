import pytest

from hallq import reps
from hallq.auditor import (CERT_IDS, Certificate, audit, certify, in_D_r,
                           survey_conditions, tachikawa_check)
from hallq.errors import UnsupportedCategoryError, ValidationError
from hallq.fixtures import load_fixture


def test_in_d_r():
    l2 = load_fixture("l2")
    s1, s2 = reps.simple(l2, 2, "1"), reps.simple(l2, 2, "2")
    assert not in_D_r(s1, 1)
    assert in_D_r(reps.direct_sum([s1, s2]), 1)
    assert not in_D_r(reps.direct_sum([s1, s2]), 2)
    assert not in_D_r(reps.projective(l2, 2, "1"), 1)
    with pytest.raises(ValidationError):
        in_D_r(s1, 0)


def test_chain_subring_passes():
    rep = audit(load_fixture("l3"), 1, 2, 4, mode="subring")
    assert rep.passed
    assert rep.certificate is None
    assert rep.pairs_checked > 0


def test_kronecker_subring_fails_with_certificate():
    rep = audit(load_fixture("kronecker"), 1, 2, 5, mode="subring")
    assert not rep.passed
    cert = rep.certificate
    assert cert is not None
    assert cert.s_violating == 1
    # the smallest violation: semisimple times semisimple hits an
    # indecomposable regular module of dimension vector (2, 2)
    assert cert.violating.dim_vector() == (2, 2)
    assert cert.count >= 1
    assert cert.replay()
    assert cert.replay(twist=True)


def test_zigzag_subring_fails_with_certificate():
    rep = audit(load_fixture("zigzag_a4"), 1, 2, 4, mode="subring")
    assert not rep.passed
    cert = rep.certificate
    assert cert.violating.dim_vector() == (1, 1, 1, 1)
    assert cert.replay()


def test_one_sided_ideal_asymmetry():
    v = load_fixture("v42")
    lam = load_fixture("lambda42")
    assert audit(v, 1, 2, 4, mode="left-ideal").passed
    assert not audit(v, 1, 2, 4, mode="right-ideal").passed
    assert audit(lam, 1, 2, 4, mode="right-ideal").passed
    assert not audit(lam, 1, 2, 4, mode="left-ideal").passed


def test_audit_is_deterministic():
    a = audit(load_fixture("kronecker"), 1, 2, 5, mode="subring")
    b = audit(load_fixture("kronecker"), 1, 2, 5, mode="subring")
    assert a.certificate.to_json() == b.certificate.to_json()
    assert a.pairs_checked == b.pairs_checked


def test_pass_monotone_in_bound():
    l4 = load_fixture("l4")
    for bound in (3, 4, 5):
        assert audit(l4, 1, 2, bound, mode="ideal").passed


def test_invalid_mode_rejected():
    with pytest.raises(ValidationError):
        audit(load_fixture("l2"), 1, 2, 3, mode="bogus")


def test_cyclic_quiver_audits_both_ways():
    q6 = load_fixture("q6")
    rep = audit(q6, 1, 2, 4, mode="subring")
    assert not rep.passed
    # restricting to nilpotent classes defers the violation to dimension 5
    rep_nil = audit(q6, 1, 2, 5, mode="subring", nilpotent_only=True)
    assert not rep_nil.passed
    assert rep_nil.certificate.violating.dim_vector() == (4, 1)


@pytest.mark.parametrize("cert_id", CERT_IDS)
def test_named_certificates_verify(cert_id):
    cert = certify(cert_id)
    assert cert.count >= 1
    assert cert.s_violating <= cert.r
    assert cert.check_memberships()
    assert cert.replay()
    assert cert.replay(twist=True)


@pytest.mark.parametrize("cert_id", CERT_IDS)
def test_certificates_transport_to_opposite(cert_id):
    op = certify(cert_id).transport_opposite()
    assert op.replay()


def test_certificate_json_roundtrip():
    cert = certify("2.3")
    back = Certificate.from_json(cert.to_json())
    assert back.to_json() == cert.to_json()
    assert back.replay()


def test_unknown_certificate_id():
    with pytest.raises(ValidationError):
        certify("9.9")


def test_socle_padding_certificate_is_level_two():
    cert = certify("2.1")
    assert cert.mode == "left-ideal"
    assert cert.r == 2
    assert in_D_r(cert.right, 2)
    assert cert.s_violating == 2


def test_local_endomorphism_certificates():
    c6 = certify("2.6")
    assert reps.s_of(c6.violating) == 1
    assert len(reps.end_basis(c6.violating)) == 4
    c7 = certify("2.7")
    assert reps.s_of(c7.violating) == 1
    assert len(reps.end_basis(c7.violating)) == 6


def test_survey_conditions():
    v = survey_conditions(load_fixture("v42"), 2, 4)
    assert v.holds("simple_socle")
    assert v.holds("simple_top_or_socle")
    lam = survey_conditions(load_fixture("lambda42"), 2, 4)
    assert lam.holds("simple_top")
    assert not lam.holds("simple_socle")
    kr = survey_conditions(load_fixture("kronecker"), 2, 5)
    assert not kr.holds("simple_top_or_socle")
    assert kr.results["simple_top_or_socle"]["witness"] is not None
    with pytest.raises(UnsupportedCategoryError):
        survey_conditions(load_fixture("q8"), 2, 3)


def test_tachikawa_check():
    ok = tachikawa_check(load_fixture("l4"), 2, 4)
    assert ok.passed and ok.survey_agrees and ok.audit_agrees
    ok2 = tachikawa_check(load_fixture("v53"), 2, 4)
    assert ok2.passed
    bad = tachikawa_check(load_fixture("d4_in"), 2, 4)
    assert not bad.passed
    assert bad.survey_agrees and bad.audit_agrees
    with pytest.raises(UnsupportedCategoryError):
        tachikawa_check(load_fixture("q6"), 2, 3)


def test_audit_report_json_shape():
    rep = audit(load_fixture("l2"), 1, 2, 3, mode="subring")
    data = rep.to_json()
    assert data["verdict"] == "PASS"
    assert data["certificate"] is None
    assert data["pairs_checked"] == rep.pairs_checked
    assert data["quiver"] == "l2"
