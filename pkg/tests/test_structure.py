from __future__ import annotations

import pytest
import sympy as sp

from transsasakian.manifold import FrameManifold
from transsasakian.report import FAIL, PASS
from transsasakian.scalar import COORDS
from transsasakian.structure import (ContactStructure, DetectionError, detect_trans_sasakian,
                                     identity_suite_constant, identity_suite_general,
                                     trans_sasakian_report, validate_almost_contact)
from transsasakian.connection import levi_civita
from transsasakian.curvature import curvature_bundle

from conftest import TYPES

x, y, z = COORDS
E2 = sp.exp(2 * z)
PHI = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]


def warped():
    return FrameManifold.chart([[E2, 0, 0], [0, E2, 0], [0, 0, 1]])


@pytest.mark.parametrize("name", sorted(TYPES))
def test_detected_type(name, request):
    s = request.getfixturevalue(name)
    assert (s.ts.alpha, s.ts.beta) == TYPES[name]
    assert s.ts.detected and s.ts.constant and not s.ts.defect_xi
    assert all(item.status == PASS for item in trans_sasakian_report(s.cs, s.C, s.ts).items)


def test_kind_names(example, s3, flat):
    assert example.ts.kind == "beta-Kenmotsu"
    assert s3.ts.kind == "alpha-Sasakian"
    assert flat.ts.kind == "cosymplectic"


def test_almost_contact_passes(fixture_session):
    assert validate_almost_contact(fixture_session.cs).passed


def test_perturbed_phi_breaks_compatibility():
    cs = ContactStructure.from_rows(warped(), [[0, 2, 0], [-1, 0, 0], [0, 0, 0]], [0, 0, 1])
    rep = validate_almost_contact(cs)
    item = rep.item("almost-contact.compatible-metric")
    assert item.status == FAIL
    assert ["11", "3"] in item.residual_components
    assert rep.item("almost-contact.phi-squared").status == FAIL
    assert rep.item("almost-contact.eta-xi").status == PASS


def test_supplied_eta_disagreement_flagged():
    cs = ContactStructure.from_rows(warped(), PHI, [0, 0, 1], eta=[0, 0, 2])
    assert validate_almost_contact(cs).item("almost-contact.eta-metric-dual").status == FAIL
    assert cs.eta.comps.tolist() == [0, 0, 1]


def test_geodesic_reeb_field_required():
    # xi = e1 on the warped frame: nabla_xi xi = 2 e3, not trans-Sasakian
    M = warped()
    cs = ContactStructure.from_rows(M, [[0, 0, 0], [0, 0, 1], [0, -1, 0]], [1, 0, 0])
    assert validate_almost_contact(cs).passed
    ts = detect_trans_sasakian(cs, levi_civita(M))
    assert not ts.detected


def test_heisenberg_is_alpha_sasakian():
    # e1 = d/dx, e2 = d/dy + x d/dz, e3 = d/dz with [e1, e2] = e3
    M = FrameManifold.chart([[1, 0, 0], [0, 1, x], [0, 0, 1]])
    cs = ContactStructure.from_rows(M, PHI, [0, 0, 1])
    ts = detect_trans_sasakian(cs, levi_civita(M))
    assert ts.detected and (abs(ts.alpha), ts.beta) == (sp.Rational(1, 2), 0)


def test_detection_needs_a_non_characteristic_leg():
    M = warped()
    cs = ContactStructure.from_rows(M, [[0, 0, 0], [0, 0, 0], [0, 0, 0]], [0, 0, 1])
    with pytest.raises(DetectionError):
        detect_trans_sasakian(cs, levi_civita(M))


def test_identity_suites_pass(fixture_session):
    s = fixture_session
    assert identity_suite_constant(s.cs, s.C, s.K, s.ts.alpha, s.ts.beta).passed
    assert identity_suite_general(s.cs, s.C, s.K, s.ts.alpha, s.ts.beta).passed


def test_identity_suites_reject_wrong_type(example):
    s = example
    rep = identity_suite_constant(s.cs, s.C, s.K, sp.Integer(1), s.ts.beta)
    assert not rep.passed


def test_constant_suite_refuses_non_constant_functions(example):
    s = example
    with pytest.raises(ValueError):
        identity_suite_constant(s.cs, s.C, s.K, x, s.ts.beta)


def test_s3_structure_from_scratch():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in {(0, 1): [0, 0, 2], (1, 2): [2, 0, 0], (2, 0): [0, 2, 0]}.items():
        c[i][j] = v
        c[j][i] = [-t for t in v]
    M = FrameManifold.lie(c)
    cs = ContactStructure.from_rows(M, PHI, [0, 0, 1])
    C = levi_civita(M)
    ts = detect_trans_sasakian(cs, C)
    assert (ts.alpha, ts.beta) == (1, 0)
    assert curvature_bundle(M, C, cs.phi).r == 6
