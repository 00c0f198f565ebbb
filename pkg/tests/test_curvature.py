from __future__ import annotations

import itertools

import sympy as sp

from transsasakian.curvature import ricci, riemann, star_ricci
from transsasakian.manifold import VectorField, obj_array

e = [VectorField.basis(i) for i in range(3)]


def g_minus_eta_eta(scale):
    return [[scale * int(i == j and i != 2) for j in range(3)] for i in range(3)]


def first_slot_trace(session):
    """``1/2 sum_k g(phi R(e_k, X) phi Y, e_k)``: the other reading of the trace."""
    R, cs, M = session.K.R, session.cs, session.M
    out = obj_array((3, 3))
    for i, j in itertools.product(range(3), range(3)):
        total = 0
        for k in range(3):
            w = cs.phi_of(R(e[k], e[i], cs.phi_of(e[j])))
            total += M.g(w, e[k])
        out[i, j] = sp.expand(total / 2)
    return out


def test_example_riemann_entries(example):
    R = example.K.R
    assert R(e[0], e[1], e[0]) == VectorField((0, 4, 0))
    assert R(e[0], e[1], e[1]) == VectorField((-4, 0, 0))
    assert R(e[0], e[2], e[0]) == VectorField((0, 0, 4))
    assert R(e[0], e[2], e[2]) == VectorField((-4, 0, 0))
    assert R(e[1], e[2], e[1]) == VectorField((0, 0, 4))
    assert R(e[1], e[2], e[2]) == VectorField((0, -4, 0))


def test_example_is_space_form(example):
    # R(X,Y)Z = -4 (g(Y,Z)X - g(X,Z)Y)
    R, M = example.K.R, example.M
    for i, j, k in itertools.product(range(3), repeat=3):
        expected = (e[i] * M.g(e[j], e[k]) - e[j] * M.g(e[i], e[k])) * -4
        assert R(e[i], e[j], e[k]) == expected


def test_example_ricci_and_scalar(example):
    K = example.K
    assert K.S.comps.tolist() == [[-8, 0, 0], [0, -8, 0], [0, 0, -8]]
    assert K.r == -24


def test_s3_ricci_and_scalar(s3):
    assert s3.K.S.comps.tolist() == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    assert s3.K.r == 6


def test_star_ricci_values(example, s3, flat):
    assert example.K.S_star.comps.tolist() == g_minus_eta_eta(-4)
    assert s3.K.S_star.comps.tolist() == g_minus_eta_eta(1)
    assert flat.K.S_star.is_zero()


def test_first_slot_trace_reading_fails_on_s3(s3):
    # this reading gives -1/2 (g - eta x eta) on the round sphere, so it
    # cannot satisfy the closed form S* = (alpha^2 - beta^2 + ...)(g - eta x eta)
    assert first_slot_trace(s3).tolist() == g_minus_eta_eta(sp.Rational(-1, 2))
    assert first_slot_trace(s3).tolist() != s3.K.S_star.comps.tolist()


def test_riemann_symmetries(fixture_session):
    R, M = fixture_session.K.R, fixture_session.M
    for i, j, k, l in itertools.product(range(3), repeat=4):
        Rijkl = M.g(R(e[i], e[j], e[k]), e[l])
        assert sp.expand(Rijkl + M.g(R(e[j], e[i], e[k]), e[l])) == 0
        assert sp.expand(Rijkl + M.g(R(e[i], e[j], e[l]), e[k])) == 0
        assert sp.expand(Rijkl - M.g(R(e[k], e[l], e[i]), e[j])) == 0


def test_ricci_recomputes_from_riemann(fixture_session):
    M, C = fixture_session.M, fixture_session.C
    R = riemann(M, C)
    S, Q, r = ricci(M, C, R)
    assert (S - fixture_session.K.S).is_zero()
    assert star_ricci(M, C, fixture_session.cs.phi, R).comps.tolist() == \
        fixture_session.K.S_star.comps.tolist()
