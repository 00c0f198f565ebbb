"""Acceptance criteria, one test each; results are summarized at the end of the run."""

from __future__ import annotations

import functools
import io
import json
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest
import sympy as sp
from sympy.core.cache import clear_cache

from transsasakian import scalar
from transsasakian.cli import fixture_path, main
from transsasakian.manifest import load_manifest
from transsasakian.manifold import VectorField
from transsasakian.report import PASS
from transsasakian.runner import Session, run
from transsasakian.soliton import (HypothesisViolated, SolitonProblem, check_theorem_3_2,
                                   scalar_curvature_formula, soliton_residual)

import test_properties
from conftest import ACCEPTANCE, FIXTURES, TYPES

e1, e2, e3 = (VectorField.basis(i) for i in range(3))


TIMINGS: dict[int, float] = {}


def criterion(n: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            ACCEPTANCE[n] = (title, False)
            fn(*args, **kwargs)
            if n in TIMINGS:
                title_ = f"{title} [{TIMINGS[n]:.2f} s]"
            else:
                title_ = title
            ACCEPTANCE[n] = (title_, True)
        return inner
    return wrap


def cold() -> None:
    """Drop memoized results so that timings start from scratch."""
    scalar._canonical.cache_clear()
    scalar._diff.cache_clear()
    clear_cache()


def fresh(name: str) -> Session:
    return Session(load_manifest(fixture_path(f"{name}.tsm")))


def json_report(*argv) -> tuple[int, dict]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["check", *argv, "--format", "json"])
    return code, json.loads(buf.getvalue())


def items(report: dict) -> dict:
    return {i["identity_id"]: i for s in report["suites"] for i in s["items"]}


@criterion(1, "example brackets and connection table match the published tables exactly, < 1 s")
def test_criterion_1_example_structure():
    cold()
    t0 = time.perf_counter()
    s = fresh("example")
    c, gamma = s.M.brackets, s.C.gamma
    elapsed = TIMINGS[1] = time.perf_counter() - t0
    assert list(c[0, 2]) == [-2, 0, 0] and list(c[1, 2]) == [0, -2, 0] and list(c[0, 1]) == [0, 0, 0]
    published = {k: v for k, v in s.m.reference.items() if k.startswith("connection.")}
    assert len(published) == 9
    for key, vals in published.items():
        i, j = int(key[-2]) - 1, int(key[-1]) - 1
        assert list(gamma[i, j]) == list(vals), key
    rep = run(s.m, ["connection"])[0]
    refs = [i for i in rep.items if i.identity_id.startswith("reference.")]
    assert len(refs) == 12 and all(i.status == PASS for i in refs)
    assert elapsed < 1.0, f"{elapsed:.2f} s"


@criterion(2, "example detected as type (0, -2) with symbolically zero structure residuals")
def test_criterion_2_example_type():
    s = fresh("example")
    ts = s.ts
    assert (ts.alpha, ts.beta) == (0, -2)
    assert ts.detected and not ts.defect_phi and not ts.defect_eta and not ts.defect_xi
    assert run(s.m, ["trans-sasakian"])[0].passed


@criterion(3, "example curvature audit: corrected entries, exactly six published-value conflicts, oracle agreement")
def test_criterion_3_curvature_audit():
    s = fresh("example")
    R, K = s.K.R, s.K
    assert R(e1, e2, e2) == e1 * -4 and R(e1, e3, e3) == e1 * -4 and R(e2, e3, e3) == e2 * -4
    assert R(e1, e2, e1) == e2 * 4 and R(e1, e3, e1) == e3 * 4 and R(e2, e3, e2) == e3 * 4
    assert K.S.comps.tolist() == (sp.eye(3) * -8).tolist() and K.r == -24

    code, report = json_report("example.tsm", "--suite", "all", "--oracle")
    assert code == 2
    found = items(report)
    conflicts = sorted(k for k, v in found.items() if v["conflicts_with_paper"])
    assert conflicts == ["reference.ricci.diag", "reference.riemann.121", "reference.riemann.131",
                         "reference.riemann.232", "reference.scalar", "soliton.ricci"]
    assert report["summary"]["conflicts_with_paper"] == 6
    failing = sorted(k for k, v in found.items() if v["status"] == "fail")
    assert failing == conflicts
    for key in ("oracle.connection", "oracle.riemann"):
        assert found[key]["status"] == "pass"
        assert float(found[key]["values"]["max_rel_error"]) <= 1e-5
        assert found[key]["values"]["points"] == 8


@criterion(4, "identity suites symbolically zero on all three fixtures, < 5 s total")
def test_criterion_4_identity_suites():
    cold()
    t0 = time.perf_counter()
    reports = {name: run(fresh(name).m, ["almost-contact", "trans-sasakian", "identities"])
               for name in FIXTURES}
    elapsed = TIMINGS[4] = time.perf_counter() - t0
    for name, reps in reports.items():
        by_suite = {r.suite: r for r in reps}
        for r in reps:
            assert r.passed, (name, r.suite)
            assert all(i.status == PASS for i in r.items), (name, r.suite)
        ts_item = by_suite["trans-sasakian"].item("trans-sasakian.nabla-phi")
        assert (int(ts_item.values["alpha"]), int(ts_item.values["beta"])) == TYPES[name]
        ids = {i.identity_id for i in by_suite["identities"].items}
        assert {"identities.xi-r", "identities.contracted-curvature", "identities.star-ricci"} <= ids
        assert len(by_suite["almost-contact"].items) == 7
    assert elapsed < 5.0, f"{elapsed:.2f} s"


@criterion(5, "soliton verdicts: flat dilation lambda = -1 with the parallel-case conclusion; example not a soliton")
def test_criterion_5_soliton_verdicts():
    flat = fresh("flat")
    reps = {r.suite: r for r in run(flat.m, ["soliton", "theorem-3-1"])}
    verdict = reps["soliton"].item("soliton.ricci")
    assert verdict.values["is_soliton"] is True and verdict.values["lambda"] == "-1"
    case_ii = reps["theorem-3-1"].item("theorem-3-1.case-ii")
    assert case_ii.status == PASS
    assert case_ii.values["nabla_xi V"] == ["0", "0", "1"]
    assert case_ii.values["lambda (= lambda g convention)"] == "1"

    ex = fresh("example")
    v = soliton_residual(ex.M, ex.C, ex.K, ex.cs, SolitonProblem("ricci", e3))
    assert not v.is_soliton
    assert v.lambda_pointwise == [10, 10, 8]
    assert v.lambda_trace == sp.Rational(28, 3)


@criterion(6, "trace-defined S* equals its closed form everywhere; S* = g - eta x eta on S^3")
def test_criterion_6_star_ricci():
    for name in FIXTURES:
        item = run(fresh(name).m, ["identities"])[0].item("identities.star-ricci")
        assert item.status == PASS, name
    s3 = fresh("s3")
    eta = s3.cs.eta.comps
    expected = [[s3.M.metric[i, j] - eta[i] * eta[j] for j in range(3)] for i in range(3)]
    assert s3.K.S_star.comps.tolist() == expected


@criterion(7, "*-conformal scalar-curvature checker: hypothesis guard, formula value, no soliton on S^3")
def test_criterion_7_theorem_plumbing():
    ex = fresh("example")
    P = SolitonProblem("star_conformal_ricci", e3, p=Fraction(2))
    with pytest.raises(HypothesisViolated):
        check_theorem_3_2(ex.M, ex.C, ex.K, ex.cs, P)
    with pytest.raises(HypothesisViolated):
        scalar_curvature_formula(0, 1, 2, 1)
    assert scalar_curvature_formula(1, 0, 2, 1) == sp.Rational(13, 3)
    s3 = fresh("s3")
    P = SolitonProblem("star_conformal_ricci", VectorField.zero(), p=Fraction(2))
    rep = check_theorem_3_2(s3.M, s3.C, s3.K, s3.cs, P)
    notes = " ".join(n for i in rep.items for n in i.notes)
    assert "no *-conformal soliton" in notes


@criterion(8, "randomized property suite, >= 50 samples per fixture, 100% pass, < 30 s")
def test_criterion_8_property_suite():
    test_properties.COUNTS.clear()
    cold()
    t0 = time.perf_counter()
    for name in FIXTURES:
        test_properties.test_torsion_free_and_metric_compatible(name)
        test_properties.test_riemann_symmetries_and_bianchi(name)
        test_properties.test_jacobi_identity(name)
        test_properties.test_lie_derivative_linearity(name)
    test_properties.test_killing_reeb_field_on_s3()
    elapsed = TIMINGS[8] = time.perf_counter() - t0
    counts = test_properties.COUNTS
    for prop in ("torsion-compatibility", "riemann-bianchi", "jacobi", "lie-linearity"):
        for name in FIXTURES:
            assert counts.get((prop, name), 0) >= 50, (prop, name, counts.get((prop, name)))
    assert counts.get(("killing", "s3"), 0) >= 50
    assert elapsed < 30.0, f"{elapsed:.2f} s"
