"""Suite orchestration: build the geometry from a manifest and run checks in order."""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from . import oracle, scalar
from .connection import (levi_civita, lie_derivative_connection,
                         lie_derivative_metric, nabla)
from .curvature import curvature_bundle
from .manifest import SUITES, Manifest
from .manifold import DIM, IDX, FrameManifold, VectorField, lie_bracket
from .report import (FAIL, CheckItem, CheckReport, not_applicable,
                     residual_item, texts)
from .soliton import (HypothesisViolated, SolitonProblem, check_theorem_3_1, check_theorem_3_2,
                      soliton_item, soliton_residual)
from .structure import (ContactStructure, DetectionError, detect_trans_sasakian,
                        identity_suite_constant, identity_suite_general, trans_sasakian_report,
                        validate_almost_contact)

ORDER = SUITES + ("oracle",)
_EXAMPLE = "worked example"


def build_manifold(m: Manifest) -> FrameManifold:
    metric = [list(row) for row in m.metric] if m.metric is not None else None
    if m.mode == "chart":
        return FrameManifold.chart([list(r) for r in m.frame], metric=metric, base_point=m.base_point)
    c = [[[0] * DIM for _ in IDX] for _ in IDX]
    for pq, vals in m.brackets.items():
        i, j = int(pq[0]) - 1, int(pq[1]) - 1
        for k in IDX:
            c[i][j][k] = vals[k]
            c[j][i][k] = -vals[k]
    return FrameManifold.lie(c, metric=metric, base_point=m.base_point)


def reference_item(identity_id: str, paper_ref: str, computed, published) -> CheckItem:
    """Compare computed values with published ones; a mismatch is a reported conflict."""
    computed = [scalar.canonical(c) for c in computed]
    published = [scalar.canonical(p) for p in published]
    agree = all(scalar.is_zero(c - p) for c, p in zip(computed, published))
    values = texts({"computed": computed, "published": published})
    if agree:
        return CheckItem(identity_id, paper_ref, "pass", values=values)
    diffs = [[f"{k + 1}", scalar.to_text(c - p)] for k, (c, p) in enumerate(zip(computed, published))
             if not scalar.is_zero(c - p)]
    return CheckItem(identity_id, paper_ref, FAIL, diffs,
                     ["computed value differs from the published value"], True, values)


class Session:
    """Lazily computed geometry for one manifest."""

    def __init__(self, manifest: Manifest, seed: int = 0):
        self.m = manifest
        self.seed = seed

    @cached_property
    def M(self):
        return build_manifold(self.m)

    @cached_property
    def cs(self):
        return ContactStructure.from_rows(self.M, self.m.phi, self.m.xi, self.m.eta)

    @cached_property
    def C(self):
        return levi_civita(self.M)

    @cached_property
    def K(self):
        return curvature_bundle(self.M, self.C, self.cs.phi)

    @cached_property
    def ts(self):
        return detect_trans_sasakian(self.cs, self.C)

    @cached_property
    def problem(self):
        if self.m.V is None:
            return None
        return SolitonProblem(self.m.soliton, VectorField(self.m.V), self.m.p, self.m.lam)

    # -- suites -----------------------------------------------------------

    def almost_contact(self) -> CheckReport:
        return validate_almost_contact(self.cs)

    def connection(self) -> CheckReport:
        M, C = self.M, self.C
        rep = CheckReport("connection")
        E = M.frame_basis()
        res = {}
        for i, j, k in itertools.combinations(IDX, 3):
            jac = (lie_bracket(M, lie_bracket(M, E[i], E[j]), E[k])
                   + lie_bracket(M, lie_bracket(M, E[j], E[k]), E[i])
                   + lie_bracket(M, lie_bracket(M, E[k], E[i]), E[j]))
            for m in IDX:
                res[f"{i + 1}{j + 1}{k + 1}.{m + 1}"] = jac[m]
        rep.add(residual_item("connection.jacobi", "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0", res))
        tors = C.torsion_defect()
        rep.add(residual_item("connection.torsion-free", "nabla_X Y - nabla_Y X - [X,Y] = 0",
                              {f"{i + 1}{j + 1}.{k + 1}": tors[i, j, k] for i, j, k in np.ndindex(tors.shape)}))
        comp = C.compatibility_defect()
        rep.add(residual_item(
            "connection.metric-compatible",
            "X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z) (Koszul formula)",
            {f"{i + 1}{j + 1}{k + 1}": comp[i, j, k] for i, j, k in np.ndindex(comp.shape)}))

        ref = self.m.reference
        for pq in ("12", "13", "23"):
            key = f"bracket.{pq}"
            if key in ref:
                i, j = int(pq[0]) - 1, int(pq[1]) - 1
                br = lie_bracket(M, E[i], E[j])
                rep.add(reference_item(f"reference.{key}", f"{_EXAMPLE}: bracket [e{pq[0]},e{pq[1]}]",
                                       br.components, ref[key]))
        for i, j in itertools.product(IDX, IDX):
            key = f"connection.{i + 1}{j + 1}"
            if key in ref:
                rep.add(reference_item(f"reference.{key}",
                                       f"{_EXAMPLE}: connection table nabla_e{i + 1} e{j + 1}",
                                       C.gamma[i, j, :], ref[key]))
        return rep

    def curvature(self) -> CheckReport:
        M, K = self.M, self.K
        R = K.R.comps
        G = M.metric
        rep = CheckReport("curvature")

        def lowered(m, i, j, k):
            # g(R(e_i, e_j) e_k, e_m)
            return sum(R[n, i, j, k] * G[n, m] for n in IDX)

        rep.add(residual_item("curvature.antisymmetry", "R(X,Y)Z = -R(Y,X)Z",
                              {f"{i + 1}{j + 1}{k + 1}.{m + 1}": R[m, i, j, k] + R[m, j, i, k]
                               for m, i, j, k in np.ndindex(R.shape)}))
        rep.add(residual_item("curvature.pair-skew", "g(R(X,Y)Z,W) = -g(R(X,Y)W,Z)",
                              {f"{i + 1}{j + 1}{k + 1}{m + 1}": lowered(m, i, j, k) + lowered(k, i, j, m)
                               for m, i, j, k in np.ndindex(R.shape)}))
        rep.add(residual_item("curvature.first-bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
                              {f"{i + 1}{j + 1}{k + 1}.{m + 1}": R[m, i, j, k] + R[m, j, k, i] + R[m, k, i, j]
                               for m, i, j, k in np.ndindex(R.shape)}))
        S = K.S.comps
        rep.add(residual_item("curvature.ricci-symmetric", "S(X,Y) = S(Y,X)",
                              {f"{i + 1}{j + 1}": S[i, j] - S[j, i] for i, j in np.ndindex(S.shape)},
                              values=texts({"S diagonal": [S[i, i] for i in IDX], "r": K.r})))
        Q = K.Q.comps
        rep.add(residual_item("curvature.ricci-operator", "S(X,Y) = g(QX,Y)",
                              {f"{i + 1}{j + 1}": S[i, j] - sum(Q[m, i] * G[m, j] for m in IDX)
                               for i, j in np.ndindex(S.shape)}))
        trace = sum(M.metric_inverse[i, j] * S[i, j] for i in IDX for j in IDX)
        rep.add(residual_item("curvature.scalar-trace", "r = sum_i S(e_i, e_i)", {"": K.r - trace}))
        if K.S_star is not None:
            Ss = K.S_star.comps
            xi = self.cs.xi
            rep.add(residual_item("curvature.star-ricci-xi", "S*(xi, xi) = 0 since phi xi = 0",
                                  {"": K.S_star(xi, xi)},
                                  values=texts({"S* diagonal": [Ss[i, i] for i in IDX]})))

        ref = self.m.reference
        for i, j, k in itertools.product(IDX, IDX, IDX):
            key = f"riemann.{i + 1}{j + 1}{k + 1}"
            if key in ref:
                rep.add(reference_item(f"reference.{key}",
                                       f"{_EXAMPLE}: curvature table R(e{i + 1},e{j + 1})e{k + 1}",
                                       R[:, i, j, k], ref[key]))
        if "ricci.diag" in ref:
            rep.add(reference_item("reference.ricci.diag", f"{_EXAMPLE}: Ricci table S(e_i,e_i)",
                                   [S[i, i] for i in IDX], ref["ricci.diag"]))
        if "scalar" in ref:
            rep.add(reference_item("reference.scalar", f"{_EXAMPLE}: r = sum_i S(e_i,e_i)",
                                   [K.r], ref["scalar"]))
        return rep

    def trans_sasakian(self) -> CheckReport:
        try:
            ts = self.ts
        except DetectionError as exc:
            rep = CheckReport("trans-sasakian")
            rep.add(CheckItem("trans-sasakian.detect", "nabla_X xi = -alpha phi X + beta(X - eta(X)xi)",
                              FAIL, notes=[str(exc)]))
            return rep
        rep = trans_sasakian_report(self.cs, self.C, ts)
        if "type" in self.m.reference:
            rep.add(reference_item("reference.type", f"{_EXAMPLE}: trans-Sasakian type (alpha, beta)",
                                   [ts.alpha, ts.beta], self.m.reference["type"]))
        return rep

    def identities(self) -> CheckReport:
        rep = CheckReport("identities")
        ts = self._detected("identities", rep)
        if ts is None:
            return rep
        if ts.constant:
            rep.extend(identity_suite_constant(self.cs, self.C, self.K, ts.alpha, ts.beta).items)
        else:
            rep.add(not_applicable("identities.constant", "constant structure functions",
                                   "alpha or beta is not constant; constant-coefficient forms skipped"))
        rep.extend(identity_suite_general(self.cs, self.C, self.K, ts.alpha, ts.beta).items)
        return rep

    def soliton(self) -> CheckReport:
        rep = CheckReport("soliton")
        P = self.problem
        if P is None:
            rep.add(not_applicable("soliton.verdict", "1/2 L_V g + S + lambda g = 0",
                                   "manifest declares no potential field V"))
            return rep
        M, C, K = self.M, self.C, self.K
        verdict = soliton_residual(M, C, K, self.cs, P)
        ref_lambda = self.m.reference.get("lambda")
        rep.add(soliton_item(verdict, P, ref_lambda[0] if ref_lambda else None))

        h = lie_derivative_metric(M, C, P.V)
        if "lie_g.diag" in self.m.reference:
            rep.add(reference_item("reference.lie_g.diag", f"{_EXAMPLE}: (L_V g)(e_i, e_i)",
                                   [h.comps[i, i] for i in IDX], self.m.reference["lie_g.diag"]))
        # commutation formula between nabla L_V g and L_V nabla
        Dh = nabla(C, h).comps
        A = lie_derivative_connection(M, C, P.V)
        G = M.metric

        def gA(i, j, k):
            return sum(A.comps[m, i, j] * G[m, k] for m in IDX)

        res = {f"{i + 1}{j + 1}{k + 1}": Dh[i, j, k] - gA(i, j, k) - gA(i, k, j)
               for i, j, k in itertools.product(IDX, IDX, IDX)}
        rep.add(residual_item("soliton.commutation",
                              "(nabla_X L_V g)(Y,Z) = g((L_V nabla)(X,Y),Z) + g((L_V nabla)(X,Z),Y)", res))
        rep.add(residual_item("soliton.lie-connection-symmetric",
                              "(L_V nabla)(X,Y) = (L_V nabla)(Y,X)",
                              {f"{i + 1}{j + 1}.{m + 1}": A.comps[m, i, j] - A.comps[m, j, i]
                               for m, i, j in np.ndindex(A.comps.shape)}))
        return rep

    def _detected(self, suite: str, rep: CheckReport):
        try:
            ts = self.ts
        except DetectionError as exc:
            rep.add(CheckItem(f"{suite}.prerequisite", "trans-Sasakian detection", FAIL, notes=[str(exc)]))
            return None
        if not ts.detected:
            rep.add(CheckItem(f"{suite}.prerequisite", "trans-Sasakian detection", FAIL,
                              notes=["structure equations do not hold; manifold is not trans-Sasakian"]))
            return None
        return ts

    def _theorem(self, suite: str, fn, ref: str) -> CheckReport:
        rep = CheckReport(suite)
        P = self.problem
        if P is None:
            rep.add(not_applicable(f"{suite}.hypotheses", ref, "manifest declares no potential field V"))
            return rep
        try:
            ts = self.ts
            return fn(self.M, self.C, self.K, self.cs, P, ts)
        except (HypothesisViolated, DetectionError) as exc:
            rep.add(not_applicable(f"{suite}.hypotheses", ref, str(exc)))
            if P.kind == "ricci" and suite == "theorem-3-1":
                verdict = soliton_residual(self.M, self.C, self.K, self.cs, P)
                rep.items[-1].values = texts({"lambda_trace": verdict.lambda_trace,
                                              "lambda_pointwise": list(verdict.lambda_pointwise)})
            return rep

    def theorem_3_1(self) -> CheckReport:
        return self._theorem("theorem-3-1", check_theorem_3_1,
                             "Ricci soliton on trans-Sasakian 3-manifold with constant alpha, beta")

    def theorem_3_2(self) -> CheckReport:
        return self._theorem("theorem-3-2", check_theorem_3_2,
                             "*-conformal Ricci soliton, constant alpha != 0: r = (1 - beta^2/alpha^2)(p/2 + 1/3 - lambda + 4 alpha^2)")

    def oracle(self) -> CheckReport:
        rep = CheckReport("oracle")
        ref_c = "finite-difference Christoffel symbols transformed to the frame"
        ref_r = "finite-difference Riemann tensor transformed to the frame"
        if self.M.mode != "chart":
            rep.add(not_applicable("oracle.connection", ref_c, "oracle needs chart mode"))
            rep.add(not_applicable("oracle.riemann", ref_r, "oracle needs chart mode"))
            return rep
        pts = oracle.oracle_points(8, self.seed)
        err = oracle.compare(self.M, self.C.gamma, self.K.R.comps, pts)
        for key, ref, tol in (("connection", ref_c, oracle.CONNECTION_TOL),
                              ("riemann", ref_r, oracle.RIEMANN_TOL)):
            ok = err[key] <= tol
            rep.add(CheckItem(f"oracle.{key}", ref, "pass" if ok else FAIL,
                              values={"max_rel_error": f"{err[key]:.3e}", "tolerance": f"{tol:g}",
                                      "points": len(pts), "seed": self.seed}))
        return rep


def run(manifest: Manifest, suites=None, *, oracle_check: bool = False, seed: int = 0) -> list[CheckReport]:
    """Run the requested suites (default: the manifest's list) in dependency order."""
    requested = set(suites or manifest.suites)
    if "all" in requested:
        requested = set(SUITES)
    unknown = requested - set(ORDER)
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    if oracle_check:
        requested.add("oracle")
    session = Session(manifest, seed)
    return [getattr(session, name.replace("-", "_"))() for name in ORDER if name in requested]
