"""Soliton residuals, soliton-constant solvers and the two theorem checkers.

The residual of every soliton kind is written with the ``... + lambda g = 0``
sign convention:

* ``ricci``:                ``1/2 L_V g + S + lambda g``
* ``conformal_ricci``:      ``L_V g + 2 S + [2 lambda - (p + 2/n)] g``
* ``star_ricci``:           ``L_V g + 2 S* + 2 lambda g``
* ``star_conformal_ricci``: ``L_V g + 2 S* + [2 lambda - (p + 2/n)] g``

The Ricci-soliton theorem is phrased with ``1/2 L_V g + S = lambda g``, i.e. the
opposite sign; :func:`check_theorem_3_1` converts and reports both values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from . import scalar
from .connection import Connection, covariant_derivative, lie_derivative_metric
from .curvature import CurvatureBundle
from .manifold import DIM, IDX, FrameManifold, FrameTensor, VectorField, obj_array
from .report import (FAIL, NOT_APPLICABLE, NUMERIC_PASS, PASS, CheckItem, CheckReport,
                     residual_item, texts)
from .scalar import canonical
from .structure import ContactStructure, TransSasakianReport, detect_trans_sasakian

KINDS = ("ricci", "conformal_ricci", "star_ricci", "star_conformal_ricci")
SOLVE = "solve"

__all__ = [
    "HypothesisViolated",
    "KINDS",
    "SolitonProblem",
    "SolitonVerdict",
    "check_theorem_3_1",
    "check_theorem_3_2",
    "scalar_curvature_formula",
    "soliton_residual",
]


class HypothesisViolated(ValueError):
    """A theorem checker was called outside the theorem's hypotheses."""


@dataclass(frozen=True)
class SolitonProblem:
    kind: str
    V: VectorField
    p: Fraction | None = None
    lam: Fraction | str = SOLVE
    n: int = DIM

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown soliton kind {self.kind!r}")
        if self.conformal and self.p is None:
            raise ValueError(f"{self.kind} needs the conformal pressure p")
        if not self.conformal and self.p is not None:
            raise ValueError(f"{self.kind} takes no conformal pressure p")
        if self.n != DIM:
            raise ValueError("only dimension 3 is supported")
        if isinstance(self.lam, str) and self.lam != SOLVE:
            raise ValueError(f"lambda must be a rational or {SOLVE!r}")

    @property
    def conformal(self) -> bool:
        return self.kind in ("conformal_ricci", "star_conformal_ricci")

    @property
    def starred(self) -> bool:
        return self.kind.startswith("star")


@dataclass
class SolitonVerdict:
    residual: FrameTensor
    lambda_pointwise: list
    lambda_trace: sp.Expr
    is_soliton: bool
    lam: sp.Expr
    numeric: bool = False
    theorem_notes: dict = field(default_factory=dict)


def _split(M: FrameManifold, C: Connection, K: CurvatureBundle, P: SolitonProblem):
    """Return ``(base, coeff)`` with ``residual = base + coeff * lambda * g``."""
    h = lie_derivative_metric(M, C, P.V).comps
    if P.starred:
        if K.S_star is None:
            raise ValueError(f"{P.kind} needs the *-Ricci tensor (a contact structure)")
        curv = K.S_star.comps
    else:
        curv = K.S.comps
    G = M.metric
    base = obj_array((DIM, DIM))
    if P.kind == "ricci":
        coeff = 1
        for i, j in itertools.product(IDX, IDX):
            base[i, j] = h[i, j] / 2 + curv[i, j]
    else:
        coeff = 2
        shift = -(sp.Rational(P.p) + sp.Rational(2, P.n)) if P.conformal else 0
        for i, j in itertools.product(IDX, IDX):
            base[i, j] = h[i, j] + 2 * curv[i, j] + shift * G[i, j]
    return base, coeff


def soliton_residual(M: FrameManifold, C: Connection, K: CurvatureBundle,
                     CS: ContactStructure | None, P: SolitonProblem) -> SolitonVerdict:
    base, coeff = _split(M, C, K, P)
    G = M.metric
    Ginv = M.metric_inverse
    trace = canonical(sum(Ginv[i, j] * base[j, i] for i in IDX for j in IDX))
    lambda_trace = canonical(-trace / (coeff * P.n))
    pointwise = [scalar.divide(-base[i, i], coeff * G[i, i]) for i in IDX]

    lam = lambda_trace if P.lam == SOLVE else sp.Rational(P.lam)
    res = obj_array((DIM, DIM))
    for i, j in itertools.product(IDX, IDX):
        res[i, j] = base[i, j] + coeff * lam * G[i, j]
    residual = FrameTensor((0, 2), res, (("sym", 0, 1),))
    zero = residual.is_zero()
    # a soliton constant has to be constant
    lam_const = all(scalar.is_zero(M.directional(i, lam)) for i in IDX)
    return SolitonVerdict(residual, pointwise, lambda_trace, bool(zero) and lam_const,
                          canonical(lam), numeric=zero.numeric)


def soliton_item(verdict: SolitonVerdict, P: SolitonProblem, reference_lambda=None) -> CheckItem:
    refs = {
        "ricci": "1/2 L_V g + S + lambda g = 0",
        "conformal_ricci": "L_V g + 2S + [2 lambda - (p + 2/n)] g = 0",
        "star_ricci": "L_V g + 2S* + 2 lambda g = 0",
        "star_conformal_ricci": "L_V g + 2S* + [2 lambda - (p + 2/n)] g = 0",
    }
    bad = [[f"{i + 1}{j + 1}", scalar.to_text(e)] for (i, j), e in verdict.residual.nonzero_components()]
    values = texts({
        "kind": P.kind,
        "lambda": verdict.lam,
        "lambda_trace": verdict.lambda_trace,
        "lambda_pointwise": {f"e{i + 1}e{i + 1}": v for i, v in enumerate(verdict.lambda_pointwise)},
        "is_soliton": verdict.is_soliton,
    })
    notes = []
    conflict = False
    if verdict.is_soliton:
        status = NUMERIC_PASS if verdict.numeric else PASS
    else:
        status = FAIL
        notes.append("no constant lambda makes the residual vanish" if P.lam == SOLVE
                     else "residual does not vanish for the given lambda")
    if reference_lambda is not None:
        values["reference_lambda"] = scalar.to_text(reference_lambda)
        agrees = verdict.is_soliton and scalar.is_zero(verdict.lam - reference_lambda)
        if not agrees:
            conflict = True
            status = FAIL
            notes.append(
                f"published claim: soliton with lambda = {scalar.to_text(reference_lambda)}; "
                f"computed: is_soliton={verdict.is_soliton}, trace lambda = {scalar.to_text(verdict.lambda_trace)}"
            )
    return CheckItem(f"soliton.{P.kind}", refs[P.kind], status, bad, notes, conflict, values)


# --------------------------------------------------------------------------
# theorem checkers


def _require_constant(ts: TransSasakianReport):
    if not ts.detected:
        raise HypothesisViolated("manifold is not trans-Sasakian")
    if not ts.constant:
        raise HypothesisViolated("structure functions alpha, beta must be constant")


def check_theorem_3_1(M: FrameManifold, C: Connection, K: CurvatureBundle, CS: ContactStructure,
                      P: SolitonProblem, ts: TransSasakianReport | None = None) -> CheckReport:
    """Ricci solitons on trans-Sasakian 3-manifolds with constant structure functions.

    (i) if ``eta(nabla_xi V) = 0`` the soliton constant (in the ``= lambda g``
    convention) equals ``2(alpha^2 - beta^2)``; (ii) if ``alpha^2 = beta^2``
    then ``nabla_xi V = lambda xi``.
    """
    if P.kind != "ricci":
        raise HypothesisViolated("theorem concerns Ricci solitons (kind = ricci)")
    ts = ts or detect_trans_sasakian(CS, C)
    _require_constant(ts)
    rep = CheckReport("theorem-3-1")
    ref_i = "eta(nabla_xi V) = 0 => lambda = 2(alpha^2 - beta^2): shrinking/steady/expanding"
    ref_ii = "alpha^2 = beta^2 => nabla_xi V = lambda xi"
    verdict = soliton_residual(M, C, K, CS, P)
    if not verdict.is_soliton:
        reason = "metric is not a Ricci soliton for this V; theorem not applicable"
        extra = {"lambda_trace": verdict.lambda_trace,
                 "lambda_pointwise": list(verdict.lambda_pointwise)}
        rep.add(CheckItem("theorem-3-1.case-i", ref_i, NOT_APPLICABLE, notes=[reason], values=texts(extra)))
        rep.add(CheckItem("theorem-3-1.case-ii", ref_ii, NOT_APPLICABLE, notes=[reason]))
        return rep

    A = canonical(ts.alpha**2 - ts.beta**2)
    lam_12 = verdict.lam
    lam_311 = canonical(-lam_12)
    nabla_xi_V = covariant_derivative(C, CS.xi, P.V)
    eta_nv = CS.eta_of(nabla_xi_V)
    both = {"lambda (+lambda g = 0 convention)": lam_12,
            "lambda (= lambda g convention)": lam_311,
            "alpha^2 - beta^2": A,
            "eta(nabla_xi V)": eta_nv}

    if scalar.is_zero(eta_nv):
        if scalar.is_zero(A):
            nature = "steady"
        else:
            nature = "expanding" if sp.sympify(A) > 0 else "shrinking"
        item = residual_item("theorem-3-1.case-i", ref_i, {"": lam_311 - 2 * A},
                             values=texts({**both, "nature": nature}))
    else:
        item = CheckItem("theorem-3-1.case-i", ref_i, NOT_APPLICABLE,
                         notes=["nabla_xi V is not orthogonal to xi"], values=texts(both))
    rep.add(item)

    if scalar.is_zero(A):
        diff = nabla_xi_V - CS.xi * lam_311
        rep.add(residual_item("theorem-3-1.case-ii", ref_ii,
                              {f"{m + 1}": diff[m] for m in IDX},
                              values=texts({"nabla_xi V": list(nabla_xi_V.components),
                                            "lambda (= lambda g convention)": lam_311})))
    else:
        rep.add(CheckItem("theorem-3-1.case-ii", ref_ii, NOT_APPLICABLE,
                          notes=["alpha^2 != beta^2"]))
    return rep


def scalar_curvature_formula(alpha, beta, p, lam) -> sp.Expr:
    """``(1 - beta^2/alpha^2)(p/2 + 1/3 - lambda + 4 alpha^2)``."""
    alpha, beta, p, lam = (sp.Rational(v) if isinstance(v, (int, Fraction, str)) else sp.sympify(v)
                           for v in (alpha, beta, p, lam))
    if scalar.is_zero(alpha):
        raise HypothesisViolated("alpha must be nonzero")
    return canonical((1 - scalar.divide(beta**2, alpha**2)) * (p / 2 + sp.Rational(1, 3) - lam + 4 * alpha**2))


def check_theorem_3_2(M: FrameManifold, C: Connection, K: CurvatureBundle, CS: ContactStructure,
                      P: SolitonProblem, ts: TransSasakianReport | None = None) -> CheckReport:
    """Scalar curvature of a *-conformal Ricci soliton with constant ``alpha != 0``."""
    if P.kind != "star_conformal_ricci":
        raise HypothesisViolated("theorem concerns *-conformal Ricci solitons")
    ts = ts or detect_trans_sasakian(CS, C)
    _require_constant(ts)
    if scalar.is_zero(ts.alpha):
        raise HypothesisViolated("theorem hypothesis violated: alpha = 0")
    rep = CheckReport("theorem-3-2")
    ref_eq = "(L_V g) = (p + 2/3 + 4(alpha^2-beta^2) - r - 2 lambda) g + (r - 4(alpha^2-beta^2)) eta(x)eta"
    ref_r = "r = (1 - beta^2/alpha^2)(p/2 + 1/3 - lambda + 4 alpha^2)"

    verdict = soliton_residual(M, C, K, CS, P)
    lam = verdict.lam
    A = canonical(ts.alpha**2 - ts.beta**2)
    r = K.r
    p = sp.Rational(P.p)
    h = lie_derivative_metric(M, C, P.V).comps
    eta = CS.eta.comps
    G = M.metric
    res = {}
    for i, j in itertools.product(IDX, IDX):
        expected = (p + sp.Rational(2, 3) + 4 * A - r - 2 * lam) * G[i, j] + (r - 4 * A) * eta[i] * eta[j]
        res[f"{i + 1}{j + 1}"] = h[i, j] - expected
    eq_item = residual_item("theorem-3-2.soliton-equation", ref_eq, res,
                            values=texts({"lambda": lam, "lambda_trace": verdict.lambda_trace,
                                          "lambda_pointwise": list(verdict.lambda_pointwise)}))
    if eq_item.status == FAIL:
        V_zero = bool(P.V.is_zero())
        eq_item.status = NOT_APPLICABLE
        eq_item.notes.append("no *-conformal soliton" + (" with V = 0" if V_zero else " for this V")
                             + "; scalar-curvature formula not checked")
        rep.add(eq_item)
        rep.add(CheckItem("theorem-3-2.scalar-curvature", ref_r, NOT_APPLICABLE,
                          notes=["metric is not a *-conformal Ricci soliton"]))
        return rep
    rep.add(eq_item)
    predicted = scalar_curvature_formula(ts.alpha, ts.beta, p, lam)
    rep.add(residual_item("theorem-3-2.scalar-curvature", ref_r, {"": r - predicted},
                          values=texts({"r": r, "predicted r": predicted})))
    return rep
