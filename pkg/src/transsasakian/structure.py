"""Almost contact metric structures, trans-Sasakian detection and identity suites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import sympy as sp

from . import scalar
from .connection import Connection, covariant_derivative, nabla
from .curvature import CurvatureBundle
from .manifold import DIM, IDX, FrameManifold, FrameTensor, VectorField, apply_field, obj_array
from .report import CheckReport, residual_item, texts
from .scalar import canonical

__all__ = [
    "ContactStructure",
    "DetectionError",
    "TransSasakianReport",
    "detect_trans_sasakian",
    "general_curvature_form",
    "identity_suite_constant",
    "identity_suite_general",
    "validate_almost_contact",
]


class DetectionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ContactStructure:
    """``(phi, xi, eta, g)`` on a frame manifold.

    ``phi.comps[m, i]`` is the ``e_m`` component of ``phi(e_i)``.  ``eta`` is
    always ``g(., xi)``; an explicitly supplied 1-form is kept only so that
    validation can flag a disagreement.
    """

    manifold: FrameManifold
    phi: FrameTensor
    xi: VectorField
    supplied_eta: tuple | None = None

    @classmethod
    def from_rows(cls, M: FrameManifold, phi_rows: Sequence[Sequence], xi: Sequence,
                  eta: Sequence | None = None) -> "ContactStructure":
        """``phi_rows[i]`` holds the frame components of ``phi(e_i)``."""
        arr = obj_array((DIM, DIM))
        for i, m in itertools.product(IDX, IDX):
            arr[m, i] = sp.sympify(phi_rows[i][m])
        supplied = tuple(canonical(e) for e in eta) if eta is not None else None
        return cls(M, FrameTensor((1, 1), arr), VectorField(tuple(xi)), supplied)

    @property
    def eta(self) -> FrameTensor:
        arr = obj_array((DIM,))
        for i in IDX:
            arr[i] = self.manifold.g(VectorField.basis(i), self.xi)
        return FrameTensor((0, 1), arr)

    def eta_of(self, X: VectorField) -> sp.Expr:
        return self.manifold.g(X, self.xi)

    def phi_of(self, X: VectorField) -> VectorField:
        return self.phi(X)


def validate_almost_contact(cs: ContactStructure) -> CheckReport:
    M = cs.manifold
    E = M.frame_basis()
    xi = cs.xi
    eta = [cs.eta_of(e) for e in E]
    phiE = [cs.phi_of(e) for e in E]
    rep = CheckReport("almost-contact")

    res = {}
    for i in IDX:
        lhs = cs.phi_of(phiE[i])
        rhs = -E[i] + xi * eta[i]
        for m in IDX:
            res[f"e{i + 1}.{m + 1}"] = lhs[m] - rhs[m]
    rep.add(residual_item("almost-contact.phi-squared", "phi^2 = -I + eta (x) xi", res))

    rep.add(residual_item("almost-contact.eta-xi", "eta(xi) = 1", {"": cs.eta_of(xi) - 1}))

    res = {}
    for i, j in itertools.product(IDX, IDX):
        res[f"{i + 1}{j + 1}"] = M.g(phiE[i], phiE[j]) - M.metric[i, j] + eta[i] * eta[j]
    rep.add(residual_item("almost-contact.compatible-metric",
                          "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", res))

    phixi = cs.phi_of(xi)
    rep.add(residual_item("almost-contact.phi-xi", "phi xi = 0",
                          {f"{m + 1}": phixi[m] for m in IDX}))

    rep.add(residual_item("almost-contact.eta-phi", "eta o phi = 0",
                          {f"e{i + 1}": cs.eta_of(phiE[i]) for i in IDX}))

    supplied = cs.supplied_eta if cs.supplied_eta is not None else tuple(eta)
    rep.add(residual_item("almost-contact.eta-metric-dual", "g(X, xi) = eta(X)",
                          {f"e{i + 1}": eta[i] - supplied[i] for i in IDX}))

    res = {}
    for i, j in itertools.product(IDX, IDX):
        res[f"{i + 1}{j + 1}"] = M.g(phiE[i], E[j]) + M.g(E[i], phiE[j])
    rep.add(residual_item("almost-contact.phi-skew", "g(phi X, Y) = -g(X, phi Y)", res))
    return rep


# --------------------------------------------------------------------------
# trans-Sasakian detection


@dataclass
class TransSasakianReport:
    alpha: sp.Expr
    beta: sp.Expr
    is_constant_alpha: bool
    is_constant_beta: bool
    defect_phi: dict = field(default_factory=dict)
    defect_eta: dict = field(default_factory=dict)
    defect_xi: dict = field(default_factory=dict)
    leg: int = 0
    other_leg: tuple | None = None

    @property
    def detected(self) -> bool:
        return not (self.defect_phi or self.defect_eta)

    @property
    def constant(self) -> bool:
        return self.is_constant_alpha and self.is_constant_beta

    @property
    def kind(self) -> str:
        a0 = scalar.is_zero(self.alpha)
        b0 = scalar.is_zero(self.beta)
        if a0 and b0:
            return "cosymplectic"
        if b0:
            return "alpha-Sasakian"
        if a0:
            return "beta-Kenmotsu"
        return "proper trans-Sasakian"


def _structure_functions(cs: ContactStructure, C: Connection, leg: int):
    M = cs.manifold
    X = VectorField.basis(leg)
    phiX = cs.phi_of(X)
    norm = M.g(phiX, phiX)
    if scalar.is_zero(norm):
        return None
    dxi = covariant_derivative(C, X, cs.xi)
    alpha = scalar.divide(-M.g(dxi, phiX), norm)
    beta = scalar.divide(M.g(dxi, X), norm)  # g(X,X) - eta(X)^2 = g(phi X, phi X)
    return alpha, beta


def _nonzero(res: dict) -> dict:
    return {k: v for k, v in res.items() if not scalar.is_zero(v)}


def trans_sasakian_residuals(cs: ContactStructure, C: Connection, alpha, beta):
    """Residuals of the nabla-phi, nabla-eta and nabla-xi equations on frame pairs."""
    M = cs.manifold
    E = M.frame_basis()
    xi = cs.xi
    eta = [cs.eta_of(e) for e in E]
    phiE = [cs.phi_of(e) for e in E]
    Dphi = nabla(C, cs.phi).comps
    Deta = nabla(C, cs.eta).comps
    Dxi = nabla(C, xi).comps

    r_phi, r_eta, r_xi = {}, {}, {}
    for i, j in itertools.product(IDX, IDX):
        expected = (xi * M.metric[i, j] - E[i] * eta[j]) * alpha \
            + (xi * M.g(phiE[i], E[j]) - phiE[i] * eta[j]) * beta
        for m in IDX:
            r_phi[f"{i + 1}{j + 1}.{m + 1}"] = Dphi[m, i, j] - expected[m]
        r_eta[f"{i + 1}{j + 1}"] = Deta[i, j] + alpha * M.g(phiE[i], E[j]) - beta * M.g(phiE[i], phiE[j])
    for i in IDX:
        expected = phiE[i] * (-alpha) + (E[i] - xi * eta[i]) * beta
        for m in IDX:
            r_xi[f"{i + 1}.{m + 1}"] = Dxi[m, i] - expected[m]
    return r_phi, r_eta, r_xi


def detect_trans_sasakian(cs: ContactStructure, C: Connection) -> TransSasakianReport:
    """Recover ``(alpha, beta)`` from ``nabla xi`` on a non-characteristic leg and
    verify the full structure equations."""
    M = cs.manifold
    found = None
    for leg in (0, 1):
        found = _structure_functions(cs, C, leg)
        if found is not None:
            break
    if found is None:
        raise DetectionError("frame legs e1 and e2 are both characteristic; cannot recover alpha, beta")
    alpha, beta = found
    other = _structure_functions(cs, C, 1) if leg == 0 else None

    r_phi, r_eta, r_xi = trans_sasakian_residuals(cs, C, alpha, beta)
    const_a = all(scalar.is_zero(M.directional(i, alpha)) for i in IDX)
    const_b = all(scalar.is_zero(M.directional(i, beta)) for i in IDX)
    return TransSasakianReport(
        alpha=alpha, beta=beta, is_constant_alpha=const_a, is_constant_beta=const_b,
        defect_phi=_nonzero(r_phi), defect_eta=_nonzero(r_eta), defect_xi=_nonzero(r_xi),
        leg=leg, other_leg=other,
    )


def trans_sasakian_report(cs: ContactStructure, C: Connection, ts: TransSasakianReport) -> CheckReport:
    rep = CheckReport("trans-sasakian")
    a, b = ts.alpha, ts.beta
    r_phi, r_eta, r_xi = trans_sasakian_residuals(cs, C, a, b)
    vals = texts({"alpha": a, "beta": b, "constant_alpha": ts.is_constant_alpha,
                  "constant_beta": ts.is_constant_beta, "class": ts.kind})
    rep.add(residual_item(
        "trans-sasakian.nabla-phi",
        "(nabla_X phi)Y = alpha[g(X,Y)xi - eta(Y)X] + beta[g(phi X,Y)xi - eta(Y)phi X]",
        r_phi, values=vals))
    rep.add(residual_item("trans-sasakian.nabla-eta",
                          "(nabla_X eta)Y = -alpha g(phi X,Y) + beta g(phi X,phi Y)", r_eta))
    rep.add(residual_item("trans-sasakian.nabla-xi",
                          "nabla_X xi = -alpha phi X + beta(X - eta(X)xi)", r_xi))
    if ts.other_leg is not None:
        a2, b2 = ts.other_leg
        rep.add(residual_item("trans-sasakian.leg-independence",
                              "alpha, beta recovered from e1 and e2 agree",
                              {"alpha": a - a2, "beta": b - b2}))
    return rep


# --------------------------------------------------------------------------
# identity suites


def _frame_data(cs: ContactStructure):
    M = cs.manifold
    E = M.frame_basis()
    return M, E, [cs.eta_of(e) for e in E], [cs.phi_of(e) for e in E]


def identity_suite_constant(cs: ContactStructure, C: Connection, K: CurvatureBundle,
                            alpha, beta) -> CheckReport:
    """Closed forms that hold when the structure functions are constant."""
    M, E, eta, phiE = _frame_data(cs)
    for f in (alpha, beta):
        if not all(scalar.is_zero(M.directional(i, f)) for i in IDX):
            raise ValueError("constant-coefficient identities need constant alpha and beta")
    A = canonical(alpha**2 - beta**2)
    r = K.r
    xi = cs.xi
    G = M.metric
    rep = CheckReport("identities")

    res = {}
    for i, j in itertools.product(IDX, IDX):
        R_ijxi = K.R(E[i], E[j], xi)
        expected = (E[i] * eta[j] - E[j] * eta[i]) * A
        for m in IDX:
            res[f"{i + 1}{j + 1}.{m + 1}"] = R_ijxi[m] - expected[m]
    rep.add(residual_item("identities.curvature-xi",
                          "R(X,Y)xi = (alpha^2 - beta^2)(eta(Y)X - eta(X)Y)", res))

    res = {}
    for i, j in itertools.product(IDX, IDX):
        expected = (r / 2 - A) * G[i, j] - (r / 2 - 3 * A) * eta[i] * eta[j]
        res[f"{i + 1}{j + 1}"] = K.S.comps[i, j] - expected
    rep.add(residual_item("identities.ricci-eta-einstein",
                          "S = (r/2 - (alpha^2-beta^2))g - (r/2 - 3(alpha^2-beta^2)) eta(x)eta", res))

    res = {f"e{i + 1}": K.S(E[i], xi) - 2 * A * eta[i] for i in IDX}
    rep.add(residual_item("identities.ricci-xi", "S(X, xi) = 2(alpha^2 - beta^2) eta(X)", res))

    res = {}
    for i in IDX:
        QX = K.Q(E[i])
        expected = E[i] * (r / 2 - A) - xi * ((r / 2 - 3 * A) * eta[i])
        for m in IDX:
            res[f"e{i + 1}.{m + 1}"] = QX[m] - expected[m]
    rep.add(residual_item("identities.ricci-operator",
                          "QX = (r/2 - (alpha^2-beta^2))X - (r/2 - 3(alpha^2-beta^2)) eta(X) xi", res))

    if K.S_star is not None:
        res = {}
        for i, j in itertools.product(IDX, IDX):
            expected = (r - 4 * A) / 2 * (G[i, j] - eta[i] * eta[j])
            res[f"{i + 1}{j + 1}"] = K.S_star.comps[i, j] - expected
        rep.add(residual_item("identities.star-ricci",
                              "S*(X,Y) = (r - 4(alpha^2-beta^2))/2 [g(X,Y) - eta(X)eta(Y)]", res))

    xi_r = apply_field(M, xi, r)
    rep.add(residual_item("identities.xi-r", "xi r = -2 r beta + 12 (alpha^2 - beta^2) beta",
                          {"": xi_r + 2 * r * beta - 12 * A * beta},
                          values=texts({"xi r": xi_r, "r": r})))
    return rep


def general_curvature_form(cs: ContactStructure, alpha, beta, r) -> FrameTensor:
    """Right-hand side of the general 3-dimensional trans-Sasakian curvature expansion."""
    M, E, eta, phiE = _frame_data(cs)
    xi = cs.xi
    A = canonical(alpha**2 - beta**2)
    xi_beta = apply_field(M, xi, beta)
    c1 = r / 2 + 2 * xi_beta - 2 * A
    c2 = r / 2 + xi_beta - 3 * A
    w = cs.phi_of(M.gradient(alpha)) - M.gradient(beta)
    # u(X) = X beta + (phi X) alpha
    u = [M.directional(i, beta) + apply_field(M, phiE[i], alpha) for i in IDX]
    G = M.metric

    out = obj_array((DIM,) * 4)
    for i, j, k in itertools.product(IDX, IDX, IDX):
        X, Y = E[i], E[j]
        vec = (X * G[j, k] - Y * G[i, k]) * c1
        vec = vec - (xi * (c2 * eta[i]) - w * eta[i] + xi * u[i]) * G[j, k]
        vec = vec + (xi * (c2 * eta[j]) - w * eta[j] + xi * u[j]) * G[i, k]
        vec = vec - X * (u[k] * eta[j] + u[j] * eta[k] + c2 * eta[j] * eta[k])
        vec = vec + Y * (u[k] * eta[i] + u[i] * eta[k] + c2 * eta[i] * eta[k])
        for m in IDX:
            out[m, i, j, k] = vec[m]
    return FrameTensor((1, 3), out, (("anti", 0, 1),))


def general_ricci_form(cs: ContactStructure, alpha, beta, r) -> FrameTensor:
    M, E, eta, phiE = _frame_data(cs)
    A = canonical(alpha**2 - beta**2)
    xi_beta = apply_field(M, cs.xi, beta)
    u = [M.directional(i, beta) + apply_field(M, phiE[i], alpha) for i in IDX]
    out = obj_array((DIM, DIM))
    for i, j in itertools.product(IDX, IDX):
        out[i, j] = ((r / 2 + xi_beta - A) * M.metric[i, j]
                     - (r / 2 + xi_beta - 3 * A) * eta[i] * eta[j]
                     - u[j] * eta[i] - u[i] * eta[j])
    return FrameTensor((0, 2), out, (("sym", 0, 1),))


def identity_suite_general(cs: ContactStructure, C: Connection, K: CurvatureBundle,
                           alpha, beta) -> CheckReport:
    """Identities valid for arbitrary smooth structure functions."""
    M, E, eta, phiE = _frame_data(cs)
    r = K.r
    A = canonical(alpha**2 - beta**2)
    xi = cs.xi
    rep = CheckReport("identities")

    Rform = general_curvature_form(cs, alpha, beta, r)
    res = {}
    for idx in np.ndindex(Rform.comps.shape):
        m, i, j, k = idx
        res[f"{i + 1}{j + 1}{k + 1}.{m + 1}"] = K.R.comps[idx] - Rform.comps[idx]
    rep.add(residual_item("identities.curvature-general",
                          "general 3-dimensional trans-Sasakian curvature expansion with gradients D alpha, D beta",
                          res))

    Sform = general_ricci_form(cs, alpha, beta, r)
    res = {f"{i + 1}{j + 1}": K.S.comps[i, j] - Sform.comps[i, j] for i, j in itertools.product(IDX, IDX)}
    rep.add(residual_item("identities.ricci-general",
                          "S(X,Y) = (r/2 + xi beta - (alpha^2-beta^2))g(X,Y) - ... (general structure functions)",
                          res))

    xi_beta = apply_field(M, xi, beta)
    res = {}
    for i in IDX:
        expected = (2 * A - xi_beta) * eta[i] - M.directional(i, beta) - apply_field(M, phiE[i], alpha)
        res[f"e{i + 1}"] = K.S(E[i], xi) - expected
    rep.add(residual_item("identities.ricci-xi-general",
                          "S(X, xi) = (2(alpha^2-beta^2) - xi beta) eta(X) - X beta - (phi X) alpha", res))

    res = {}
    for j, k in itertools.product(IDX, IDX):
        traced = sum(Rform.comps[m, m, j, k] for m in IDX)
        res[f"{j + 1}{k + 1}"] = traced - Sform.comps[j, k]
    rep.add(residual_item("identities.contracted-curvature",
                          "contracting the general curvature expansion reproduces the general Ricci form",
                          res))

    const = all(scalar.is_zero(M.directional(i, f)) for i in IDX for f in (alpha, beta))
    if const:
        res = {}
        for i, j in itertools.product(IDX, IDX):
            at_xi = Rform(E[i], E[j], xi)
            expected = (E[i] * eta[j] - E[j] * eta[i]) * A
            for m in IDX:
                res[f"{i + 1}{j + 1}.{m + 1}"] = at_xi[m] - expected[m]
        rep.add(residual_item("identities.curvature-general-at-xi",
                              "general curvature expansion at Z = xi reduces to R(X,Y)xi = (alpha^2-beta^2)(eta(Y)X - eta(X)Y)",
                              res))
    return rep
