"""Riemann, Ricci, scalar and *-Ricci curvature in a frame.

Sign convention: ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``,
so a round sphere has ``R(X, Y)Z = g(Y, Z)X - g(X, Z)Y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy as sp

from .connection import Connection
from .manifold import DIM, IDX, FrameManifold, FrameTensor, obj_array
from .scalar import canonical

__all__ = ["CurvatureBundle", "curvature_bundle", "ricci", "riemann", "star_ricci"]


def riemann(M: FrameManifold, C: Connection) -> FrameTensor:
    """``comps[m, i, j, k]`` is the ``e_m`` component of ``R(e_i, e_j)e_k``."""
    G = C.gamma
    c = M.brackets
    out = obj_array((DIM,) * 4)
    for i, j, k, m in itertools.product(IDX, IDX, IDX, IDX):
        if i == j:
            continue
        # nabla_i (nabla_j e_k) - nabla_j (nabla_i e_k) - nabla_[e_i,e_j] e_k
        val = M.directional(i, G[j, k, m]) - M.directional(j, G[i, k, m])
        val += sum(G[j, k, n] * G[i, n, m] - G[i, k, n] * G[j, n, m] for n in IDX)
        val -= sum(c[i, j, l] * G[l, k, m] for l in IDX)
        out[m, i, j, k] = val
    return FrameTensor((1, 3), out, (("anti", 0, 1),))


def ricci(M: FrameManifold, C: Connection, R: FrameTensor | None = None):
    """Return ``(S, Q, r)``: Ricci tensor, Ricci operator and scalar curvature."""
    if R is None:
        R = riemann(M, C)
    S = obj_array((DIM, DIM))
    for j, k in itertools.product(IDX, IDX):
        S[j, k] = sum(R.comps[m, m, j, k] for m in IDX)
    Ginv = M.metric_inverse
    Q = obj_array((DIM, DIM))
    for m, i in itertools.product(IDX, IDX):
        Q[m, i] = sum(S[i, j] * Ginv[j, m] for j in IDX)
    r = canonical(sum(Q[i, i] for i in IDX))
    return (FrameTensor((0, 2), S, (("sym", 0, 1),)), FrameTensor((1, 1), Q), r)


def star_ricci(M: FrameManifold, C: Connection, phi: FrameTensor | None,
               R: FrameTensor | None = None) -> FrameTensor:
    """``S*(X, Y) = 1/2 trace(Z -> phi R(X, phi Y) Z)``."""
    if phi is None:
        raise ValueError("the *-Ricci tensor needs a contact structure (phi)")
    if R is None:
        R = riemann(M, C)
    P = phi.comps
    Rc = R.comps
    out = obj_array((DIM, DIM))
    for i, j in itertools.product(IDX, IDX):
        total = sp.Integer(0)
        for a, b, n in itertools.product(IDX, IDX, IDX):
            # phi e_j = sum_b P[b, j] e_b; R(e_i, phi e_j) e_n has e_a component
            # sum_b P[b, j] Rc[a, i, b, n]; then phi of it, traced over n
            if P[b, j] != 0 and P[n, a] != 0:
                total += P[n, a] * P[b, j] * Rc[a, i, b, n]
        out[i, j] = total / 2
    return FrameTensor((0, 2), out)


@dataclass(frozen=True, eq=False)
class CurvatureBundle:
    R: FrameTensor
    S: FrameTensor
    Q: FrameTensor
    r: sp.Expr
    S_star: FrameTensor | None = None


def curvature_bundle(M: FrameManifold, C: Connection, phi: FrameTensor | None = None) -> CurvatureBundle:
    R = riemann(M, C)
    S, Q, r = ricci(M, C, R)
    S_star = star_ricci(M, C, phi, R) if phi is not None else None
    return CurvatureBundle(R, S, Q, r, S_star)
