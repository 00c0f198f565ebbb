"""Levi-Civita connection in a frame and Lie derivatives of g, the connection and R."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .manifold import (DIM, IDX, FrameManifold, FrameTensor, ManifoldError, VectorField,
                       canon_array, obj_array)
from .scalar import canonical

__all__ = [
    "Connection",
    "covariant_derivative",
    "levi_civita",
    "lie_derivative_connection",
    "lie_derivative_curvature",
    "lie_derivative_metric",
    "nabla",
]


@dataclass(frozen=True, eq=False)
class Connection:
    """``gamma[i, j, k]`` is the ``e_k`` component of ``nabla_{e_i} e_j``."""

    manifold: FrameManifold
    gamma: np.ndarray

    def nabla_frame(self, i: int, j: int) -> VectorField:
        return VectorField(tuple(self.gamma[i, j, :]))

    def torsion_defect(self) -> np.ndarray:
        c = self.manifold.brackets
        return canon_array(self.gamma - np.swapaxes(self.gamma, 0, 1) - c)

    def compatibility_defect(self) -> np.ndarray:
        """``e_i g_jk - g(nabla_i e_j, e_k) - g(e_j, nabla_i e_k)`` for all ``i, j, k``."""
        M = self.manifold
        G = M.metric
        out = obj_array((DIM, DIM, DIM))
        for i, j, k in itertools.product(IDX, IDX, IDX):
            out[i, j, k] = canonical(
                M.directional(i, G[j, k])
                - sum(self.gamma[i, j, m] * G[m, k] + self.gamma[i, k, m] * G[j, m] for m in IDX)
            )
        return out


def levi_civita(M: FrameManifold) -> Connection:
    """Solve Koszul's formula on frame triples and raise the last index."""
    G = M.metric
    c = M.brackets

    def g_bracket(a, b, d):
        # g(e_a, [e_b, e_d])
        return sum(G[a, m] * c[b, d, m] for m in IDX)

    koszul = obj_array((DIM, DIM, DIM))
    for i, j, k in itertools.product(IDX, IDX, IDX):
        koszul[i, j, k] = (
            M.directional(i, G[j, k]) + M.directional(j, G[k, i]) - M.directional(k, G[i, j])
            - g_bracket(i, j, k) - g_bracket(j, i, k) + g_bracket(k, i, j)
        ) / 2
    gamma = obj_array((DIM, DIM, DIM))
    Ginv = M.metric_inverse
    for i, j, m in itertools.product(IDX, IDX, IDX):
        gamma[i, j, m] = canonical(sum(koszul[i, j, k] * Ginv[k, m] for k in IDX))
    return Connection(M, gamma)


def _nabla_vector(C: Connection, V: VectorField) -> np.ndarray:
    """``D[m, i]`` = ``e_m`` component of ``nabla_{e_i} V``."""
    M = C.manifold
    D = obj_array((DIM, DIM))
    for m, i in itertools.product(IDX, IDX):
        D[m, i] = canonical(M.directional(i, V[m]) + sum(V[j] * C.gamma[i, j, m] for j in IDX))
    return D


def nabla(conn: Connection, T) -> FrameTensor:
    """Full covariant derivative; the derivative slot is the first lower slot.

    For a vector field returns the (1,1) tensor ``X -> nabla_X V``; for a
    ``(r, s)`` tensor returns the ``(r, s+1)`` tensor
    ``(nabla T)(X, Y1..Ys) = (nabla_X T)(Y1..Ys)``.
    """
    M = conn.manifold
    if isinstance(T, VectorField):
        return FrameTensor((1, 1), _nabla_vector(conn, T))
    r, s = T.valence
    if r + s + 1 > 4:
        raise ManifoldError("covariant derivative would exceed valence (1,3)")
    src = T.comps
    out = obj_array((DIM,) * (r + s + 1))
    G = conn.gamma
    for idx in np.ndindex(out.shape):
        if r == 1:
            m, i, lower = idx[0], idx[1], idx[2:]
            val = M.directional(i, src[(m,) + lower])
            val += sum(G[i, n, m] * src[(n,) + lower] for n in IDX)
            for pos, j in enumerate(lower):
                for n in IDX:
                    if G[i, j, n] != 0:
                        swapped = lower[:pos] + (n,) + lower[pos + 1:]
                        val -= G[i, j, n] * src[(m,) + swapped]
        else:
            i, lower = idx[0], idx[1:]
            val = M.directional(i, src[lower])
            for pos, j in enumerate(lower):
                for n in IDX:
                    if G[i, j, n] != 0:
                        swapped = lower[:pos] + (n,) + lower[pos + 1:]
                        val -= G[i, j, n] * src[swapped]
        out[idx] = val
    return FrameTensor((r, s + 1), out)


def covariant_derivative(C: Connection, X: VectorField, T):
    """``nabla_X T`` for a vector field or a tensor of valence at most (1,3)."""
    full = nabla(C, T)
    r = full.valence[0]
    # the derivative slot sits right after the upper index
    arr = np.tensordot(full.comps, X.array(), axes=([r], [0]))
    if isinstance(T, VectorField):
        return VectorField(tuple(arr))
    return FrameTensor(T.valence, arr)


def lie_derivative_metric(M: FrameManifold, C: Connection, V: VectorField) -> FrameTensor:
    """``(L_V g)(X, Y) = g(nabla_X V, Y) + g(X, nabla_Y V)``."""
    D = _nabla_vector(C, V)
    G = M.metric
    h = obj_array((DIM, DIM))
    for i, j in itertools.product(IDX, IDX):
        h[i, j] = sum(D[m, i] * G[m, j] + G[i, m] * D[m, j] for m in IDX)
    return FrameTensor((0, 2), h, (("sym", 0, 1),))


def lie_derivative_connection(M: FrameManifold, C: Connection, V: VectorField) -> FrameTensor:
    """``L_V nabla`` from covariant derivatives of ``h = L_V g``.

    ``2 g((L_V nabla)(X, Y), Z) = (nabla_X h)(Y, Z) + (nabla_Y h)(Z, X) - (nabla_Z h)(X, Y)``
    """
    Dh = nabla(C, lie_derivative_metric(M, C, V)).comps
    Ginv = M.metric_inverse
    out = obj_array((DIM, DIM, DIM))
    for m, i, j in itertools.product(IDX, IDX, IDX):
        out[m, i, j] = sum(
            (Dh[i, j, k] + Dh[j, k, i] - Dh[k, i, j]) * Ginv[k, m] for k in IDX
        ) / 2
    return FrameTensor((1, 2), out, (("sym", 0, 1),))


def lie_derivative_curvature(M: FrameManifold, C: Connection, V: VectorField) -> FrameTensor:
    """``(L_V R)(X, Y)Z = (nabla_X L_V nabla)(Y, Z) - (nabla_Y L_V nabla)(X, Z)``."""
    DA = nabla(C, lie_derivative_connection(M, C, V)).comps
    out = DA - np.swapaxes(DA, 1, 2)
    return FrameTensor((1, 3), out, (("anti", 0, 1),))
