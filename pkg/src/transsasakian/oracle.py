"""Numeric cross-check of frame connection and curvature (chart mode only).

Works purely in coordinates: the coordinate metric ``A^-1 G A^-T`` is built
numerically from the frame matrix ``A`` and frame metric ``G``, Christoffel
symbols come from fourth-order central differences of that metric, and the
Riemann tensor from central differences of those Christoffel symbols.  Results
are transformed back to the frame and compared with the symbolic ones.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import sympy as sp

from .manifold import DIM, IDX, FrameManifold
from .scalar import COORDS

H_METRIC = 1e-4
H_CHRISTOFFEL = 1e-3
CONNECTION_TOL = 1e-6
RIEMANN_TOL = 1e-5


def _d(f, x: np.ndarray, a: int, h: float) -> np.ndarray:
    e = np.zeros(DIM)
    e[a] = h
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)


class NumericGeometry:
    def __init__(self, M: FrameManifold):
        if M.mode != "chart":
            raise ValueError("the finite-difference oracle needs chart mode")
        self._A = sp.lambdify(COORDS, sp.Matrix(M.frame), modules="numpy")
        self._G = sp.lambdify(COORDS, sp.Matrix(M.metric), modules="numpy")

    def frame(self, x) -> np.ndarray:
        return np.asarray(self._A(*x), dtype=float)

    def coord_metric(self, x) -> np.ndarray:
        Ainv = np.linalg.inv(self.frame(x))
        return Ainv @ np.asarray(self._G(*x), dtype=float) @ Ainv.T

    def christoffel(self, x) -> np.ndarray:
        """``Gam[a, b, c]`` with ``nabla_{d_b} d_c = Gam[a, b, c] d_a``."""
        x = np.asarray(x, dtype=float)
        dg = np.array([_d(self.coord_metric, x, b, H_METRIC) for b in IDX])  # dg[b, i, j]
        ginv = np.linalg.inv(self.coord_metric(x))
        low = np.empty((DIM,) * 3)
        for d, b, c in itertools.product(IDX, IDX, IDX):
            low[d, b, c] = 0.5 * (dg[b, d, c] + dg[c, d, b] - dg[d, b, c])
        return np.einsum("ad,dbc->abc", ginv, low)

    def riemann(self, x) -> np.ndarray:
        """``Rc[a, b, c, d]`` with ``R(d_c, d_d) d_b = Rc[a, b, c, d] d_a``."""
        x = np.asarray(x, dtype=float)
        Gam = self.christoffel(x)
        dGam = np.array([_d(self.christoffel, x, c, H_CHRISTOFFEL) for c in IDX])  # dGam[c, a, b, e]
        Rc = np.empty((DIM,) * 4)
        for a, b, c, d in itertools.product(IDX, IDX, IDX, IDX):
            Rc[a, b, c, d] = (dGam[c, a, d, b] - dGam[d, a, c, b]
                              + sum(Gam[a, c, e] * Gam[e, d, b] - Gam[a, d, e] * Gam[e, c, b] for e in IDX))
        return Rc

    def frame_connection(self, x) -> np.ndarray:
        """``gamma[i, j, k]``: ``e_k`` component of ``nabla_{e_i} e_j``."""
        x = np.asarray(x, dtype=float)
        A = self.frame(x)
        Ainv = np.linalg.inv(A)
        dA = np.array([_d(self.frame, x, c, H_METRIC) for c in IDX])  # dA[c, j, b]
        Gam = self.christoffel(x)
        coord = np.einsum("ic,cjb->ijb", A, dA) + np.einsum("ic,jd,bcd->ijb", A, A, Gam)
        return coord @ Ainv

    def frame_riemann(self, x) -> np.ndarray:
        """``comps[m, i, j, k]``: ``e_m`` component of ``R(e_i, e_j) e_k``."""
        x = np.asarray(x, dtype=float)
        A = self.frame(x)
        Ainv = np.linalg.inv(A)
        Rc = self.riemann(x)
        coord = np.einsum("ic,jd,kb,abcd->ijka", A, A, A, Rc)
        return np.einsum("ijka,am->mijk", coord, Ainv)


def oracle_points(n: int = 8, seed: int = 0) -> list[tuple[float, float, float]]:
    rng = random.Random(seed)
    return [tuple(rng.uniform(-1.0, 1.0) for _ in IDX) for _ in range(n)]


def _evaluate(arr: np.ndarray, x) -> np.ndarray:
    out = np.empty(arr.shape)
    subs = dict(zip(COORDS, x))
    for idx in np.ndindex(arr.shape):
        out[idx] = float(sp.sympify(arr[idx]).evalf(subs=subs))
    return out


def _rel_error(num: np.ndarray, exact: np.ndarray) -> float:
    return float(np.max(np.abs(num - exact) / np.maximum(1.0, np.abs(exact))))


def compare(M: FrameManifold, gamma: np.ndarray, R: np.ndarray, points) -> dict:
    """Worst relative errors of the numeric connection and curvature vs. symbolic arrays."""
    geo = NumericGeometry(M)
    conn_err = riem_err = 0.0
    for x in points:
        conn_err = max(conn_err, _rel_error(geo.frame_connection(x), _evaluate(gamma, x)))
        riem_err = max(riem_err, _rel_error(geo.frame_riemann(x), _evaluate(R, x)))
    return {"connection": conn_err, "riemann": riem_err}
