"""Three-dimensional manifolds described by a global frame.

Two modes are supported:

* ``chart`` - frame vectors ``e_i = sum_j A[i, j] d/dx_j`` with scalar-grammar
  coefficients on the ``(x, y, z)`` chart;
* ``lie`` - a left-invariant frame given only by rational structure constants
  ``[e_i, e_j] = sum_k c[i, j, k] e_k``.  All scalars are then constants.

All tensor components are taken in the frame.  Arrays are numpy object arrays
holding canonical sympy expressions, upper indices first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import sympy as sp

from . import scalar
from .scalar import canonical

DIM = 3
IDX = range(DIM)

__all__ = [
    "DIM",
    "FrameManifold",
    "FrameTensor",
    "ManifoldError",
    "VectorField",
    "apply_field",
    "lie_bracket",
    "tensor_eval",
]


class ManifoldError(ValueError):
    pass


def obj_array(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(sp.Integer(0))
    return arr


def canon_array(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = canonical(arr[idx])
    return out


@dataclass(frozen=True, eq=False)
class VectorField:
    """Frame components ``X = sum_i X[i] e_i``."""

    components: tuple

    def __post_init__(self):
        comps = tuple(canonical(c) for c in self.components)
        if len(comps) != DIM:
            raise ManifoldError(f"vector field needs {DIM} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def basis(cls, i: int) -> "VectorField":
        return cls(tuple(sp.Integer(int(k == i)) for k in IDX))

    @classmethod
    def zero(cls) -> "VectorField":
        return cls((0, 0, 0))

    def __getitem__(self, i: int) -> sp.Expr:
        return self.components[i]

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(tuple(-a for a in self.components))

    def __mul__(self, f) -> "VectorField":
        return VectorField(tuple(f * a for a in self.components))

    __rmul__ = __mul__

    def array(self) -> np.ndarray:
        arr = obj_array((DIM,))
        arr[:] = self.components
        return arr

    def is_zero(self) -> scalar.ZeroTest:
        return scalar.all_zero(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return bool((self - other).is_zero())

    __hash__ = None

    def __repr__(self) -> str:
        return "VectorField(" + ", ".join(scalar.to_text(c) for c in self.components) + ")"


@dataclass(frozen=True, eq=False)
class FrameTensor:
    """A type ``(r, s)`` tensor with ``r <= 1``.

    ``comps[m, i1, ..., is]`` is the ``e_m`` component of ``T(e_i1, ..., e_is)``
    when ``r == 1``; for ``r == 0`` it is the scalar ``T(e_i1, ..., e_is)``.
    ``symmetries`` lists ``("sym" | "anti", a, b)`` over lower slots (0-based).
    """

    valence: tuple[int, int]
    comps: np.ndarray
    symmetries: tuple = field(default=())

    def __post_init__(self):
        r, s = self.valence
        if r not in (0, 1) or s < 0 or r + s > 4:
            raise ManifoldError(f"unsupported valence {self.valence}")
        if self.comps.shape != (DIM,) * (r + s):
            raise ManifoldError(f"component array shape {self.comps.shape} does not match {self.valence}")
        object.__setattr__(self, "comps", canon_array(self.comps))

    @property
    def rank(self) -> int:
        return sum(self.valence)

    def __call__(self, *args: VectorField):
        return tensor_eval(self, *args)

    def __add__(self, other: "FrameTensor") -> "FrameTensor":
        self._same_kind(other)
        return FrameTensor(self.valence, self.comps + other.comps)

    def __sub__(self, other: "FrameTensor") -> "FrameTensor":
        self._same_kind(other)
        return FrameTensor(self.valence, self.comps - other.comps)

    def __mul__(self, f) -> "FrameTensor":
        return FrameTensor(self.valence, self.comps * f, self.symmetries)

    __rmul__ = __mul__

    def _same_kind(self, other):
        if self.valence != other.valence:
            raise ManifoldError(f"valence mismatch {self.valence} vs {other.valence}")

    def nonzero_components(self) -> list[tuple[tuple[int, ...], sp.Expr]]:
        out = []
        for idx in np.ndindex(self.comps.shape):
            if not scalar.is_zero(self.comps[idx]):
                out.append((idx, self.comps[idx]))
        return out

    def is_zero(self) -> scalar.ZeroTest:
        return scalar.all_zero(self.comps.flat)

    def symmetry_defects(self) -> list[np.ndarray]:
        r = self.valence[0]
        defects = []
        for kind, a, b in self.symmetries:
            swapped = np.swapaxes(self.comps, r + a, r + b)
            defects.append(self.comps - swapped if kind == "sym" else self.comps + swapped)
        return defects

    def check_symmetries(self) -> scalar.ZeroTest:
        return scalar.all_zero(d for arr in self.symmetry_defects() for d in arr.flat)


def tensor_eval(T: FrameTensor, *args: VectorField):
    """Multilinear evaluation on frame components."""
    r, s = T.valence
    if len(args) != s:
        raise ManifoldError(f"tensor of valence {T.valence} takes {s} arguments, got {len(args)}")
    arr = T.comps
    # contract trailing lower slots one by one
    for v in reversed(args):
        arr = np.tensordot(arr, v.array(), axes=([arr.ndim - 1], [0]))
    if r == 1:
        return VectorField(tuple(arr))
    return canonical(arr if not isinstance(arr, np.ndarray) else arr.item())


class FrameManifold:
    """A 3-manifold with a global frame and a frame metric.

    Use :meth:`chart` or :meth:`lie` to construct.  ``brackets[i, j, k]`` is
    the ``e_k`` component of ``[e_i, e_j]`` in either mode.
    """

    def __init__(self, mode: str, *, frame=None, structure=None, metric=None,
                 base_point: Sequence = (0, 0, 0)):
        if mode not in ("chart", "lie"):
            raise ManifoldError(f"unknown mode {mode!r}")
        self.mode = mode
        self.base_point = tuple(base_point)
        self.metric = sp.ImmutableMatrix(metric if metric is not None else sp.eye(DIM)).applyfunc(canonical)
        if self.metric.shape != (DIM, DIM):
            raise ManifoldError("metric must be 3x3")

        if mode == "chart":
            if frame is None:
                raise ManifoldError("chart mode requires frame coefficients")
            self.frame = sp.ImmutableMatrix(frame).applyfunc(canonical)
            if self.frame.shape != (DIM, DIM):
                raise ManifoldError("frame must be 3x3")
            for entry in self.frame:
                scalar.check_grammar(entry)
            det = canonical(self.frame.det())
            if not scalar.is_unit(det):
                raise ManifoldError(
                    f"frame determinant {scalar.to_text(det)} is not provably nonzero"
                )
            self.frame_inverse = sp.ImmutableMatrix(
                self.frame.adjugate().applyfunc(lambda a: scalar.divide(a, det))
            )
            self.brackets = self._chart_brackets()
        else:
            if structure is None:
                raise ManifoldError("lie mode requires structure constants")
            c = obj_array((DIM, DIM, DIM))
            for idx in np.ndindex(c.shape):
                c[idx] = sp.Rational(structure[idx[0]][idx[1]][idx[2]])
            self.frame = None
            self.frame_inverse = None
            self.brackets = c
            for entry in self.metric:
                if not scalar.is_constant(entry):
                    raise ManifoldError("lie mode metric must be constant")
            self._check_lie_constants()

        self._check_metric()
        self.metric_inverse = self._metric_inverse()

    @classmethod
    def chart(cls, frame, metric=None, base_point=(0, 0, 0)) -> "FrameManifold":
        return cls("chart", frame=frame, metric=metric, base_point=base_point)

    @classmethod
    def lie(cls, structure, metric=None, base_point=(0, 0, 0)) -> "FrameManifold":
        return cls("lie", structure=structure, metric=metric, base_point=base_point)

    # -- validation -------------------------------------------------------

    def _check_lie_constants(self):
        c = self.brackets
        for i, j, k in itertools.product(IDX, IDX, IDX):
            if c[i, j, k] != -c[j, i, k]:
                raise ManifoldError(f"structure constants not antisymmetric at ({i + 1},{j + 1},{k + 1})")
        for i, j, k, m in itertools.product(IDX, IDX, IDX, IDX):
            total = sum(
                c[i, j, l] * c[l, k, m] + c[j, k, l] * c[l, i, m] + c[k, i, l] * c[l, j, m]
                for l in IDX
            )
            if total != 0:
                raise ManifoldError("structure constants violate the Jacobi identity")

    def _check_metric(self):
        g = self.metric
        for i, j in itertools.product(IDX, IDX):
            if not scalar.is_zero(g[i, j] - g[j, i]):
                raise ManifoldError("metric is not symmetric")
        values = np.array(
            [[scalar.evaluate(g[i, j], self.base_point) for j in IDX] for i in IDX]
        )
        if np.any(np.linalg.eigvalsh(values) <= 0):
            raise ManifoldError("metric is not positive definite at the base point")

    def _metric_inverse(self) -> sp.ImmutableMatrix:
        det = canonical(self.metric.det())
        if not scalar.is_unit(det):
            raise ManifoldError(
                f"metric Gram determinant {scalar.to_text(det)} is not provably nonzero"
            )
        return sp.ImmutableMatrix(self.metric.adjugate().applyfunc(lambda a: scalar.divide(a, det)))

    def _chart_brackets(self) -> np.ndarray:
        A = self.frame
        c = obj_array((DIM, DIM, DIM))
        for i, j in itertools.product(IDX, IDX):
            if i == j:
                continue
            coord = [
                sum(A[i, a] * scalar.diff(A[j, b], a + 1) - A[j, a] * scalar.diff(A[i, b], a + 1)
                    for a in IDX)
                for b in IDX
            ]
            for k in IDX:
                c[i, j, k] = canonical(sum(coord[b] * self.frame_inverse[b, k] for b in IDX))
        return c

    # -- calculus ---------------------------------------------------------

    def directional(self, i: int, f) -> sp.Expr:
        """``e_i f`` for frame leg ``i`` (0-based)."""
        f = canonical(f)
        if self.mode == "lie":
            if not scalar.is_constant(f):
                raise ManifoldError("lie mode supports only constant scalars")
            return sp.Integer(0)
        return canonical(sum(self.frame[i, a] * scalar.diff(f, a + 1) for a in IDX
                             if self.frame[i, a] != 0))

    def g(self, X: VectorField, Y: VectorField) -> sp.Expr:
        return canonical(sum(X[i] * self.metric[i, j] * Y[j] for i in IDX for j in IDX))

    def gradient(self, f) -> VectorField:
        d = [self.directional(i, f) for i in IDX]
        return VectorField(tuple(sum(self.metric_inverse[m, i] * d[i] for i in IDX) for m in IDX))

    def to_coordinates(self, X: VectorField) -> tuple:
        if self.mode != "chart":
            raise ManifoldError("coordinate components need chart mode")
        return tuple(canonical(sum(X[i] * self.frame[i, a] for i in IDX)) for a in IDX)

    def from_coordinates(self, comps: Sequence) -> VectorField:
        if self.mode != "chart":
            raise ManifoldError("coordinate components need chart mode")
        comps = [canonical(c) for c in comps]
        return VectorField(tuple(sum(comps[a] * self.frame_inverse[a, k] for a in IDX) for k in IDX))

    def metric_tensor(self) -> FrameTensor:
        arr = obj_array((DIM, DIM))
        for i, j in itertools.product(IDX, IDX):
            arr[i, j] = self.metric[i, j]
        return FrameTensor((0, 2), arr, (("sym", 0, 1),))

    def frame_basis(self) -> list[VectorField]:
        return [VectorField.basis(i) for i in IDX]

    def __repr__(self):
        return f"FrameManifold(mode={self.mode!r})"


def apply_field(M: FrameManifold, X: VectorField, f) -> sp.Expr:
    """The derivative ``X f``."""
    return canonical(sum(X[i] * M.directional(i, f) for i in IDX))


def lie_bracket(M: FrameManifold, X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]`` via the frame brackets plus derivatives of the components."""
    comps = []
    for k in IDX:
        total = apply_field(M, X, Y[k]) - apply_field(M, Y, X[k])
        total += sum(X[i] * Y[j] * M.brackets[i, j, k] for i in IDX for j in IDX)
        comps.append(total)
    return VectorField(tuple(comps))
