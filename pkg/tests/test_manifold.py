from __future__ import annotations

import numpy as np
import pytest
import sympy as sp

from transsasakian.manifold import (FrameManifold, FrameTensor, ManifoldError, VectorField,
                                    apply_field, lie_bracket, obj_array)
from transsasakian.scalar import COORDS

x, y, z = COORDS
E = sp.exp(2 * z)


def warped() -> FrameManifold:
    return FrameManifold.chart([[E, 0, 0], [0, E, 0], [0, 0, 1]])


def test_chart_brackets_of_warped_frame():
    c = warped().brackets
    assert list(c[0, 2]) == [-2, 0, 0]
    assert list(c[1, 2]) == [0, -2, 0]
    assert list(c[0, 1]) == [0, 0, 0]
    assert list(c[2, 0]) == [2, 0, 0]


def test_frame_inverse_is_exact():
    M = warped()
    assert (M.frame * M.frame_inverse).applyfunc(sp.expand) == sp.eye(3)


def test_directional_derivative():
    M = warped()
    assert M.directional(0, x * z) == E * z
    assert M.directional(2, x * z) == x
    assert apply_field(M, VectorField((1, 0, x)), y * z) == x * y


def test_lie_mode_rejects_non_constant_functions():
    M = FrameManifold.lie(np.zeros((3, 3, 3), dtype=int).tolist())
    assert M.directional(0, 5) == 0
    with pytest.raises(ManifoldError):
        M.directional(0, x)


def test_singular_or_non_unit_frames_rejected():
    with pytest.raises(ManifoldError, match="determinant"):
        FrameManifold.chart([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    with pytest.raises(ManifoldError, match="determinant"):
        FrameManifold.chart([[x, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_structure_constants_validated():
    bad = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    bad[0][1] = [0, 0, 1]  # no antisymmetric partner
    with pytest.raises(ManifoldError, match="antisymmetric"):
        FrameManifold.lie(bad)
    # [e1,e2] = e3, [e1,e3] = e1 violates Jacobi
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]}.items():
        c[i][j] = v
        c[j][i] = [-t for t in v]
    with pytest.raises(ManifoldError, match="Jacobi"):
        FrameManifold.lie(c)


def test_metric_validation():
    frame = sp.eye(3)
    with pytest.raises(ManifoldError, match="symmetric"):
        FrameManifold.chart(frame, metric=[[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(ManifoldError, match="positive definite"):
        FrameManifold.chart(frame, metric=[[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    with pytest.raises(ManifoldError, match="Gram determinant"):
        FrameManifold.chart(frame, metric=[[1 + x**2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_lie_bracket_antisymmetric_and_matches_frame():
    M = warped()
    X = VectorField((x, 0, 1))
    Y = VectorField((0, z, y))
    assert (lie_bracket(M, X, Y) + lie_bracket(M, Y, X)).is_zero()
    assert lie_bracket(M, VectorField.basis(0), VectorField.basis(2)) == VectorField((-2, 0, 0))


def test_coordinates_round_trip():
    M = warped()
    X = VectorField((x, y * E, 1))
    assert M.from_coordinates(M.to_coordinates(X)) == X


def test_tensor_eval_and_shape_checks():
    comps = obj_array((3, 3))
    for i in range(3):
        for j in range(3):
            comps[i, j] = sp.Integer(i + 2 * j)
    T = FrameTensor((0, 2), comps)
    assert T(VectorField.basis(1), VectorField.basis(2)) == 5
    assert T(VectorField((1, 1, 0)), VectorField((0, 0, x))) == 4 * x + 4 * x + x * 0 + x
    with pytest.raises(ManifoldError):
        T(VectorField.basis(0))
    with pytest.raises(ManifoldError):
        FrameTensor((2, 0), obj_array((3, 3)))
    with pytest.raises(ManifoldError):
        FrameTensor((1, 4), obj_array((3,) * 5))
