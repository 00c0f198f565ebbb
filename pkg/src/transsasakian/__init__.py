"""Exact frame-based tensor calculus for 3-dimensional trans-Sasakian manifolds."""

__version__ = "0.1.0"

from .manifold import FrameManifold, FrameTensor, VectorField, apply_field, lie_bracket, tensor_eval  # noqa: E402
from .connection import (Connection, covariant_derivative, levi_civita,  # noqa: E402
                         lie_derivative_connection, lie_derivative_curvature,
                         lie_derivative_metric)
from .curvature import CurvatureBundle, curvature_bundle, ricci, riemann, star_ricci  # noqa: E402

__all__ = [
    "Connection",
    "CurvatureBundle",
    "FrameManifold",
    "FrameTensor",
    "VectorField",
    "apply_field",
    "covariant_derivative",
    "curvature_bundle",
    "levi_civita",
    "lie_bracket",
    "lie_derivative_connection",
    "lie_derivative_curvature",
    "lie_derivative_metric",
    "ricci",
    "riemann",
    "star_ricci",
    "tensor_eval",
]
