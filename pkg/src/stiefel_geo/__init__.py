"""Closed-form extremal curves on Stiefel and Grassmann manifolds over R, C and H."""
from .geodesics import Curve, CurveSpec
from .grassmann import GrassmannPoint
from .lie import DistKind, Distribution, verify_structure
from .linalg import QMatrix, expm
from .metrics import MetricTag, TangentVector, stiefel_norm
from .scalars import Algebra, Quaternion

__all__ = [
    "Algebra",
    "Curve",
    "CurveSpec",
    "DistKind",
    "Distribution",
    "GrassmannPoint",
    "MetricTag",
    "QMatrix",
    "Quaternion",
    "TangentVector",
    "expm",
    "stiefel_norm",
    "verify_structure",
]

__version__ = "0.1.0"
