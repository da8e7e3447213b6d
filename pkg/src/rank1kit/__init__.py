"""Computational toolkit for rank-one hyperbolic geometry over the four
normed division algebras: boundary arithmetic, ball-model projections,
isometry actions, trace identities, and marked-length-spectrum
reconstruction."""

from .algebra import AlgebraElement, AlgebraKind
from .nilboundary import NilPoint, SpaceConfig
from .ballmodel import BallPoint
from .isometry import GroupMatrix, NormalIsometry, NotHyperbolicError
from .sl2traces import SL2, SL2Rep, NonLoxodromicError
from .spectrum import FixedPair, LengthOracle, OracleMissError

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "AlgebraKind",
    "BallPoint",
    "FixedPair",
    "GroupMatrix",
    "LengthOracle",
    "NilPoint",
    "NonLoxodromicError",
    "NormalIsometry",
    "NotHyperbolicError",
    "OracleMissError",
    "SL2",
    "SL2Rep",
    "SpaceConfig",
    "__version__",
]
