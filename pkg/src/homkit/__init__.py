"""homkit: exact one-sided homological algebra over presented abelian groups."""

from ._backend import BACKEND
from .intlin import GF, QQ, ZZ, Matrix, SmithDecomposition, snf, solve_in_image, saturate

__all__ = [
    "BACKEND",
    "GF",
    "QQ",
    "ZZ",
    "Matrix",
    "SmithDecomposition",
    "snf",
    "solve_in_image",
    "saturate",
]

__version__ = "0.1.0"
