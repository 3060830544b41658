"""Gibbs and conformal measures on the two-sided beta-shift, computed at finite depth."""

__version__ = "0.1.0"

from .algebra import BetaNumber
from .beta_lang import BetaShift, DigitStream, expand
from .potential import Potential, parse_potential
from .shift_space import FinitePoint, Window

__all__ = [
    "BetaNumber",
    "BetaShift",
    "DigitStream",
    "FinitePoint",
    "Potential",
    "Window",
    "expand",
    "parse_potential",
    "__version__",
]
