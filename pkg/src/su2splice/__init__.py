"""SU(2) character varieties of splices of torus knot exteriors."""

from .presentations import PLUS_ONE_GLUING, GluingMatrix, first_homology, splice
from .splice import Piece, census

__all__ = ["GluingMatrix", "PLUS_ONE_GLUING", "Piece", "census", "first_homology", "splice"]
__version__ = "0.1.0"
