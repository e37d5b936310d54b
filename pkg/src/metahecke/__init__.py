"""Exact computations in genuine Hecke algebras of the 2-adic metaplectic cover."""

from .cyclo8 import Cyclo8
from .hecke import HeckeAlgebra, HeckeElement
from .metaplectic import Mat2, MetaElement
from .qexp import QExpansion

__all__ = ["Cyclo8", "HeckeAlgebra", "HeckeElement", "Mat2", "MetaElement", "QExpansion"]
__version__ = "0.1.0"
