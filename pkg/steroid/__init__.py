"""Real symmetric tensor decomposition into symmetric unit-norm rank-1 terms."""
from .schemas import DecomposeOptions, Decomposition, SymTensor
from .services.steroid import decompose, reconstruct, r_max

__all__ = ["DecomposeOptions", "Decomposition", "SymTensor", "decompose", "reconstruct", "r_max"]
