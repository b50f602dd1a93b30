from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import get_settings


# (level, eigenvalue) pairs from the first reshape down to the leaf
Provenance = Tuple[Tuple[int, float], ...]


class HeadMode(str, Enum):
    ls = "ls"
    eigenproduct = "eigenproduct"


class PurePowerSet(BaseModel):
    """Harvested leaf eigenvectors, stored as the columns of ``vectors``.

    ``head_weights[j]`` is the eigenvalue product that vector ``j`` carries
    in the eigenvalue-product head of the tensor it was harvested from.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(gt=0)
    vectors: np.ndarray
    provenance: Tuple[Provenance, ...] = ()
    head_weights: np.ndarray

    @model_validator(mode="after")
    def validate_columns(self):
        count = self.vectors.shape[1]
        if self.vectors.shape[0] != self.dim:
            raise ValueError("vectors must have dim rows")
        if len(self.provenance) != count or len(self.head_weights) != count:
            raise ValueError("provenance and head_weights must match the vector count")
        return self

    @classmethod
    def empty(cls, dim: int) -> "PurePowerSet":
        return cls(dim=dim, vectors=np.zeros((dim, 0)), provenance=(), head_weights=np.zeros(0))

    @property
    def count(self) -> int:
        return self.vectors.shape[1]

    def extend(self, other: "PurePowerSet") -> "PurePowerSet":
        return PurePowerSet(
            dim=self.dim,
            vectors=np.hstack([self.vectors, other.vectors]),
            provenance=self.provenance + other.provenance,
            head_weights=np.concatenate([self.head_weights, other.head_weights]),
        )


class IterationRecord(BaseModel):
    iteration: int
    pure_powers: int
    columns: int
    rank: int
    residual: float
    head_asymmetry: float
    elapsed: float


class SteroidReport(BaseModel):
    r_max: int
    records: List[IterationRecord] = []


class Term(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coefficient: float
    vector: np.ndarray


class Decomposition(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    order: int = Field(gt=0)
    dim: int = Field(gt=0)
    terms: List[Term] = []
    residual_norm: float = Field(ge=0.0)
    iterations: int = 0
    converged: bool = True
    report: SteroidReport

    @property
    def rank(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([term.coefficient for term in self.terms], dtype=np.float64)

    @property
    def vectors(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((self.dim, 0))
        return np.column_stack([term.vector for term in self.terms])


class DecomposeOptions(BaseModel):
    """Knobs of ``decompose``.

    ``zero_tol`` is relative: an eigenvalue is dropped when its magnitude is at
    most ``zero_tol`` times the largest one at that level. ``None`` means
    ``m * eps``. ``rank_tol`` is the absolute rank threshold of the fit.
    """

    tau: float = 1e-10
    max_tail_iters: int = 10
    zero_tol: Optional[float] = None
    rank_tol: Optional[float] = None
    dedup_tol: float = 1e-10
    prune_tol: float = 1e-12
    stagnation_tol: float = 1e-3
    sym_tol: float = 1e-12
    max_sweeps: int = 100
    head: HeadMode = HeadMode.ls

    @model_validator(mode="after")
    def validate_tolerances(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.max_tail_iters < 0:
            raise ValueError("max_tail_iters must be non-negative")
        for name in ("zero_tol", "rank_tol", "dedup_tol", "prune_tol", "stagnation_tol", "sym_tol"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "DecomposeOptions":
        settings = get_settings()
        values = {
            "tau": settings.tau,
            "max_tail_iters": settings.max_tail_iters,
            "dedup_tol": settings.dedup_tol,
            "prune_tol": settings.prune_tol,
            "stagnation_tol": settings.stagnation_tol,
            "sym_tol": settings.sym_tol,
            "max_sweeps": settings.max_sweeps,
            "head": settings.head,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
