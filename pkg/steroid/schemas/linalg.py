import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class EigResult(BaseModel):
    """Eigenpairs of a dense symmetric matrix.

    Eigenvalues are sorted by descending magnitude and ``eigenvectors[:, i]``
    belongs to ``eigenvalues[i]``. Each eigenvector has its entry of largest
    magnitude positive (lowest index on ties). ``zero_tol`` is the threshold
    below which an eigenvalue counts as numerically zero.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_tol: float = Field(ge=0.0)
    sweeps: int = 0

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


class LsqResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    solution: np.ndarray
    residual_norm: float = Field(ge=0.0)
    numerical_rank: int = Field(ge=0)
    rank_tol: float = Field(ge=0.0)
