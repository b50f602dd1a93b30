from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=np.float64, copy=True)
    array.flags.writeable = False
    return array


class SymTensor(BaseModel):
    """Dense cubical tensor of shape ``(dim,) * order``.

    ``data[i_1, ..., i_d]`` holds the entry with 0-based indices. The
    linearization used by ``vectorize`` and every reshape lets ``i_1`` vary
    fastest (Fortran order).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    order: int = Field(gt=0)
    dim: int = Field(gt=0)
    data: np.ndarray

    @field_validator("data", mode="before")
    @classmethod
    def copy_data(cls, value: Any) -> np.ndarray:
        return _frozen_array(value)

    @model_validator(mode="after")
    def validate_shape(self):
        if self.data.shape != (self.dim,) * self.order:
            raise ValueError(
                f"data shape {self.data.shape} does not match order {self.order}, dim {self.dim}"
            )
        return self

    @classmethod
    def from_array(cls, array: Any) -> "SymTensor":
        array = np.asarray(array, dtype=np.float64)
        return cls(order=array.ndim, dim=array.shape[0], data=array)

    @property
    def size(self) -> int:
        return self.dim ** self.order


class OrbitTable(BaseModel):
    """Permutation orbits of the multi-indices of a cubical tensor.

    ``representatives[k]`` is the ascending-sorted 0-based multi-index of
    orbit ``k``; orbits are listed in lexicographic order of their
    representatives. ``orbit_ids[i_1, ..., i_d]`` is the orbit of a position
    and ``counts[k]`` the number of positions in orbit ``k``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    order: int
    dim: int
    representatives: np.ndarray
    orbit_ids: np.ndarray
    counts: np.ndarray

    @property
    def size(self) -> int:
        return len(self.counts)
