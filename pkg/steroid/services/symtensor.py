"""Dense symmetric tensors: construction, symmetry checks, reshapes, embedding.

Every tensor is stored densely with shape ``(n,) * d``. Vectorization and all
reshapes use the first-index-fastest linearization, so the linear position of
``(i_1, ..., i_d)`` is ``i_1 + n*i_2 + ... + n**(d-1)*i_d`` and
``vec(a o a o ... o a) == kron_power(a, d)``.
"""
import logging
import math
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ConstructionError, NumericError, OrderError, RangeError, ShapeError, SymmetryError
from ..schemas.tensor import OrbitTable, SymTensor


logger = logging.getLogger(__name__)

ArrayLike = Union[SymTensor, np.ndarray]
IndexPair = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _as_array(t: ArrayLike) -> np.ndarray:
    if isinstance(t, SymTensor):
        return t.data
    return np.asarray(t, dtype=np.float64)


def _check_cubical(array: np.ndarray) -> None:
    if array.ndim == 0 or len(set(array.shape)) != 1 or array.shape[0] == 0:
        raise ShapeError(f"expected a cubical array, got shape {array.shape}")


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def embedded_order(order: int) -> int:
    """Smallest power of two that is at least ``order``."""
    return 1 << (order - 1).bit_length()


@lru_cache(maxsize=32)
def orbit_table(order: int, dim: int) -> OrbitTable:
    if order < 1 or dim < 1:
        raise RangeError(f"order and dim must be positive, got {order}, {dim}")
    shape = (dim,) * order
    positions = np.indices(shape).reshape(order, -1).T
    canonical = np.sort(positions, axis=1)
    representatives, inverse, counts = np.unique(
        canonical, axis=0, return_inverse=True, return_counts=True
    )
    orbit_ids = inverse.reshape(shape)
    for array in (representatives, orbit_ids, counts):
        array.flags.writeable = False
    return OrbitTable(
        order=order,
        dim=dim,
        representatives=representatives,
        orbit_ids=orbit_ids,
        counts=counts,
    )


@lru_cache(maxsize=32)
def symmetric_basis(order: int, dim: int) -> np.ndarray:
    """Orthonormal basis of the vectorized symmetric tensors of one shape.

    Column ``k`` is the indicator of orbit ``k`` divided by the square root of
    the orbit size, laid out in the first-index-fastest linearization.
    """
    table = orbit_table(order, dim)
    ids = table.orbit_ids.ravel(order="F")
    basis = np.zeros((ids.size, table.size))
    basis[np.arange(ids.size), ids] = 1.0 / np.sqrt(table.counts[ids])
    basis.flags.writeable = False
    return basis


def new_symmetric(order: int, dim: int, entries: Iterable[Tuple[Sequence[int], float]]) -> SymTensor:
    """Build a symmetric tensor from one value per permutation orbit.

    Indices are 1-based. Orbits that are not mentioned are zero.
    """
    table = orbit_table(order, dim)
    values = np.zeros(table.size)
    assigned = {}
    for index, value in entries:
        index = tuple(int(i) for i in index)
        if len(index) != order:
            raise ShapeError(f"multi-index {index} has {len(index)} components, expected {order}")
        if any(i < 1 or i > dim for i in index):
            raise RangeError(f"multi-index {index} out of range [1, {dim}]")
        key = tuple(sorted((i - 1 for i in index), reverse=True))
        value = float(value)
        if key in assigned and assigned[key] != value:
            orbit = tuple(i + 1 for i in key)
            raise ConstructionError(
                f"conflicting values {assigned[key]!r} and {value!r} on orbit {orbit}"
            )
        assigned[key] = value
        values[table.orbit_ids[key]] = value
    return SymTensor(order=order, dim=dim, data=values[table.orbit_ids])


def from_orbit_values(order: int, dim: int, values: np.ndarray) -> SymTensor:
    table = orbit_table(order, dim)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (table.size,):
        raise ShapeError(f"expected {table.size} orbit values, got {values.shape}")
    return SymTensor(order=order, dim=dim, data=values[table.orbit_ids])


def random_symmetric(
    order: int,
    dim: int,
    rng: np.random.Generator,
    int_range: Optional[Tuple[int, int]] = None,
) -> SymTensor:
    """One random value per orbit: uniform integers in ``int_range``
    (inclusive) or standard normal floats."""
    size = orbit_table(order, dim).size
    if int_range is None:
        values = rng.standard_normal(size)
    else:
        low, high = int_range
        values = rng.integers(low, high, size=size, endpoint=True).astype(np.float64)
    return from_orbit_values(order, dim, values)


def symmetry_violation(t: ArrayLike) -> Tuple[float, Optional[IndexPair]]:
    """Largest ``|t(i) - t(pi(i))|`` over all positions and permutations,
    with the 1-based index pair that attains it."""
    array = _as_array(t)
    _check_cubical(array)
    table = orbit_table(array.ndim, array.shape[0])
    ids = table.orbit_ids.ravel()
    flat = array.ravel()
    high = np.full(table.size, -np.inf)
    low = np.full(table.size, np.inf)
    np.maximum.at(high, ids, flat)
    np.minimum.at(low, ids, flat)
    spread = high - low
    if np.isnan(spread).any():
        return float("nan"), None
    worst = int(np.argmax(spread))
    violation = float(spread[worst])
    if violation == 0.0:
        return 0.0, None
    in_orbit = ids == worst
    first = int(np.flatnonzero(in_orbit & (flat == high[worst]))[0])
    second = int(np.flatnonzero(in_orbit & (flat == low[worst]))[0])
    pair = tuple(
        tuple(int(i) + 1 for i in np.unravel_index(position, array.shape))
        for position in (first, second)
    )
    return violation, pair


def is_symmetric(t: ArrayLike, tol: float = 0.0) -> bool:
    array = _as_array(t)
    violation, _ = symmetry_violation(array)
    scale = max(1.0, float(np.max(np.abs(array))))
    return violation <= tol * scale


def as_symmetric(array: np.ndarray, sym_tol: float = 1e-12) -> SymTensor:
    """Wrap imported data, rejecting non-finite or non-symmetric arrays."""
    array = np.asarray(array, dtype=np.float64)
    _check_cubical(array)
    if not np.all(np.isfinite(array)):
        raise NumericError("tensor has non-finite entries")
    check_symmetric(array, sym_tol)
    return SymTensor.from_array(array)


def check_symmetric(t: ArrayLike, sym_tol: float) -> None:
    array = _as_array(t)
    violation, pair = symmetry_violation(array)
    scale = max(1.0, float(np.max(np.abs(array))))
    if not violation <= sym_tol * scale:
        raise SymmetryError("tensor is not symmetric", violation=violation, index_pair=pair)


def vectorize(t: ArrayLike) -> np.ndarray:
    return np.ravel(_as_array(t), order="F").copy()


def unvectorize(v: np.ndarray, order: int, dim: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != dim ** order:
        raise ShapeError(f"vector of length {v.size} cannot be unvectorized to order {order}, dim {dim}")
    return np.reshape(v, (dim,) * order, order="F")


def reshape_square(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    size = math.isqrt(v.size)
    if v.ndim != 1 or size * size != v.size:
        raise ShapeError(f"vector of length {v.size} is not a perfect square")
    return np.reshape(v, (size, size), order="F")


def reshape_tensor_to_matrix(t: SymTensor) -> np.ndarray:
    """Rows index the first ``d/2`` indices, columns the last ``d/2``."""
    if t.order % 2:
        raise OrderError(f"order {t.order} is odd; embed the tensor first")
    side = t.dim ** (t.order // 2)
    return np.reshape(t.data, (side, side), order="F")


def embed(t: SymTensor) -> SymTensor:
    """Lift ``t`` into a symmetric tensor of order ``2**ceil(log2 d)`` whose
    slice ``B[i_1, ..., i_d, 0, ..., 0]`` equals ``t``. Entries with fewer than
    ``e - d`` zero indices stay zero."""
    if is_power_of_two(t.order):
        return t
    order, dim = embedded_order(t.order), t.dim
    positions = np.indices((dim,) * order).reshape(order, -1).T
    descending = -np.sort(-positions, axis=1)
    padded = np.all(descending[:, t.order:] == 0, axis=1)
    data = np.zeros(positions.shape[0])
    data[padded] = t.data[tuple(descending[padded, : t.order].T)]
    logger.debug(f"embedded order {t.order} into order {order} ({int(padded.sum())} padded positions)")
    return SymTensor(order=order, dim=dim, data=data.reshape((dim,) * order))


def extract_slice(embedded: SymTensor, order: int) -> SymTensor:
    if order > embedded.order or order < 1:
        raise OrderError(f"cannot extract order {order} from order {embedded.order}")
    index = (slice(None),) * order + (0,) * (embedded.order - order)
    return SymTensor(order=order, dim=embedded.dim, data=embedded.data[index])


def frobenius_norm(t: ArrayLike) -> float:
    return float(np.linalg.norm(np.ravel(_as_array(t))))


def inner_product(a: ArrayLike, b: ArrayLike) -> float:
    a, b = _as_array(a), _as_array(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.vdot(a, b))


def kron_power(v: np.ndarray, order: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    result = v
    for _ in range(order - 1):
        result = np.kron(v, result)
    return result


def rank_one(coefficient: float, v: np.ndarray, order: int) -> SymTensor:
    v = np.asarray(v, dtype=np.float64)
    data = coefficient * unvectorize(kron_power(v, order), order, v.shape[0])
    return SymTensor(order=order, dim=v.shape[0], data=data)


def scale(t: SymTensor, factor: float) -> SymTensor:
    return SymTensor(order=t.order, dim=t.dim, data=factor * t.data)


def subtract(a: SymTensor, b: ArrayLike) -> SymTensor:
    other = _as_array(b)
    if other.shape != a.data.shape:
        raise ShapeError(f"shape mismatch {a.data.shape} vs {other.shape}")
    return SymTensor(order=a.order, dim=a.dim, data=a.data - other)
