"""Slow, independent re-computations used to check the main code paths.

Nothing here imports the tensor, eigen or fitting kernels of the package; the
checks are plain loops over entries and terms plus LAPACK through numpy.
"""
import itertools
import math
from typing import Optional

import numpy as np

from ..exceptions import RangeError, ShapeError
from ..schemas.decomposition import Decomposition
from ..schemas.oracle import OracleReport
from ..schemas.tensor import SymTensor


# relative cut-off on Gram-matrix eigenvalues (squared singular values)
GRAM_RANK_TOL = 1e-10
MAX_ENUMERATION = 10 ** 5


def naive_kron_power(vector: np.ndarray, order: int) -> np.ndarray:
    if order < 1:
        raise RangeError(f"order must be at least 1, got {order}")
    values = [float(x) for x in vector]
    for _ in range(order - 1):
        values = [b * a for b in vector for a in values]
    return np.array(values, dtype=np.float64)


def _gram_rank(gram: np.ndarray) -> int:
    if gram.size == 0:
        return 0
    eigenvalues = np.linalg.eigvalsh(gram)
    top = float(np.max(eigenvalues))
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(eigenvalues > GRAM_RANK_TOL * top))


def verify_decomposition(tensor: SymTensor, dec: Decomposition) -> OracleReport:
    if dec.order != tensor.order or dec.dim != tensor.dim:
        raise ShapeError(
            f"decomposition has order {dec.order}, dim {dec.dim}; "
            f"tensor has order {tensor.order}, dim {tensor.dim}"
        )
    order, dim = tensor.order, tensor.dim
    coefficients = np.array([term.coefficient for term in dec.terms], dtype=np.float64)
    vectors = np.array([term.vector for term in dec.terms], dtype=np.float64).reshape(len(dec.terms), dim)

    reconstruction = np.zeros((dim,) * order)
    for index in itertools.product(range(dim), repeat=order):
        reconstruction[index] = float(coefficients @ np.prod(vectors[:, list(index)], axis=1))

    squared_error = 0.0
    violation = 0.0
    for index in itertools.product(range(dim), repeat=order):
        squared_error += (tensor.data[index] - reconstruction[index]) ** 2
        canonical = tuple(sorted(index))
        violation = max(violation, abs(reconstruction[index] - reconstruction[canonical]))

    gram = (vectors @ vectors.T) ** order
    bound = math.comb(order + dim - 1, dim - 1)
    return OracleReport(
        max_symmetry_violation=violation,
        reconstruction_error=math.sqrt(squared_error),
        monomial_rank_bound_holds=_gram_rank(gram) <= bound,
    )


def monomial_rank(dim: int, order: int, count: int, rng: np.random.Generator) -> int:
    """Rank of ``count`` random unit pure powers, measured on their Gram matrix."""
    if dim ** order > MAX_ENUMERATION:
        raise RangeError(f"{dim}**{order} entries is too many to enumerate")
    columns = []
    for _ in range(count):
        vector = rng.standard_normal(dim)
        vector /= math.sqrt(sum(x * x for x in vector))
        columns.append(naive_kron_power(vector, order))
    x = np.column_stack(columns)
    return _gram_rank(x.T @ x)


def monomial_rank_oracle(dim: int, order: int, trials: int, seed: Optional[int] = 0) -> bool:
    bound = math.comb(order + dim - 1, dim - 1)
    rng = np.random.default_rng(seed)
    return all(monomial_rank(dim, order, bound + 5, rng) <= bound for _ in range(trials))


def characteristic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues as the roots of the Faddeev-LeVerrier characteristic
    polynomial, sorted descending. Meant for small matrices only."""
    a = np.asarray(matrix, dtype=np.float64)
    size = a.shape[0]
    identity = np.eye(size)
    m = identity
    coefficients = [1.0]
    for k in range(1, size + 1):
        am = a @ m
        c = -float(np.trace(am)) / k
        coefficients.append(c)
        m = am + c * identity
    roots = np.roots(coefficients)
    return np.sort(roots.real)[::-1]
