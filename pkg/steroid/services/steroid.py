"""The STEROID decomposition driver.

A tensor of order ``2**k`` is reshaped into a square matrix and
eigendecomposed; every eigenvector with a non-zero eigenvalue is reshaped
square again and decomposed in turn until the eigenvectors have length ``n``.
Those leaves are the pure-power candidates ``v``. The coefficients come from a
minimum-norm least-squares fit of ``vec(A)`` by the columns ``v^{(x)d}``. While
the residual is too large, the tail tensor ``A - H`` is harvested the same way
and the fit is repeated with the extended column set.

Tensors whose order is not a power of two are embedded first. The leaves of the
embedded tensor are still fitted against the original tensor at its own order.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import NumericError, OrderError, RangeError, SteroidError
from ..schemas.decomposition import (
    DecomposeOptions,
    Decomposition,
    HeadMode,
    IterationRecord,
    PurePowerSet,
    SteroidReport,
    Term,
)
from ..schemas.linalg import LsqResult
from ..schemas.tensor import SymTensor
from ..utils.time import Stopwatch
from .eiglsq import DEFAULT_MAX_SWEEPS, EPS, lstsq, numerical_zero_mask, sym_eig
from .symtensor import (
    check_symmetric,
    embed,
    frobenius_norm,
    is_power_of_two,
    orbit_table,
    reshape_square,
    reshape_tensor_to_matrix,
    symmetric_basis,
    symmetry_violation,
    unvectorize,
)


logger = logging.getLogger(__name__)

# columns per block when pure powers are expanded to full length
_BLOCK = 64

Leaf = Tuple[np.ndarray, Tuple[Tuple[int, float], ...]]


def r_max(order: int, dim: int) -> int:
    """Number of distinct degree-``order`` monomials in ``dim`` variables,
    the bound on the rank of ``X``."""
    if order < 1 or dim < 1:
        raise RangeError(f"order and dim must be positive, got {order}, {dim}")
    value = math.comb(order + dim - 1, dim - 1)
    if value > np.iinfo(np.int64).max:
        raise RangeError(f"r_max({order}, {dim}) exceeds the 64-bit integer range")
    return value


def _head_weight(provenance: Tuple[Tuple[int, float], ...]) -> float:
    # lambda_0 * prod_{m >= 1} lambda_m ** (2 ** m)
    weight = 1.0
    for level, eigenvalue in provenance:
        weight *= eigenvalue ** (1 if level == 0 else 2 ** level)
    return weight


def _descend(
    matrix: np.ndarray,
    half_order: int,
    provenance: Tuple[Tuple[int, float], ...],
    path: Tuple[int, ...],
    dim: int,
    zero_tol: Optional[float],
    max_sweeps: int,
    leaves: List[Leaf],
) -> None:
    # rows and columns of ``matrix`` are vectorized symmetric tensors of order
    # ``half_order``, so M = Q (Q^T M Q) Q^T for the orbit basis Q and every
    # eigenvalue outside span(Q) is zero
    level = len(provenance)
    basis = symmetric_basis(half_order, dim)
    compressed = basis.T @ matrix @ basis
    try:
        eig = sym_eig(0.5 * (compressed + compressed.T), max_sweeps=max_sweeps)
    except SteroidError as exc:
        raise exc.add_context(f"recursion path {path or '(root)'}")
    largest = float(np.max(np.abs(eig.eigenvalues)))
    relative = matrix.shape[0] * EPS if zero_tol is None else zero_tol
    keep = np.flatnonzero(~numerical_zero_mask(eig, relative * largest))
    logger.debug(
        f"level {level} path {path}: {len(keep)} of {matrix.shape[0]} eigenvalues kept "
        f"({eig.size} in the symmetric subspace)"
    )

    vectors = basis @ eig.eigenvectors[:, keep]
    pivots = np.argmax(np.abs(vectors), axis=0)
    vectors *= np.where(vectors[pivots, np.arange(len(keep))] < 0.0, -1.0, 1.0)
    for column, index in enumerate(keep):
        chain = provenance + ((level, float(eig.eigenvalues[index])),)
        if half_order == 1:
            leaves.append((vectors[:, column].copy(), chain))
        else:
            _descend(
                reshape_square(vectors[:, column]), half_order // 2, chain,
                path + (int(index),), dim, zero_tol, max_sweeps, leaves,
            )


def _deduplicate(vectors: np.ndarray, order: int, dedup_tol: float, against: Optional[np.ndarray] = None):
    """Greedy parallel-vector removal. Returns the kept column indices and, for
    every dropped column, ``(kept_index, sign)`` of the column it merges into
    (``kept_index`` is -1 when it duplicates a column of ``against``)."""
    kept: List[int] = []
    merged = {}
    limit = 1.0 - dedup_tol
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        if against is not None and against.shape[1]:
            if np.max(np.abs(against.T @ column)) >= limit:
                merged[j] = (-1, 1.0)
                continue
        if kept:
            overlaps = vectors[:, kept].T @ column
            best = int(np.argmax(np.abs(overlaps)))
            if abs(overlaps[best]) >= limit:
                merged[j] = (kept[best], float(np.sign(overlaps[best])) ** order)
                continue
        kept.append(j)
    return kept, merged


def harvest_pure_powers(
    tensor: SymTensor,
    zero_tol: Optional[float] = None,
    dedup_tol: float = 1e-10,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> PurePowerSet:
    """Leaves of the recursive eigendecomposition of a tensor of order ``2**k``.

    Branches whose eigenvalue is numerically zero are pruned at every level.
    Leaves parallel up to sign are merged; their eigenvalue-product head
    weights are summed.
    """
    if tensor.order < 2 or not is_power_of_two(tensor.order):
        raise OrderError(f"harvest needs an order that is a power of two >= 2, got {tensor.order}")
    leaves: List[Leaf] = []
    _descend(
        reshape_tensor_to_matrix(tensor), tensor.order // 2, (), (), tensor.dim, zero_tol, max_sweeps, leaves,
    )
    if not leaves:
        return PurePowerSet.empty(tensor.dim)

    vectors = np.column_stack([vector for vector, _ in leaves])
    weights = np.array([_head_weight(chain) for _, chain in leaves])
    kept, merged = _deduplicate(vectors, tensor.order, dedup_tol)
    for dropped, (target, sign) in merged.items():
        weights[target] += sign * weights[dropped]
    logger.debug(f"harvested {len(leaves)} leaves, {len(kept)} after deduplication")
    return PurePowerSet(
        dim=tensor.dim,
        vectors=vectors[:, kept],
        provenance=tuple(leaves[j][1] for j in kept),
        head_weights=weights[kept],
    )


def _kron_columns(vectors: np.ndarray, order: int) -> np.ndarray:
    columns = vectors
    for _ in range(order - 1):
        columns = (vectors[:, None, :] * columns[None, :, :]).reshape(-1, vectors.shape[1])
    return columns


def build_x(pp: PurePowerSet, order: int) -> np.ndarray:
    """``n**d x |pp|`` matrix whose columns are ``v_j^{(x)d}``."""
    if pp.count == 0:
        return np.zeros((pp.dim ** order, 0))
    return _kron_columns(pp.vectors, order)


def _combine(vectors: np.ndarray, coefficients: np.ndarray, order: int) -> np.ndarray:
    """Dense ``sum_j c_j v_j o ... o v_j`` built block by block."""
    dim = vectors.shape[0]
    total = np.zeros(dim ** order)
    for start in range(0, vectors.shape[1], _BLOCK):
        block = slice(start, start + _BLOCK)
        total += _kron_columns(vectors[:, block], order) @ coefficients[block]
    return unvectorize(total, order, dim)


class OrbitFit:
    """Least-squares fit on one row per permutation orbit.

    Rows of ``X`` and ``vec(A)`` within an orbit are equal, so scaling one
    representative row by the square root of the orbit size gives the same
    residual, the same minimizers and the same rank as the full problem.
    """

    def __init__(self, tensor: SymTensor):
        table = orbit_table(tensor.order, tensor.dim)
        self.order = tensor.order
        self.indices = table.representatives
        self.weights = np.sqrt(table.counts.astype(np.float64))
        self.target = self.weights * tensor.data[tuple(self.indices.T)]

    def design(self, vectors: np.ndarray) -> np.ndarray:
        return self.weights[:, None] * np.prod(vectors[self.indices], axis=1)

    def solve(self, vectors: np.ndarray, rank_tol: Optional[float] = None) -> LsqResult:
        return lstsq(self.design(vectors), self.target, rank_tol)

    def residual(self, vectors: np.ndarray, coefficients: np.ndarray) -> float:
        if vectors.shape[1] == 0:
            return float(np.linalg.norm(self.target))
        return float(np.linalg.norm(self.target - self.design(vectors) @ coefficients))


def _eigenproduct_head(harvest: PurePowerSet, order: int, embedded_order: int) -> np.ndarray:
    # slice B[i_1..i_d, 0..0] of the embedded head picks up v[0] ** (e - d)
    coefficients = harvest.head_weights * harvest.vectors[0, :] ** (embedded_order - order)
    return _combine(harvest.vectors, coefficients, order)


def _vector_decomposition(tensor: SymTensor, norm: float, stopwatch: Stopwatch) -> Decomposition:
    vector = tensor.data / norm
    coefficient = norm
    if vector[int(np.argmax(np.abs(vector)))] < 0.0:
        vector, coefficient = -vector, -coefficient
    residual = float(np.linalg.norm(tensor.data - coefficient * vector))
    record = IterationRecord(
        iteration=0, pure_powers=1, columns=1, rank=1, residual=residual,
        head_asymmetry=0.0, elapsed=stopwatch.elapsed(),
    )
    return Decomposition(
        order=1,
        dim=tensor.dim,
        terms=[Term(coefficient=coefficient, vector=vector)],
        residual_norm=residual,
        converged=True,
        report=SteroidReport(r_max=r_max(1, tensor.dim), records=[record]),
    )


def decompose(tensor: SymTensor, options: Optional[DecomposeOptions] = None) -> Decomposition:
    options = options or DecomposeOptions.from_settings()
    if not np.all(np.isfinite(tensor.data)):
        raise NumericError("tensor has non-finite entries")
    check_symmetric(tensor, options.sym_tol)

    stopwatch = Stopwatch()
    order, dim = tensor.order, tensor.dim
    bound = r_max(order, dim)
    norm = frobenius_norm(tensor)
    threshold = options.tau * max(1.0, norm)

    if norm == 0.0:
        record = IterationRecord(
            iteration=0, pure_powers=0, columns=0, rank=0, residual=0.0,
            head_asymmetry=0.0, elapsed=stopwatch.elapsed(),
        )
        return Decomposition(
            order=order, dim=dim, residual_norm=0.0, report=SteroidReport(r_max=bound, records=[record]),
        )
    if order == 1:
        return _vector_decomposition(tensor, norm, stopwatch)

    fit = OrbitFit(tensor)
    pool = PurePowerSet.empty(dim)
    target = tensor
    records: List[IterationRecord] = []
    tail_passes = 0
    previous: Optional[float] = None

    while True:
        lifted = embed(target)
        harvest = harvest_pure_powers(lifted, options.zero_tol, options.dedup_tol, options.max_sweeps)
        kept, _ = _deduplicate(harvest.vectors, order, options.dedup_tol, against=pool.vectors)
        if tail_passes > 0 and not kept:
            logger.info(f"tail pass {tail_passes} added no new pure powers; stopping")
            break
        pool = pool.extend(PurePowerSet(
            dim=dim,
            vectors=harvest.vectors[:, kept],
            provenance=tuple(harvest.provenance[j] for j in kept),
            head_weights=harvest.head_weights[kept],
        ))
        result = fit.solve(pool.vectors, options.rank_tol)

        if options.head == HeadMode.ls:
            head = _combine(pool.vectors, result.solution, order)
            next_target_base = tensor
        else:
            head = _eigenproduct_head(harvest, order, lifted.order)
            next_target_base = target
        asymmetry, _ = symmetry_violation(head)

        records.append(IterationRecord(
            iteration=tail_passes,
            pure_powers=harvest.count,
            columns=pool.count,
            rank=result.numerical_rank,
            residual=result.residual_norm,
            head_asymmetry=asymmetry,
            elapsed=stopwatch.elapsed(),
        ))
        logger.info(
            f"pass {tail_passes}: {harvest.count} pure powers, {pool.count} columns, "
            f"rank {result.numerical_rank}/{bound}, residual {result.residual_norm:.3e}"
        )

        residual = result.residual_norm
        if residual <= threshold or tail_passes >= options.max_tail_iters:
            break
        if (
            previous is not None
            and result.numerical_rank >= bound
            and previous - residual < options.stagnation_tol * previous
        ):
            logger.info(f"residual stagnated at full rank {bound}; stopping")
            break
        previous = residual
        target = SymTensor(order=order, dim=dim, data=next_target_base.data - head)
        tail_passes += 1

    coefficients = result.solution
    largest = float(np.max(np.abs(coefficients))) if coefficients.size else 0.0
    survivors = np.flatnonzero(np.abs(coefficients) > options.prune_tol * largest)
    if len(survivors) < np.count_nonzero(coefficients):
        logger.debug(f"pruned {np.count_nonzero(coefficients) - len(survivors)} negligible coefficients")
    vectors = pool.vectors[:, survivors]
    residual = fit.residual(vectors, coefficients[survivors])
    converged = residual <= threshold
    if not converged:
        logger.warning(
            f"decomposition unconverged after {tail_passes} tail passes: "
            f"residual {residual:.3e} > {threshold:.3e}"
        )
    return Decomposition(
        order=order,
        dim=dim,
        terms=[Term(coefficient=float(coefficients[j]), vector=pool.vectors[:, j].copy()) for j in survivors],
        residual_norm=residual,
        iterations=tail_passes,
        converged=converged,
        report=SteroidReport(r_max=bound, records=records),
    )


def reconstruct(dec: Decomposition) -> SymTensor:
    data = _combine(dec.vectors, dec.coefficients, dec.order)
    return SymTensor(order=dec.order, dim=dec.dim, data=data)
