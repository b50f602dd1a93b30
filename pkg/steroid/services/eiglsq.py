"""Symmetric eigendecomposition and minimum-norm least squares.

``sym_eig`` runs cyclic Jacobi sweeps. A sweep visits every index pair once in
a fixed round-robin order; the pairs of one round are disjoint, so a round is
applied as a single vectorized rotation over its pairs with a non-zero
off-diagonal entry. ``lstsq`` uses Householder QR with
column pivoting and completes the rank-deficient case with a second QR
(complete orthogonal factorization), which yields the minimum-norm solution.
"""
import logging
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from ..exceptions import ConvergenceError, NumericError, ShapeError, SymmetryError
from ..schemas.linalg import EigResult, LsqResult


logger = logging.getLogger(__name__)

EPS = float(np.finfo(np.float64).eps)

# relative asymmetry tolerated by sym_eig before it symmetrizes
SYMMETRY_TOL = 1e-8
DEFAULT_MAX_SWEEPS = 100

Round = Tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=None)
def round_robin(size: int) -> Tuple[Round, ...]:
    """Rounds of disjoint pairs ``(p, q)``, ``p < q``, covering every pair once."""
    players = list(range(size + size % 2))
    count = len(players)
    rounds = []
    for _ in range(count - 1):
        pairs = [
            tuple(sorted((players[i], players[count - 1 - i])))
            for i in range(count // 2)
        ]
        pairs = [pair for pair in pairs if pair[1] < size]
        rounds.append((
            np.array([p for p, _ in pairs], dtype=np.intp),
            np.array([q for _, q in pairs], dtype=np.intp),
        ))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _off_diagonal(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    app, aqq, apq = a[p, p], a[q, q], a[p, q]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        theta = (aqq - app) / (2.0 * apq)
        t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    col_p, col_q = a[:, p], a[:, q]
    a[:, p] = col_p * c - col_q * s
    a[:, q] = col_p * s + col_q * c
    row_p, row_q = a[p, :], a[q, :]
    a[p, :] = c[:, None] * row_p - s[:, None] * row_q
    a[q, :] = s[:, None] * row_p + c[:, None] * row_q
    a[p, p] = app - t * apq
    a[q, q] = aqq + t * apq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vec_p, vec_q = v[:, p], v[:, q]
    v[:, p] = vec_p * c - vec_q * s
    v[:, q] = vec_p * s + vec_q * c


def sym_eig(
    matrix: np.ndarray,
    zero_tol: Optional[float] = None,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> EigResult:
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericError("matrix has non-finite entries")
    size = a.shape[0]
    if size == 0:
        return EigResult(eigenvalues=np.zeros(0), eigenvectors=np.zeros((0, 0)), zero_tol=0.0)

    scale = max(1.0, float(np.max(np.abs(a))))
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > SYMMETRY_TOL * scale:
        raise SymmetryError(f"matrix is not symmetric (max |A - A^T| = {asymmetry:.3e})")
    a = 0.5 * (a + a.T)

    v = np.eye(size)
    threshold = size * EPS * float(np.linalg.norm(a))
    rounds = round_robin(size)
    sweeps = 0
    while _off_diagonal(a) > threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (size {size})")
        for p, q in rounds:
            active = a[p, q] != 0.0
            if active.any():
                _rotate(a, v, p[active], q[active])
        sweeps += 1

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-np.abs(eigenvalues), kind="stable")
    eigenvalues = eigenvalues[order]
    v = v[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    v *= np.where(v[pivots, np.arange(size)] < 0.0, -1.0, 1.0)

    if zero_tol is None:
        zero_tol = size * EPS * float(np.max(np.abs(eigenvalues)))
    return EigResult(eigenvalues=eigenvalues, eigenvectors=v, zero_tol=zero_tol, sweeps=sweeps)


def numerical_zero_mask(eig: EigResult, zero_tol: Optional[float] = None) -> np.ndarray:
    tol = eig.zero_tol if zero_tol is None else zero_tol
    return np.abs(eig.eigenvalues) <= tol


def lstsq(x: np.ndarray, b: np.ndarray, rank_tol: Optional[float] = None) -> LsqResult:
    """Minimum-norm solution of ``min ||b - X l||``.

    The default rank threshold is ``max(rows, cols) * eps * |R_11|``, where
    ``|R_11|`` is the largest column norm of ``X``.
    """
    x = np.asarray(x, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if x.ndim != 2 or b.ndim != 1 or x.shape[0] != b.shape[0]:
        raise ShapeError(f"cannot fit X of shape {x.shape} to b of shape {b.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(b))):
        raise NumericError("least-squares input has non-finite entries")
    rows, cols = x.shape
    solution = np.zeros(cols)
    if rows == 0 or cols == 0:
        return LsqResult(
            solution=solution,
            residual_norm=float(np.linalg.norm(b)),
            numerical_rank=0,
            rank_tol=rank_tol or 0.0,
        )

    q, r, pivots = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    if rank_tol is None:
        rank_tol = max(rows, cols) * EPS * float(diagonal[0])
    small = np.flatnonzero(diagonal <= rank_tol)
    rank = int(small[0]) if small.size else len(diagonal)

    if rank > 0:
        qtb = q[:, :rank].T @ b
        if rank == cols:
            y = scipy.linalg.solve_triangular(r[:rank, :rank], qtb)
        else:
            z, t = scipy.linalg.qr(r[:rank, :].T, mode="economic")
            y = z @ scipy.linalg.solve_triangular(t, qtb, trans="T")
        solution[pivots] = y

    residual = float(np.linalg.norm(b - x @ solution))
    return LsqResult(solution=solution, residual_norm=residual, numerical_rank=rank, rank_tol=rank_tol)
