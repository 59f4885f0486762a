"""Dense symmetric eigensolver (cyclic Jacobi) and the graph matrices A(G), Q(G).

The solver works on a stack of matrices at once. Each sweep visits every off-diagonal pair
exactly once in round-robin order; within a round the pairs are disjoint, so their rotations
commute and are applied together. A single matrix is a stack of one.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ngspread.config import settings
from ngspread.core.graph import Graph
from ngspread.errors import InvalidParameterError, NumericFailureError

logger = structlog.get_logger(__name__)

MAX_MATRIX_ORDER = 64
NONNEG_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric matrix; entries are stored read-only."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise InvalidParameterError(f"expected a non-empty square matrix, got shape {entries.shape}")
        if entries.shape[0] > MAX_MATRIX_ORDER:
            raise InvalidParameterError(f"matrix order must be at most {MAX_MATRIX_ORDER}")
        if not np.array_equal(entries, entries.T):
            raise InvalidParameterError("matrix is not exactly symmetric")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries))


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Eigenvalue with a unit eigenvector and its residual ||M v - value v||_inf."""

    value: float
    vector: np.ndarray
    residual: float


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues in non-increasing order."""

    values: Tuple[float, ...]
    max_residual: float

    def to_json(self) -> List[float]:
        return list(self.values)


def adjacency_matrix(g: Graph) -> SymMatrix:
    entries = np.zeros((g.n, g.n))
    for u, v in g.edges():
        entries[u, v] = entries[v, u] = 1.0
    return SymMatrix(entries)


def signless_laplacian(g: Graph) -> SymMatrix:
    """Q(G) = D(G) + A(G)."""
    entries = np.array(adjacency_matrix(g).entries)
    entries[np.diag_indices(g.n)] = g.degrees()
    return SymMatrix(entries)


@lru_cache(maxsize=None)
def round_robin(n: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint (p, q) pairs, p < q, covering every pair once (circle method)."""
    players = list(range(n)) + ([n] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = sorted(
            (min(a, b), max(a, b))
            for a, b in ((players[i], players[m - 1 - i]) for i in range(m // 2))
            if a < n and b < n
        )
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(stack: np.ndarray) -> np.ndarray:
    off = stack.copy()
    idx = np.arange(stack.shape[1])
    off[:, idx, idx] = 0.0
    return np.sqrt(np.einsum("bij,bij->b", off, off))


def _rotate_round(stack: np.ndarray, basis: Optional[np.ndarray], p: np.ndarray, q: np.ndarray):
    app = stack[:, p, p]
    aqq = stack[:, q, q]
    apq = stack[:, p, q]
    active = apq != 0.0
    theta = (aqq - app) / (2.0 * np.where(active, apq, 1.0))
    t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(1.0, theta))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    col_c, col_s = c[:, None, :], s[:, None, :]
    cols_p, cols_q = stack[:, :, p], stack[:, :, q]
    stack[:, :, p] = col_c * cols_p - col_s * cols_q
    stack[:, :, q] = col_s * cols_p + col_c * cols_q

    row_c, row_s = c[:, :, None], s[:, :, None]
    rows_p, rows_q = stack[:, p, :], stack[:, q, :]
    stack[:, p, :] = row_c * rows_p - row_s * rows_q
    stack[:, q, :] = row_s * rows_p + row_c * rows_q

    stack[:, p, q] = np.where(active, 0.0, stack[:, p, q])
    stack[:, q, p] = np.where(active, 0.0, stack[:, q, p])

    if basis is not None:
        vec_p, vec_q = basis[:, :, p], basis[:, :, q]
        basis[:, :, p] = col_c * vec_p - col_s * vec_q
        basis[:, :, q] = col_s * vec_p + col_c * vec_q


def jacobi_eigh(
    matrices: np.ndarray,
    vectors: bool = True,
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Diagonalize a (B, n, n) stack of symmetric matrices.

    Returns unsorted eigenvalues (B, n) and, if requested, eigenvectors as columns (B, n, n).
    Sweeps stop once every off-diagonal Frobenius norm is at most tol * ||M||_F, followed by
    one polishing sweep.
    """
    tol = settings.jacobi_tol if tol is None else tol
    max_sweeps = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    stack = np.array(matrices, dtype=np.float64)
    if stack.ndim == 2:
        stack = stack[None]
    batch, n, _ = stack.shape
    basis = np.broadcast_to(np.eye(n), (batch, n, n)).copy() if vectors else None
    if n == 1:
        return stack[:, :, 0].copy(), basis

    scale = np.sqrt(np.einsum("bij,bij->b", stack, stack))
    rounds = round_robin(n)
    sweeps = 0
    while True:
        off = _off_norm(stack)
        if np.all(off <= tol * scale):
            break
        if sweeps >= max_sweeps:
            worst = float(np.max(off / np.where(scale > 0, scale, 1.0)))
            raise NumericFailureError("Jacobi sweeps exhausted", off_norm=worst, sweeps=sweeps)
        for p, q in rounds:
            _rotate_round(stack, basis, p, q)
        stack = 0.5 * (stack + stack.transpose(0, 2, 1))
        sweeps += 1

    for p, q in rounds:
        _rotate_round(stack, basis, p, q)

    idx = np.arange(n)
    return stack[:, idx, idx].copy(), basis


def _residual(entries: np.ndarray, value: float, vector: np.ndarray) -> float:
    return float(np.max(np.abs(entries @ vector - value * vector)))


def full_spectrum(m: SymMatrix) -> Spectrum:
    """All eigenvalues, sorted non-increasing, with the worst eigenpair residual."""
    values, basis = jacobi_eigh(m.entries, vectors=True)
    values, basis = values[0], basis[0]
    residuals = np.max(np.abs(m.entries @ basis - basis * values[None, :]), axis=0)
    return Spectrum(
        values=tuple(float(v) for v in np.sort(values)[::-1]),
        max_residual=float(np.max(residuals)),
    )


def principal_pair(m: SymMatrix, nonneg: bool = False) -> EigenPair:
    """Largest eigenvalue with a unit eigenvector.

    For a nonnegative matrix the vector is made nonnegative: the sign is flipped, and if the
    top eigenspace is degenerate (tied components) the all-ones vector is projected onto it.
    """
    entries = m.entries
    if nonneg and np.any(entries < 0):
        raise InvalidParameterError("nonneg=True requires an entrywise nonnegative matrix")
    values, basis = jacobi_eigh(entries, vectors=True)
    values, basis = values[0], basis[0]
    top = int(np.argmax(values))
    vector = basis[:, top].copy()
    if nonneg:
        if vector.sum() < 0:
            vector = -vector
        if vector.min() < -NONNEG_SLACK:
            cluster = values >= values[top] - 1e-8 * max(1.0, abs(values[top]))
            eigenspace = basis[:, cluster]
            projected = eigenspace @ (eigenspace.T @ np.ones(m.order))
            vector = projected / np.linalg.norm(projected)
            logger.debug("Perron vector rebuilt from degenerate eigenspace", order=m.order)
    vector = vector / np.linalg.norm(vector)
    value = float(vector @ entries @ vector)
    return EigenPair(value=value, vector=vector, residual=_residual(entries, value, vector))


def min_pair(m: SymMatrix) -> EigenPair:
    """Least eigenvalue with a unit eigenvector; first significant entry made positive."""
    values, basis = jacobi_eigh(m.entries, vectors=True)
    values, basis = values[0], basis[0]
    low = int(np.argmin(values))
    vector = basis[:, low].copy()
    significant = np.flatnonzero(np.abs(vector) > NONNEG_SLACK)
    if significant.size and vector[significant[0]] < 0:
        vector = -vector
    vector = vector / np.linalg.norm(vector)
    value = float(vector @ m.entries @ vector)
    return EigenPair(value=value, vector=vector, residual=_residual(m.entries, value, vector))


def quadratic_form(g: Graph, y: Sequence[float]) -> float:
    """Sum over edges uv of (y_u + y_v)^2, which equals y^T Q(G) y."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (g.n,):
        raise InvalidParameterError(f"vector length {y.shape} does not match n={g.n}")
    edges = g.edges()
    if not edges:
        return 0.0
    u, v = np.array(edges).T
    return float(np.sum((y[u] + y[v]) ** 2))
