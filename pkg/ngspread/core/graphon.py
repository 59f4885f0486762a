"""Step graphons, the operator spectrum, cut norm and cut-distance bounds.

A step graphon is a list of block measures m (positive, summing to 1) and a symmetric k x k
value matrix. On step functions the operator A_W acts as M = values * diag(m), which is similar
to the symmetric diag(sqrt m) values diag(sqrt m); the eigensolver runs on the latter.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice, permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ngspread.config import settings
from ngspread.core.eigen import SymMatrix, adjacency_matrix, principal_pair
from ngspread.core.graph import Graph, complete_split, random_graph
from ngspread.errors import InvalidParameterError
from ngspread.models import (
    CutNormResult,
    DeltaCutResult,
    GraphonEigen,
    RelationRow,
    StepGraphon,
    Theorem34Report,
)

logger = structlog.get_logger(__name__)

BREAKPOINT_TOL = 1e-13
IDENTITY_TOL = 1e-12
MEASURE_TOL = 1e-12
SUBSET_CHUNK = 1 << 16
SUBSET_TASKS = 64

LIMIT_MU = 2.0 / 3.0
LIMIT_F = (math.sqrt(2.0), math.sqrt(2.0) / 2.0)
LIMIT_G = (0.0, math.sqrt(6.0) / 2.0)


def from_graph(g: Graph) -> StepGraphon:
    """W_G: n equal blocks, value 1 on I_u x I_v exactly when uv is an edge."""
    values = [[1.0 if g.has_edge(u, v) else 0.0 for v in range(g.n)] for u in range(g.n)]
    return StepGraphon(m=_equal_measures(g.n), values=values)


def _equal_measures(k: int) -> List[float]:
    m = [1.0 / k] * k
    # absorb rounding so the measures sum to 1 exactly
    m[-1] = 1.0 - sum(m[:-1])
    return m


def limit_graphon() -> StepGraphon:
    """Limit of the complete split graphs CS_{n, n/3}: value 0 only on the independent block."""
    return StepGraphon(m=[1.0 / 3.0, 2.0 / 3.0], values=[[1.0, 1.0], [1.0, 0.0]])


def complement(w: StepGraphon) -> StepGraphon:
    if w.signed:
        raise InvalidParameterError("complement is defined for graphons, not difference objects")
    return StepGraphon(m=list(w.m), values=[[1.0 - x for x in row] for row in w.values])


def edge_density(w: StepGraphon) -> float:
    m = np.asarray(w.m)
    return float(m @ np.asarray(w.values) @ m)


def _weighted(w: StepGraphon) -> np.ndarray:
    m = np.asarray(w.m)
    return np.asarray(w.values) * np.outer(m, m)


def max_eigen(w: StepGraphon) -> GraphonEigen:
    """Largest eigenvalue of A_W with its unit-L2 step eigenfunction."""
    values = np.asarray(w.values, dtype=np.float64)
    root = np.sqrt(np.asarray(w.m, dtype=np.float64))
    conjugate = root[:, None] * values * root[None, :]
    conjugate = 0.5 * (conjugate + conjugate.T)
    pair = principal_pair(SymMatrix(conjugate), nonneg=bool(np.all(conjugate >= 0)))
    f = pair.vector / root
    if not np.all(conjugate >= 0):
        significant = np.flatnonzero(np.abs(f) > IDENTITY_TOL)
        if significant.size and f[significant[0]] < 0:
            f = -f
    operator = values * np.asarray(w.m)[None, :]
    residual = float(np.max(np.abs(operator @ f - pair.value * f)))
    return GraphonEigen(mu=pair.value, f=f.tolist(), residual=residual)


def relation_check(g: Graph) -> float:
    """|lambda_1(G) - n mu(W_G)|, which vanishes for every graph."""
    lambda1 = principal_pair(adjacency_matrix(g), nonneg=True).value
    return abs(lambda1 - g.n * max_eigen(from_graph(g)).mu)


def relation_sweep(n: int, samples: int, seed: int = 0) -> List[RelationRow]:
    """Relation rows for seeded G(n, 1/2) samples."""
    if samples < 1:
        raise InvalidParameterError(f"samples must be positive, got {samples}")
    rows = []
    for i in range(samples):
        g = random_graph(n, 0.5, seed + i)
        mu = max_eigen(from_graph(g)).mu
        lambda1 = principal_pair(adjacency_matrix(g), nonneg=True).value
        rows.append(RelationRow(n=n, mu=mu, n_mu=n * mu, lambda1=lambda1, gap=abs(lambda1 - n * mu)))
    return rows


def _breakpoints(m: Sequence[float]) -> np.ndarray:
    points = np.concatenate([[0.0], np.cumsum(m)])
    points[-1] = 1.0
    return points


def common_refinement_diff(u: StepGraphon, w: StepGraphon) -> StepGraphon:
    """U - W on the common refinement of both partitions, blocks ordered by position."""
    bu, bw = _breakpoints(u.m), _breakpoints(w.m)
    merged = np.union1d(bu, bw)
    points = [merged[0]]
    for x in merged[1:]:
        if x - points[-1] > BREAKPOINT_TOL:
            points.append(x)
    points[-1] = 1.0
    points = np.asarray(points)
    mids = 0.5 * (points[:-1] + points[1:])
    iu = np.minimum(np.searchsorted(bu, mids, side="right") - 1, u.k - 1)
    iw = np.minimum(np.searchsorted(bw, mids, side="right") - 1, w.k - 1)
    diff = np.asarray(u.values)[np.ix_(iu, iu)] - np.asarray(w.values)[np.ix_(iw, iw)]
    return StepGraphon(m=np.diff(points).tolist(), values=diff.tolist(), signed=True)


@dataclass(frozen=True)
class _SubsetTask:
    weighted: np.ndarray
    lo: int
    hi: int


def _subset_bits(k: int, lo: int, hi: int) -> np.ndarray:
    subsets = np.arange(lo, hi, dtype=np.int64)
    return ((subsets[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(np.float64)


def _best_in_range(task: _SubsetTask) -> Tuple[float, int, bool]:
    """(best value, subset, positive side) over row subsets lo..hi-1.

    For fixed S the best T collects every column with a row-sum of the winning sign.
    """
    k = task.weighted.shape[0]
    best, best_s, best_pos = -1.0, 0, True
    for start in range(task.lo, task.hi, SUBSET_CHUNK):
        stop = min(task.hi, start + SUBSET_CHUNK)
        sums = _subset_bits(k, start, stop) @ task.weighted
        positive = np.where(sums > 0, sums, 0.0).sum(axis=1)
        negative = -np.where(sums < 0, sums, 0.0).sum(axis=1)
        scores = np.maximum(positive, negative)
        i = int(np.argmax(scores))
        if scores[i] > best:
            best, best_s, best_pos = float(scores[i]), start + i, bool(positive[i] >= negative[i])
    return best, best_s, best_pos


def _exact_cut_norm(weighted: np.ndarray, jobs: int) -> CutNormResult:
    k = weighted.shape[0]
    total = 1 << k
    step = -(-total // SUBSET_TASKS)
    tasks = [_SubsetTask(weighted, lo, min(total, lo + step)) for lo in range(0, total, step)]
    if jobs <= 1 or len(tasks) == 1:
        partials = list(map(_best_in_range, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_best_in_range, tasks))

    # range order keeps the first maximizer regardless of the worker count
    value, subset, positive = partials[0]
    for partial in partials[1:]:
        if partial[0] > value:
            value, subset, positive = partial
    rows = [i for i in range(k) if (subset >> i) & 1]
    sums = weighted[rows].sum(axis=0) if rows else np.zeros(k)
    cols = [j for j in range(k) if (sums[j] > 0 if positive else sums[j] < 0)]
    return CutNormResult(value=value, exact=True, rows=rows, cols=cols)


def _alternating_cut_norm(weighted: np.ndarray, starts: int, seed: int) -> CutNormResult:
    """Alternating maximization over (S, T) from seeded random S; a lower bound."""
    k = weighted.shape[0]
    rng = np.random.default_rng(seed)
    best = CutNormResult(value=0.0, exact=False, rows=[], cols=[])
    for start in range(starts):
        sign = 1.0 if start % 2 == 0 else -1.0
        rows = (rng.random(k) < 0.5).astype(np.float64)
        cols = (sign * (rows @ weighted) > 0).astype(np.float64)
        value = sign * float(rows @ weighted @ cols)
        while True:
            rows_next = (sign * (weighted @ cols) > 0).astype(np.float64)
            cols_next = (sign * (rows_next @ weighted) > 0).astype(np.float64)
            current = sign * float(rows_next @ weighted @ cols_next)
            if current <= value + IDENTITY_TOL:
                break
            rows, cols, value = rows_next, cols_next, current
        if value > best.value:
            best = CutNormResult(
                value=value,
                exact=False,
                rows=np.flatnonzero(rows).tolist(),
                cols=np.flatnonzero(cols).tolist(),
            )
    return best


def cut_norm_result(u: StepGraphon, jobs: Optional[int] = None, seed: int = 0) -> CutNormResult:
    """Cut norm with the maximizing block subsets.

    Up to cut_norm_exact_cap blocks every row subset is enumerated, which is exact because the
    objective is bilinear in fractional memberships. Beyond the cap the alternating heuristic
    returns a lower bound with exact=False.
    """
    weighted = _weighted(u)
    if u.k <= settings.cut_norm_exact_cap:
        return _exact_cut_norm(weighted, settings.jobs if jobs is None else jobs)
    logger.warning("Cut norm above the exact cap, using the alternating heuristic", k=u.k)
    return _alternating_cut_norm(weighted, settings.cut_norm_starts, seed)


def cut_norm(u: StepGraphon, jobs: Optional[int] = None) -> float:
    return cut_norm_result(u, jobs=jobs).value


def _measure_classes(m: Sequence[float]) -> List[List[int]]:
    classes: List[List[int]] = []
    for i in sorted(range(len(m)), key=lambda i: m[i]):
        if classes and abs(m[classes[-1][0]] - m[i]) <= MEASURE_TOL:
            classes[-1].append(i)
        else:
            classes.append([i])
    return classes


def _measures_match(u: StepGraphon, w: StepGraphon) -> bool:
    if u.k != w.k:
        return False
    return all(abs(a - b) <= MEASURE_TOL for a, b in zip(sorted(u.m), sorted(w.m)))


def _alignments(u: StepGraphon, w: StepGraphon) -> Iterator[List[int]]:
    """Maps sigma with sigma[i] a W-block of the same measure as U-block i."""
    u_classes = _measure_classes(u.m)
    w_classes = _measure_classes(w.m)
    for choice in product(*(permutations(cls) for cls in w_classes)):
        sigma = [0] * u.k
        for u_cls, w_perm in zip(u_classes, choice):
            for i, j in zip(u_cls, w_perm):
                sigma[i] = j
        yield sigma


def _relabel(w: StepGraphon, sigma: Sequence[int]) -> StepGraphon:
    values = np.asarray(w.values)[np.ix_(sigma, sigma)]
    return StepGraphon(m=[w.m[j] for j in sigma], values=values.tolist(), signed=w.signed)


def delta_cut_upper(u: StepGraphon, w: StepGraphon, jobs: Optional[int] = None) -> DeltaCutResult:
    """Upper bound on the cut distance: best block permutation of W against U.

    When the measure multisets differ only the identity alignment is scored.
    """
    if not _measures_match(u, w):
        logger.warning("Block measures differ, scoring the identity alignment only", k_u=u.k, k_w=w.k)
        result = cut_norm_result(common_refinement_diff(u, w), jobs=jobs)
        return DeltaCutResult(
            value=result.value,
            identity_fallback=True,
            exact_cut_norm=result.exact,
            permutation=list(range(w.k)),
        )

    budget = max(1, settings.max_alignments)
    best: Optional[DeltaCutResult] = None
    tried = 0
    for sigma in islice(_alignments(u, w), budget):
        tried += 1
        result = cut_norm_result(common_refinement_diff(u, _relabel(w, sigma)), jobs=jobs)
        if best is None or result.value < best.value:
            best = DeltaCutResult(value=result.value, exact_cut_norm=result.exact, permutation=sigma)
        if best.value <= IDENTITY_TOL:
            break
    truncated = tried == budget and best.value > IDENTITY_TOL
    if truncated:
        logger.warning("Alignment budget exhausted", tried=tried)
    return best.model_copy(update={"truncated": truncated})


def theorem34_report() -> Theorem34Report:
    """Recompute the spectrum of the limit graphon and its complement.

    With f = (a1, b1) and g = (a2, b2) the eigen-equations read a1 / (3 mu) = b1,
    (a1 + 2 b1) / (3 mu) = a1 and 2 b2 / (3 mu_bar) = b2.
    """
    w = limit_graphon()
    top = max_eigen(w)
    top_bar = max_eigen(complement(w))
    a1, b1 = top.f
    _, b2 = top_bar.f
    mu, mu_bar = top.mu, top_bar.mu
    identities: Dict[str, bool] = {
        "a1_over_3mu_eq_b1": abs(a1 / (3 * mu) - b1) <= IDENTITY_TOL,
        "a1_plus_2b1_over_3mu_eq_a1": abs((a1 + 2 * b1) / (3 * mu) - a1) <= IDENTITY_TOL,
        "2b2_over_3mu_bar_eq_b2": abs(2 * b2 / (3 * mu_bar) - b2) <= IDENTITY_TOL,
    }
    values_match = (
        abs(mu - LIMIT_MU) <= IDENTITY_TOL
        and abs(mu_bar - LIMIT_MU) <= IDENTITY_TOL
        and all(abs(abs(x) - y) <= IDENTITY_TOL for x, y in zip(top.f, LIMIT_F))
        and all(abs(abs(x) - y) <= IDENTITY_TOL for x, y in zip(top_bar.f, LIMIT_G))
    )
    return Theorem34Report(
        mu=mu,
        mu_bar=mu_bar,
        f=top.f,
        g=top_bar.f,
        residual=max(top.residual, top_bar.residual),
        identities=identities,
        matches=values_match and all(identities.values()),
    )


def convergence_trend(orders: Sequence[int] = (6, 12, 24), jobs: Optional[int] = None) -> List[Tuple[int, float]]:
    """Cut-distance bounds between W_{CS_{n, n/3}} and the limit graphon."""
    limit = limit_graphon()
    trend = []
    for n in orders:
        if n % 3:
            raise InvalidParameterError(f"orders must be multiples of 3, got {n}")
        d = delta_cut_upper(from_graph(complete_split(n, n // 3)), limit, jobs=jobs).value
        trend.append((n, d))
    logger.info("Convergence trend computed", trend=trend)
    return trend
