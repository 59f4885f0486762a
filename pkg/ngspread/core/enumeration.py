"""Batched evaluation of labeled graphs given by edge masks.

Bit k of a mask is the k-th pair of `edge_pairs(n)`. A scan splits [0, 2^m) into contiguous
chunks; each chunk keeps its own extreme set and chunks merge by max (or min) with ties.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple
from uuid import uuid4

import numpy as np

from ngspread.config import settings
from ngspread.core.eigen import jacobi_eigh
from ngspread.core.graph import edge_pairs
from ngspread.core.scan_monitor import ScanMonitor

SCAN_TASKS = 64


class Objective(str, Enum):
    """Scan objectives."""

    NG = "ng"
    QSPREAD = "qspread"


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass
class ExtremeTracker:
    """Best value seen plus every mask within `tol` of it."""

    sense: Sense
    tol: float
    best: Optional[float] = None
    members: Dict[int, float] = field(default_factory=dict)

    def _better(self, a: float, b: float) -> bool:
        return a > b if self.sense == Sense.MAX else a < b

    def _keeps(self, value: float) -> bool:
        if self.sense == Sense.MAX:
            return value >= self.best - self.tol
        return value <= self.best + self.tol

    def update(self, values: np.ndarray, masks: np.ndarray):
        if values.size == 0:
            return
        local = float(values.max() if self.sense == Sense.MAX else values.min())
        if self.best is None or self._better(local, self.best):
            self.best = local
            self.members = {m: v for m, v in self.members.items() if self._keeps(v)}
        if self.sense == Sense.MAX:
            near = values >= self.best - self.tol
        else:
            near = values <= self.best + self.tol
        for mask, value in zip(masks[near].tolist(), values[near].tolist()):
            self.members[int(mask)] = float(value)

    def merge(self, other: "ExtremeTracker") -> "ExtremeTracker":
        merged = ExtremeTracker(self.sense, self.tol)
        for tracker in (self, other):
            if tracker.best is None:
                continue
            masks = np.array(list(tracker.members), dtype=np.int64)
            values = np.array(list(tracker.members.values()), dtype=np.float64)
            merged.update(values, masks)
        return merged


@dataclass(frozen=True)
class ScanTask:
    n: int
    lo: int
    hi: int
    objective: Objective
    connected_only: bool
    half: bool
    chunk_size: int
    tol: float


@dataclass
class ScanResult:
    masks_done: int = 0
    graphs_scanned: int = 0
    maxima: Optional[ExtremeTracker] = None
    minima: Optional[ExtremeTracker] = None

    def merge(self, other: "ScanResult") -> "ScanResult":
        return ScanResult(
            masks_done=self.masks_done + other.masks_done,
            graphs_scanned=self.graphs_scanned + other.graphs_scanned,
            maxima=_merge_optional(self.maxima, other.maxima),
            minima=_merge_optional(self.minima, other.minima),
        )


def _merge_optional(a: Optional[ExtremeTracker], b: Optional[ExtremeTracker]) -> Optional[ExtremeTracker]:
    if a is None:
        return b
    if b is None:
        return a
    return a.merge(b)


def mask_batches(lo: int, hi: int, chunk_size: int) -> Iterator[np.ndarray]:
    for start in range(lo, hi, chunk_size):
        yield np.arange(start, min(hi, start + chunk_size), dtype=np.int64)


def mask_bits(n: int, masks: np.ndarray) -> np.ndarray:
    """(B, m) 0/1 matrix of edge indicators."""
    m = n * (n - 1) // 2
    return ((masks[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1).astype(np.float64)


def adjacency_stack(n: int, bits: np.ndarray) -> np.ndarray:
    pairs = edge_pairs(n)
    stack = np.zeros((bits.shape[0], n, n))
    if pairs:
        u, v = np.array(pairs).T
        stack[:, u, v] = bits
        stack[:, v, u] = bits
    return stack


def connected_flags(adjacency: np.ndarray) -> np.ndarray:
    """Connectivity of every graph in the stack by repeated squaring of (A + I)."""
    n = adjacency.shape[1]
    reach = (adjacency + np.eye(n)[None]) > 0
    steps = 1
    while steps < n:
        reach = np.matmul(reach.astype(np.float64), reach.astype(np.float64)) > 0
        steps *= 2
    return reach[:, 0, :].all(axis=1)


def ng_values(adjacency: np.ndarray) -> np.ndarray:
    """lambda_1(G) + lambda_1(complement) for every graph in the stack."""
    n = adjacency.shape[1]
    comp = 1.0 - np.eye(n)[None] - adjacency
    top = jacobi_eigh(adjacency, vectors=False)[0].max(axis=1)
    top_bar = jacobi_eigh(comp, vectors=False)[0].max(axis=1)
    return top + top_bar


def qspread_values(adjacency: np.ndarray) -> np.ndarray:
    """q_1 - q_n of the signless Laplacian for every graph in the stack."""
    n = adjacency.shape[1]
    q = adjacency.copy()
    idx = np.arange(n)
    q[:, idx, idx] = adjacency.sum(axis=2)
    values = jacobi_eigh(q, vectors=False)[0]
    return values.max(axis=1) - values.min(axis=1)


def scan_range(task: ScanTask) -> ScanResult:
    """Evaluate every mask in [lo, hi) that passes the filters."""
    n = task.n
    m = n * (n - 1) // 2
    result = ScanResult(
        maxima=ExtremeTracker(Sense.MAX, task.tol),
        minima=ExtremeTracker(Sense.MIN, task.tol) if task.objective == Objective.QSPREAD else None,
    )
    for masks in mask_batches(task.lo, task.hi, task.chunk_size):
        result.masks_done += masks.size
        bits = mask_bits(n, masks)
        if task.half:
            keep = 4 * bits.sum(axis=1) <= n * (n - 1)
            masks, bits = masks[keep], bits[keep]
        adjacency = adjacency_stack(n, bits)
        if task.connected_only and masks.size:
            keep = connected_flags(adjacency)
            masks, adjacency = masks[keep], adjacency[keep]
        if masks.size == 0:
            continue
        result.graphs_scanned += masks.size
        if task.objective == Objective.NG:
            values = ng_values(adjacency)
        else:
            values = qspread_values(adjacency)
        result.maxima.update(values, masks)
        if result.minima is not None:
            result.minima.update(values, masks)
    return result


def split_range(total: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def run_scan(
    n: int,
    objective: Objective,
    connected_only: bool,
    half: bool = False,
    jobs: Optional[int] = None,
    monitor: Optional[ScanMonitor] = None,
) -> ScanResult:
    """Scan all 2^(n(n-1)/2) labeled graphs, optionally across worker processes.

    The range is cut into SCAN_TASKS pieces whatever the worker count and merged in range
    order, so every batch and therefore every value is the same for any number of jobs.
    """
    jobs = settings.jobs if jobs is None else jobs
    monitor = monitor or ScanMonitor()
    total = 1 << (n * (n - 1) // 2)
    ranges = split_range(total, SCAN_TASKS)
    tasks = [
        ScanTask(n, lo, hi, objective, connected_only, half, settings.chunk_size, settings.value_tol)
        for lo, hi in ranges
    ]
    run_id = str(uuid4())
    monitor.start_scan(run_id, total, n=n, objective=objective.value, jobs=jobs, half=half)

    merged = ScanResult()
    if jobs <= 1:
        partials = map(scan_range, tasks)
        for partial in partials:
            monitor.record_chunk(run_id, partial.masks_done, partial.graphs_scanned)
            merged = merged.merge(partial)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for partial in pool.map(scan_range, tasks):
                monitor.record_chunk(run_id, partial.masks_done, partial.graphs_scanned)
                merged = merged.merge(partial)

    monitor.complete_scan(run_id)
    return merged
