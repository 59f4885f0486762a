"""Pydantic models for reports, traces and graphon objects."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


# Graph Models
class GraphModel(BaseModel):
    """JSON edge-list form of a graph."""

    n: int = Field(ge=1, le=64)
    edges: List[List[int]] = Field(default_factory=list, description="Sorted [u, v] pairs, u < v")


class CanonicalGraph(BaseModel):
    """Canonical form of an isomorphism class with its graph6 rendering."""

    n: int
    bits: str
    graph6: str
    edges: List[List[int]]


# Spectral Models
class NGReport(BaseModel):
    """lambda_1 of a graph and of its complement, with the Perron vectors."""

    lambda1: float
    lambda1_bar: float
    p: float
    x: List[float]
    x_bar: List[float]


class QSpreadReport(BaseModel):
    """Extreme signless Laplacian eigenvalues and their vectors."""

    q1: float
    qn: float
    s: float
    x: List[float]
    z: List[float]


class DiagnosticPartition(BaseModel):
    """S, T, L vertex classes built from the signless Laplacian eigenvectors."""

    epsilon: float
    S: List[int]
    T: List[int]
    L: List[int]
    x_max_scaled: float
    z_max_scaled: float


class DiagnosticReport(BaseModel):
    """Partition plus the structural predicates evaluated on one graph."""

    n: int
    edge_count: int
    q1: float
    qn: float
    q_spectrum: List[float]
    partition: DiagnosticPartition
    flags: Dict[str, Optional[bool]]
    ng_x_max_scaled: float
    ng_x_bar_max_scaled: float
    deviation: float
    deviation_scaled: float


class BoundRow(BaseModel):
    """One row of the conjectured-bound table."""

    n: int
    residue: int
    bound: float
    omega_star: List[int]
    p_cs: float
    gap: float


# Search Models
class EnumerationStats(BaseModel):
    n: int
    connected_only: bool
    labeled: int
    visited: int


class MaximizerSet(BaseModel):
    """Extremal isomorphism classes of an exhaustive run."""

    n: int
    objective: str
    sense: str = "max"
    best_value: float
    maximizers: List[CanonicalGraph]
    graphs_scanned: int
    connected_only: bool
    half_scan: bool = False

    @model_validator(mode="after")
    def _nonempty(self) -> "MaximizerSet":
        if not self.maximizers:
            raise ValueError("an extremal set is never empty")
        return self


class QSpreadExtremes(BaseModel):
    maximizers: MaximizerSet
    minimizers: MaximizerSet


class Verification(BaseModel):
    """Exhaustive result compared with the conjectured extremal graphs."""

    result: MaximizerSet
    expected: List[CanonicalGraph]
    expected_value: Optional[float] = None
    holds: bool
    finding: Optional[str] = None


class ToggleAction(str, Enum):
    """Local moves."""

    ADD = "add"
    REMOVE = "remove"
    CLONE = "clone"
    NONE = "none"


class ToggleDecision(BaseModel):
    """Best local move with its guaranteed Rayleigh gain."""

    action: ToggleAction
    u: Optional[int] = None
    v: Optional[int] = None
    score: float = 0.0

    @model_validator(mode="after")
    def _positive_when_acting(self) -> "ToggleDecision":
        if self.action != ToggleAction.NONE and not self.score > 0:
            raise ValueError("an improving move needs a positive score")
        return self


class SearchStep(BaseModel):
    decision: ToggleDecision
    value: float


class SearchTrace(BaseModel):
    """Hill-climbing run from a start graph to a fixpoint."""

    mode: str
    seed: int
    start: GraphModel
    start_value: float
    steps: List[SearchStep] = Field(default_factory=list)
    fixpoint: GraphModel
    complete: bool = True

    @property
    def fixpoint_value(self) -> float:
        return self.steps[-1].value if self.steps else self.start_value

    @model_validator(mode="after")
    def _strictly_increasing(self) -> "SearchTrace":
        previous = self.start_value
        for step in self.steps:
            if not step.value > previous:
                raise ValueError("objective values must increase strictly along a trace")
            previous = step.value
        return self


class SearchSummary(BaseModel):
    """Aggregate of seeded local-search runs."""

    n: int
    mode: str
    seed: int
    starts: int
    fixpoint_values: List[float]
    steps: List[int]
    incomplete: int
    extremal_fraction: float
    max_value: float
    bound: Optional[float] = None
    within_bound: bool = True
    traces: List[SearchTrace] = Field(default_factory=list)


# Graphon Models
class StepGraphon(BaseModel):
    """Block measures m and a symmetric value matrix.

    Difference objects are built with signed=True and may take values in [-1, 1].
    """

    m: List[float]
    values: List[List[float]]
    signed: bool = False

    @model_validator(mode="after")
    def _check(self) -> "StepGraphon":
        k = len(self.m)
        if k == 0:
            raise ValueError("a step graphon needs at least one block")
        if any(w <= 0 for w in self.m):
            raise ValueError("block measures must be positive")
        if abs(sum(self.m) - 1.0) > 1e-12:
            raise ValueError(f"block measures must sum to 1, got {sum(self.m)!r}")
        if len(self.values) != k or any(len(row) != k for row in self.values):
            raise ValueError("values must be a k x k matrix")
        low = -1.0 if self.signed else 0.0
        for i in range(k):
            for j in range(k):
                if self.values[i][j] != self.values[j][i]:
                    raise ValueError(f"values are not symmetric at ({i}, {j})")
                if not low <= self.values[i][j] <= 1.0:
                    raise ValueError(f"value out of range at ({i}, {j})")
        return self

    @property
    def k(self) -> int:
        return len(self.m)


class GraphonEigen(BaseModel):
    """Top eigenvalue of the graphon operator with its per-block eigenfunction."""

    mu: float
    f: List[float]
    residual: float


class CutNormResult(BaseModel):
    value: float
    exact: bool
    rows: List[int]
    cols: List[int]


class DeltaCutResult(BaseModel):
    """Cut-distance upper bound over block permutations."""

    value: float
    upper_bound: bool = True
    identity_fallback: bool = False
    truncated: bool = False
    exact_cut_norm: bool = True
    permutation: List[int]


class Theorem34Report(BaseModel):
    """Limit graphon of the extremal sequence, recomputed."""

    mu: float
    mu_bar: float
    f: List[float]
    g: List[float]
    residual: float
    identities: Dict[str, bool]
    matches: bool


class RelationRow(BaseModel):
    n: int
    mu: float
    n_mu: float
    lambda1: float
    gap: float


# CLI Models
class Subcommand(str, Enum):
    VERIFY_NG = "verify-ng"
    VERIFY_QSPREAD = "verify-qspread"
    BOUND_TABLE = "bound-table"
    SEARCH_LOCAL = "search-local"
    GRAPHON_CHECK = "graphon-check"
    DIAG = "diag"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Invocation(BaseModel):
    """A validated command line."""

    subcommand: Subcommand
    flags: Dict[str, Any] = Field(default_factory=dict)
    output: OutputFormat = OutputFormat.JSON
    seed: int = 0
    jobs: int = 1
    log_level: Optional[str] = None


# API Models
class CutNormRequest(BaseModel):
    """Two step graphons whose difference is measured."""

    u: StepGraphon
    w: StepGraphon


class HealthResponse(BaseModel):
    status: str
    version: str
    timestamp: str
