"""Objective functions, closed forms and structural diagnostics.

p(G) = lambda_1(G) + lambda_1(complement of G) is the Nordhaus-Gaddum sum and
s_Q(G) = q_1(G) - q_n(G) is the signless Laplacian spread.
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ngspread.config import settings
from ngspread.core.eigen import (
    adjacency_matrix,
    full_spectrum,
    min_pair,
    principal_pair,
    quadratic_form,
    signless_laplacian,
)
from ngspread.core.graph import (
    MAX_ORDER,
    Graph,
    GraphKind,
    clone_neighbourhood,
    complement,
    complete_split,
    named_graph,
)
from ngspread.errors import InvalidParameterError, SpectralToolkitError
from ngspread.models import BoundRow, DiagnosticPartition, DiagnosticReport, NGReport, QSpreadReport

logger = structlog.get_logger(__name__)

UNIT_TOL = 1e-9
TIE_TOL = 1e-12


def ng_sum(g: Graph) -> NGReport:
    """p(G) with nonnegative unit Perron vectors of G and its complement."""
    top = principal_pair(adjacency_matrix(g), nonneg=True)
    top_bar = principal_pair(adjacency_matrix(complement(g)), nonneg=True)
    return NGReport(
        lambda1=top.value,
        lambda1_bar=top_bar.value,
        p=top.value + top_bar.value,
        x=top.vector.tolist(),
        x_bar=top_bar.vector.tolist(),
    )


def ng_bound(n: int) -> float:
    """Conjectured maximum of p(G) over graphs on n vertices."""
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    residue = n % 3
    if residue == 0:
        correction = 3 * n - 1 - math.sqrt(9 * n * n - 6 * n + 9)
    elif residue == 1:
        correction = 3 * n - 2 - math.sqrt(9 * n * n - 12 * n + 12)
    else:
        correction = 0.0
    return 4 * n / 3 - 5 / 3 - correction / 6


def terpai_bound(n: int) -> float:
    return 4 * n / 3 - 1


def cs_lambda1(n: int, omega: int) -> float:
    """Closed-form spectral radius of the complete split graph CS_{n,omega}."""
    if not 1 <= omega <= n:
        raise InvalidParameterError(f"clique size must be in [1, n], got omega={omega}, n={n}")
    return (omega - 1 + math.sqrt(-3 * omega * omega + (4 * n - 2) * omega + 1)) / 2


def _clique_objective(n: int, x: float) -> float:
    return math.sqrt(-3 * x * x + (4 * n - 2) * x + 1) - x


def optimal_clique(n: int) -> List[int]:
    """Clique sizes omega maximizing p(CS_{n,omega}).

    f(x) = sqrt(-3x^2 + (4n-2)x + 1) - x is concave with stationary point
    x0 = (2n - 1 - sqrt(n^2 - n + 1)) / 3; the maximum over integers sits at floor or ceil of x0.
    """
    if n < 2:
        raise InvalidParameterError(f"optimal_clique needs n >= 2, got {n}")
    x0 = (2 * n - 1 - math.sqrt(n * n - n + 1)) / 3
    lo, hi = math.floor(x0), math.ceil(x0)
    expected_lo = {0: (n - 3) // 3, 1: (n - 1) // 3, 2: (n - 2) // 3}[n % 3]
    if (lo, hi) != (expected_lo, expected_lo + 1):
        raise SpectralToolkitError(f"stationary point {x0!r} disagrees with the residue table at n={n}")
    candidates = [w for w in (lo, hi) if 1 <= w <= n]
    scores = {w: _clique_objective(n, w) for w in candidates}
    best = max(scores.values())
    return [w for w in candidates if scores[w] >= best - TIE_TOL]


def q_spread(g: Graph) -> QSpreadReport:
    """s_Q(G) from certified extreme eigenpairs of Q(G)."""
    q = signless_laplacian(g)
    top = principal_pair(q, nonneg=True)
    bottom = min_pair(q)
    return QSpreadReport(
        q1=top.value,
        qn=bottom.value,
        s=top.value - bottom.value,
        x=top.vector.tolist(),
        z=bottom.vector.tolist(),
    )


def rayleigh_spread(g: Graph, x: Sequence[float], z: Sequence[float]) -> float:
    """Sum over edges of (x_u + x_v)^2 - (z_u + z_v)^2 for unit x, z; at most s_Q(G)."""
    for name, vec in (("x", x), ("z", z)):
        norm = float(np.linalg.norm(np.asarray(vec, dtype=np.float64)))
        if abs(norm - 1.0) > UNIT_TOL:
            raise InvalidParameterError(f"{name} must be a unit vector, norm is {norm!r}")
    return quadratic_form(g, x) - quadratic_form(g, z)


def _vertex_weights(report: NGReport) -> np.ndarray:
    x = np.asarray(report.x)
    x_bar = np.asarray(report.x_bar)
    return report.lambda1 * x * x + report.lambda1_bar * x_bar * x_bar


def ng_deviation(g: Graph, report: Optional[NGReport] = None) -> float:
    """Largest pairwise gap of lambda_1 x_u^2 + lambda_1_bar x_bar_u^2 over vertices."""
    report = report or ng_sum(g)
    weights = _vertex_weights(report)
    return float(weights.max() - weights.min())


def clone_gain(g: Graph, u: int, v: int, report: Optional[NGReport] = None) -> float:
    """Rayleigh lower bound on p(H) - p(G) where u takes over the neighbourhood of v.

    The test vectors are x and x_bar with entry u replaced by entry v.
    """
    report = report or ng_sum(g)
    h = clone_neighbourhood(g, u, v)
    total = 0.0
    for vector, graph in ((report.x, h), (report.x_bar, complement(h))):
        y = np.array(vector)
        y[u] = y[v]
        norm = float(y @ y)
        if norm > 0:
            total += float(y @ adjacency_matrix(graph).entries @ y) / norm
    return total - report.p


def bipartite_witness(n: int) -> Tuple[float, bool]:
    """p(K_{floor(n/3), ceil(2n/3)}) and whether it exceeds 1.1 n."""
    part = n // 3
    if part < 1:
        raise InvalidParameterError(f"bipartite witness needs n >= 3, got {n}")
    p = ng_sum(named_graph(GraphKind.COMPLETE_BIPARTITE, n, part)).p
    return p, p > 1.1 * n


def asymptotic_diagnostics(g: Graph, epsilon: Optional[float] = None) -> DiagnosticReport:
    """S, T, L partition and the extremal-structure inequalities evaluated on G."""
    epsilon = settings.default_epsilon if epsilon is None else epsilon
    if not epsilon > 0:
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon}")
    n = g.n
    root_n = math.sqrt(n)
    spread = q_spread(g)
    x = np.asarray(spread.x)
    z = np.asarray(spread.z)
    edges = g.edge_count()

    s_set = [v for v in range(n) if abs(z[v]) < epsilon / root_n]
    t_set = [v for v in range(n) if x[v] < 1 / (2 * root_n)]
    l_set = [v for v in range(n) if v not in s_set]
    partition = DiagnosticPartition(
        epsilon=epsilon,
        S=s_set,
        T=t_set,
        L=l_set,
        x_max_scaled=float(np.max(np.abs(x))) * root_n,
        z_max_scaled=float(np.max(np.abs(z))) * root_n,
    )

    flags: Dict[str, Optional[bool]] = {
        "q1_gt_2n_minus_5": spread.q1 > 2 * n - 5,
        "qn_lt_3": spread.qn < 3,
        "edges_gt_bound": edges > (n - 1) * (n - 3) / 2,
        "x_lt_sqrt_n_over_n_minus_3": bool(np.all(x < root_n / (n - 3))) if n >= 4 else None,
        "t_lt_8": len(t_set) < 8 if n >= 4 else None,
        "q1_le_merris_bound": spread.q1 <= 2 * edges / (n - 1) + n - 2 + UNIT_TOL if n >= 2 else None,
        "q1_le_2_max_degree": spread.q1 <= 2 * g.max_degree() + UNIT_TOL,
        "bipartite_witness_gt_1_1n": bipartite_witness(n)[1] if n >= 3 else None,
    }

    ng = ng_sum(g)
    deviation = ng_deviation(g, ng)
    logger.debug("Diagnostics evaluated", n=n, epsilon=epsilon, flags=flags)
    return DiagnosticReport(
        n=n,
        edge_count=edges,
        q1=spread.q1,
        qn=spread.qn,
        q_spectrum=full_spectrum(signless_laplacian(g)).to_json(),
        partition=partition,
        flags=flags,
        ng_x_max_scaled=float(np.max(ng.x)) * root_n,
        ng_x_bar_max_scaled=float(np.max(ng.x_bar)) * root_n,
        deviation=deviation,
        deviation_scaled=deviation * n,
    )


def bound_table(n_min: int, n_max: int) -> List[BoundRow]:
    """Closed-form bound next to p(CS_{n,omega*}) measured by the eigensolver."""
    if not 2 <= n_min <= n_max <= MAX_ORDER:
        raise InvalidParameterError(f"bound table needs 2 <= n_min <= n_max <= {MAX_ORDER}, got [{n_min}, {n_max}]")
    rows = []
    for n in range(n_min, n_max + 1):
        omega_star = optimal_clique(n)
        bound = ng_bound(n)
        p_cs = ng_sum(complete_split(n, omega_star[0])).p
        rows.append(
            BoundRow(n=n, residue=n % 3, bound=bound, omega_star=omega_star, p_cs=p_cs, gap=p_cs - bound)
        )
    return rows
