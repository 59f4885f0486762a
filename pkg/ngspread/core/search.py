"""Exhaustive small-n verification and eigenvector-guided local search."""

from typing import Callable, List, Optional, Set, Tuple

import numpy as np
import structlog

from ngspread.config import settings
from ngspread.core.enumeration import ExtremeTracker, Objective, Sense, run_scan
from ngspread.core.graph import (
    CANONICAL_MAX_ORDER,
    CanonicalForm,
    Graph,
    GraphKind,
    canonical_form,
    clone_neighbourhood,
    complement,
    complete_split,
    from_mask,
    is_connected,
    named_graph,
    pendant_clique,
    random_graph,
    toggle_edge,
)
from ngspread.core.spectral import (
    clone_gain,
    ng_bound,
    ng_sum,
    optimal_clique,
    q_spread,
    terpai_bound,
)
from ngspread.errors import InvalidParameterError, SizeLimitError
from ngspread.models import (
    EnumerationStats,
    MaximizerSet,
    QSpreadExtremes,
    SearchStep,
    SearchSummary,
    SearchTrace,
    ToggleAction,
    ToggleDecision,
    Verification,
)
from ngspread.services.graph_io import canonical_graph, to_model

logger = structlog.get_logger(__name__)

ENUMERATION_MAX_ORDER = 8
TERPAI_MAX_ORDER = 7


def enumerate_graphs(n: int, connected_only: bool, visitor: Callable[[Graph], None]) -> EnumerationStats:
    """Visit every labeled graph on n vertices once, in edge-mask order."""
    if not 1 <= n <= ENUMERATION_MAX_ORDER:
        raise SizeLimitError(
            f"enumeration accepts 1 <= n <= {ENUMERATION_MAX_ORDER}, got {n}", limit=ENUMERATION_MAX_ORDER
        )
    labeled = 1 << (n * (n - 1) // 2)
    visited = 0
    for mask in range(labeled):
        g = from_mask(n, mask)
        if connected_only and not is_connected(g):
            continue
        visitor(g)
        visited += 1
    return EnumerationStats(n=n, connected_only=connected_only, labeled=labeled, visited=visited)


def _check_scan_order(n: int, allow_n8: Optional[bool] = None):
    allow_n8 = settings.allow_n8 if allow_n8 is None else allow_n8
    cap = ENUMERATION_MAX_ORDER if allow_n8 else min(settings.enumeration_cap, ENUMERATION_MAX_ORDER)
    if not 3 <= n <= cap:
        hint = "" if allow_n8 or n != ENUMERATION_MAX_ORDER else " (n = 8 needs allow_n8)"
        raise SizeLimitError(f"exhaustive scans accept 3 <= n <= {cap}, got {n}{hint}", limit=cap)


def _extremal_set(
    n: int,
    objective: Objective,
    tracker: ExtremeTracker,
    graphs_scanned: int,
    connected_only: bool,
    half_scan: bool,
    evaluate: Callable[[Graph], float],
) -> MaximizerSet:
    """Deduplicate the tracked masks up to isomorphism and certify their values."""
    graphs: List[Graph] = []
    for mask in sorted(tracker.members):
        g = from_mask(n, mask)
        graphs.append(g)
        if half_scan:
            graphs.append(complement(g))
    classes = {canonical_form(g): g for g in graphs}
    certified = {form: evaluate(g) for form, g in classes.items()}
    if tracker.sense == Sense.MAX:
        best = max(certified.values())
        keep = [form for form, value in certified.items() if value >= best - settings.value_tol]
    else:
        best = min(certified.values())
        keep = [form for form, value in certified.items() if value <= best + settings.value_tol]
    return MaximizerSet(
        n=n,
        objective=objective.value,
        sense=tracker.sense.value,
        best_value=best,
        maximizers=[canonical_graph(form) for form in sorted(keep)],
        graphs_scanned=graphs_scanned,
        connected_only=connected_only,
        half_scan=half_scan,
    )


def exhaustive_ng(
    n: int,
    full_scan: bool = False,
    jobs: Optional[int] = None,
    allow_n8: Optional[bool] = None,
) -> MaximizerSet:
    """Maximizers of p(G) over all graphs on n vertices, up to isomorphism.

    Since p(G) = p(complement), the default scan only visits masks with at most
    n(n-1)/4 edges and adds complements afterwards.
    """
    _check_scan_order(n, allow_n8)
    result = run_scan(n, Objective.NG, connected_only=False, half=not full_scan, jobs=jobs)
    found = _extremal_set(
        n,
        Objective.NG,
        result.maxima,
        result.graphs_scanned,
        connected_only=False,
        half_scan=not full_scan,
        evaluate=lambda g: ng_sum(g).p,
    )
    logger.info("NG scan finished", n=n, best=found.best_value, classes=len(found.maximizers))
    return found


def exhaustive_qspread(n: int, jobs: Optional[int] = None, allow_n8: Optional[bool] = None) -> QSpreadExtremes:
    """Maximizers and minimizers of s_Q(G) over connected graphs on n vertices."""
    _check_scan_order(n, allow_n8)
    result = run_scan(n, Objective.QSPREAD, connected_only=True, half=False, jobs=jobs)
    extremes = QSpreadExtremes(
        maximizers=_extremal_set(
            n, Objective.QSPREAD, result.maxima, result.graphs_scanned, True, False, lambda g: q_spread(g).s
        ),
        minimizers=_extremal_set(
            n, Objective.QSPREAD, result.minima, result.graphs_scanned, True, False, lambda g: q_spread(g).s
        ),
    )
    logger.info(
        "Q-spread scan finished",
        n=n,
        best=extremes.maximizers.best_value,
        least=extremes.minimizers.best_value,
    )
    return extremes


def ng_expected_forms(n: int) -> Set[CanonicalForm]:
    """CS_{n,omega} and its complement for every optimal clique size."""
    forms = set()
    for omega in optimal_clique(n):
        g = complete_split(n, omega)
        forms.add(canonical_form(g))
        forms.add(canonical_form(complement(g)))
    return forms


def qspread_expected_forms(n: int) -> Tuple[Set[CanonicalForm], Set[CanonicalForm]]:
    """({K_{n-1}^+}, {P_n} plus C_n when n is odd)."""
    maximizers = {canonical_form(pendant_clique(n))}
    minimizers = {canonical_form(named_graph(GraphKind.PATH, n))}
    if n % 2 == 1:
        minimizers.add(canonical_form(named_graph(GraphKind.CYCLE, n)))
    return maximizers, minimizers


def _compare(result: MaximizerSet, expected: Set[CanonicalForm], expected_value: float, label: str) -> Verification:
    found = {CanonicalForm(item.n, item.bits) for item in result.maximizers}
    value_ok = abs(result.best_value - expected_value) <= settings.value_tol
    holds = found == expected and value_ok
    finding = None
    if not holds:
        finding = (
            f"{label} at n={result.n}: found {len(found)} class(es) with value {result.best_value!r}, "
            f"conjectured {len(expected)} class(es) with value {expected_value!r}"
        )
        logger.warning("Conjecture disagreement", label=label, n=result.n, best=result.best_value)
    return Verification(
        result=result,
        expected=[canonical_graph(form) for form in sorted(expected)],
        expected_value=expected_value,
        holds=holds,
        finding=finding,
    )


def verify_ng(n: int, full_scan: bool = False, jobs: Optional[int] = None, allow_n8: Optional[bool] = None) -> Verification:
    result = exhaustive_ng(n, full_scan=full_scan, jobs=jobs, allow_n8=allow_n8)
    return _compare(result, ng_expected_forms(n), ng_bound(n), "NG maximum")


def verify_qspread(n: int, jobs: Optional[int] = None, allow_n8: Optional[bool] = None) -> Tuple[Verification, Verification]:
    extremes = exhaustive_qspread(n, jobs=jobs, allow_n8=allow_n8)
    expected_max, expected_min = qspread_expected_forms(n)
    return (
        _compare(extremes.maximizers, expected_max, q_spread(pendant_clique(n)).s, "Q-spread maximum"),
        _compare(
            extremes.minimizers,
            expected_min,
            q_spread(named_graph(GraphKind.PATH, n)).s,
            "Q-spread minimum",
        ),
    )


def max_ng_value(n: int, jobs: Optional[int] = None) -> float:
    """Largest p(G) over all graphs on n vertices."""
    if not 1 <= n <= TERPAI_MAX_ORDER:
        raise SizeLimitError(f"accepts 1 <= n <= {TERPAI_MAX_ORDER}, got {n}", limit=TERPAI_MAX_ORDER)
    return run_scan(n, Objective.NG, connected_only=False, half=True, jobs=jobs).maxima.best


def verify_terpai(n: int, jobs: Optional[int] = None) -> bool:
    """True iff every graph on n vertices has p(G) <= 4n/3 - 1."""
    best = max_ng_value(n, jobs=jobs)
    holds = best <= terpai_bound(n) + settings.value_tol
    logger.info("Terpai bound checked", n=n, best=best, bound=terpai_bound(n), holds=holds)
    return holds


def _first_best(scores: np.ndarray, pairs: List[Tuple[int, int]], accept: Callable[[int, int], bool]) -> Optional[int]:
    """Index of the highest score above the toggle tolerance, ties by pair order."""
    order = sorted(range(len(pairs)), key=lambda i: (-scores[i], pairs[i]))
    for i in order:
        if not scores[i] > settings.toggle_tol:
            return None
        if accept(*pairs[i]):
            return i
    return None


def improving_toggle(g: Graph, mode: Objective) -> ToggleDecision:
    """Best single edge flip with a positive Rayleigh gain.

    ng: score(add uv) = 2(x_u x_v - xb_u xb_v), score(remove uv) is its negative.
    qspread: score(add uv) = (x_u + x_v)^2 - (z_u + z_v)^2, removals need G - uv connected.
    """
    mode = Objective(mode)
    pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
    if not pairs:
        return ToggleDecision(action=ToggleAction.NONE)
    u_idx, v_idx = np.array(pairs).T
    edge = np.array([g.has_edge(u, v) for u, v in pairs])
    sign = np.where(edge, -1.0, 1.0)

    if mode == Objective.NG:
        if not (is_connected(g) or is_connected(complement(g))):
            raise InvalidParameterError("ng toggles need G or its complement connected")
        report = ng_sum(g)
        x, xb = np.asarray(report.x), np.asarray(report.x_bar)
        scores = sign * 2.0 * (x[u_idx] * x[v_idx] - xb[u_idx] * xb[v_idx])
        accept = lambda u, v: True  # noqa: E731
    else:
        if not is_connected(g):
            raise InvalidParameterError("qspread toggles need a connected graph")
        report = q_spread(g)
        x, z = np.asarray(report.x), np.asarray(report.z)
        scores = sign * ((x[u_idx] + x[v_idx]) ** 2 - (z[u_idx] + z[v_idx]) ** 2)
        accept = lambda u, v: not g.has_edge(u, v) or is_connected(toggle_edge(g, u, v))  # noqa: E731

    best = _first_best(scores, pairs, accept)
    if best is None:
        return ToggleDecision(action=ToggleAction.NONE)
    u, v = pairs[best]
    return ToggleDecision(
        action=ToggleAction.REMOVE if edge[best] else ToggleAction.ADD,
        u=u,
        v=v,
        score=float(scores[best]),
    )


def improving_clone(g: Graph) -> ToggleDecision:
    """Best move giving u the neighbourhood of v, scored by the Rayleigh bound on p."""
    report = ng_sum(g)
    pairs = [(u, v) for u in range(g.n) for v in range(g.n) if u != v]
    movable = [(u, v) for u, v in pairs if clone_neighbourhood(g, u, v) != g]
    if not movable:
        return ToggleDecision(action=ToggleAction.NONE)
    scores = np.array([clone_gain(g, u, v, report) for u, v in movable])
    best = _first_best(scores, movable, lambda u, v: True)
    if best is None:
        return ToggleDecision(action=ToggleAction.NONE)
    u, v = movable[best]
    return ToggleDecision(action=ToggleAction.CLONE, u=u, v=v, score=float(scores[best]))


def apply_decision(g: Graph, decision: ToggleDecision) -> Graph:
    if decision.action == ToggleAction.NONE:
        return g
    if decision.action == ToggleAction.CLONE:
        return clone_neighbourhood(g, decision.u, decision.v)
    return toggle_edge(g, decision.u, decision.v)


def objective_value(g: Graph, mode: Objective) -> float:
    return ng_sum(g).p if Objective(mode) == Objective.NG else q_spread(g).s


def _next_decision(g: Graph, mode: Objective, use_clone: bool) -> ToggleDecision:
    decision = improving_toggle(g, mode)
    if decision.action == ToggleAction.NONE and use_clone and mode == Objective.NG:
        decision = improving_clone(g)
    return decision


def local_search(
    g0: Graph,
    mode: Objective,
    max_steps: int = 1000,
    rng_seed: int = 0,
    use_clone: bool = False,
) -> SearchTrace:
    """Apply improving moves until none is left or the step budget runs out.

    Every step is re-measured by a fresh eigensolve and must increase the objective strictly.
    The seed is recorded for replay of the start graph.
    """
    mode = Objective(mode)
    g = g0
    value = objective_value(g, mode)
    start_value = value
    steps: List[SearchStep] = []
    complete = True
    while True:
        decision = _next_decision(g, mode, use_clone)
        if decision.action == ToggleAction.NONE:
            break
        if len(steps) >= max_steps:
            complete = False
            break
        candidate = apply_decision(g, decision)
        new_value = objective_value(candidate, mode)
        if not new_value > value:
            logger.warning(
                "Move did not increase the objective",
                mode=mode.value,
                action=decision.action.value,
                score=decision.score,
                gain=new_value - value,
            )
            complete = False
            break
        steps.append(SearchStep(decision=decision, value=new_value))
        g, value = candidate, new_value

    return SearchTrace(
        mode=mode.value,
        seed=rng_seed,
        start=to_model(g0),
        start_value=start_value,
        steps=steps,
        fixpoint=to_model(g),
        complete=complete,
    )


def random_start(n: int, mode: Objective, seed: int) -> Graph:
    """G(n, 1/2) from the seed; qspread starts are redrawn until connected."""
    attempt = 0
    while True:
        g = random_graph(n, 0.5, [seed, attempt])
        if Objective(mode) == Objective.NG or is_connected(g):
            return g
        attempt += 1


def _extremal_checker(n: int, mode: Objective) -> Callable[[Graph, float], bool]:
    if mode == Objective.NG:
        forms = ng_expected_forms(n)
        target = ng_bound(n)
    else:
        forms = qspread_expected_forms(n)[0]
        target = q_spread(pendant_clique(n)).s
    if n <= CANONICAL_MAX_ORDER:
        return lambda g, value: canonical_form(g) in forms
    return lambda g, value: abs(value - target) <= settings.value_tol


def search_many(
    n: int,
    mode: Objective,
    starts: int,
    seed: int = 0,
    max_steps: int = 1000,
    use_clone: bool = False,
    keep_traces: bool = False,
) -> SearchSummary:
    """Run seeded local searches from G(n, 1/2) starts and summarize the fixpoints."""
    mode = Objective(mode)
    if starts < 1:
        raise InvalidParameterError(f"starts must be positive, got {starts}")
    if mode == Objective.QSPREAD and n < 3:
        raise InvalidParameterError(f"qspread search needs n >= 3, got {n}")
    if mode == Objective.NG and n < 2:
        raise InvalidParameterError(f"ng search needs n >= 2, got {n}")
    is_extremal = _extremal_checker(n, mode)
    if mode == Objective.NG:
        bound: Optional[float] = ng_bound(n)
    else:
        bound = q_spread(pendant_clique(n)).s if n >= 6 else None

    traces: List[SearchTrace] = []
    for i in range(starts):
        start_seed = seed + i
        trace = local_search(random_start(n, mode, start_seed), mode, max_steps, start_seed, use_clone)
        traces.append(trace)

    values = [trace.fixpoint_value for trace in traces]
    extremal = sum(
        1
        for trace in traces
        if is_extremal(Graph.from_edges(n, trace.fixpoint.edges), trace.fixpoint_value)
    )
    within = bound is None or all(value <= bound + settings.value_tol for value in values)
    if not within:
        logger.warning("Fixpoint above the conjectured extremal value", n=n, mode=mode.value, bound=bound)
    return SearchSummary(
        n=n,
        mode=mode.value,
        seed=seed,
        starts=starts,
        fixpoint_values=values,
        steps=[len(trace.steps) for trace in traces],
        incomplete=sum(1 for trace in traces if not trace.complete),
        extremal_fraction=extremal / starts,
        max_value=max(values),
        bound=bound,
        within_bound=within,
        traces=traces if keep_traces else [],
    )
