"""Graph and step-graphon serialization: graph6, JSON edge lists, files."""

import json
from pathlib import Path
from typing import Any, Dict, Union

import networkx as nx
import structlog

from ngspread.core.graph import CanonicalForm, Graph, canonical_form
from ngspread.errors import InvalidParameterError
from ngspread.models import CanonicalGraph, GraphModel, StepGraphon

logger = structlog.get_logger(__name__)

GRAPH6_HEADER = ">>graph6<<"


def to_networkx(g: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.edges())
    return graph


def from_networkx(graph: nx.Graph) -> Graph:
    """Convert a networkx graph, relabeling nodes 0..n-1 in sorted order."""
    nodes = sorted(graph.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(index[a], index[b]) for a, b in graph.edges() if a != b])


def to_graph6(g: Graph) -> str:
    data = nx.to_graph6_bytes(to_networkx(g), nodes=list(range(g.n)), header=False)
    return data.decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    """Parse a graph6 string, with or without the '>>graph6<<' header."""
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER) :].strip()
    try:
        graph = nx.from_graph6_bytes(s.encode("ascii"))
    except (nx.NetworkXError, ValueError) as e:
        raise InvalidParameterError(f"invalid graph6 string: {e}") from e
    return from_networkx(graph)


def to_model(g: Graph) -> GraphModel:
    return GraphModel(n=g.n, edges=[[u, v] for u, v in g.edges()])


def from_model(model: GraphModel) -> Graph:
    return Graph.from_edges(model.n, model.edges)


def canonical_graph(form: Union[Graph, CanonicalForm]) -> CanonicalGraph:
    """Canonical form of a graph (or an existing form) with its graph6 string."""
    if isinstance(form, Graph):
        form = canonical_form(form)
    g = form.to_graph()
    return CanonicalGraph(
        n=form.n,
        bits=form.bits,
        graph6=to_graph6(g),
        edges=[[u, v] for u, v in g.edges()],
    )


def parse_graph(text: str) -> Graph:
    """Accept the JSON edge-list form or a graph6 line."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            payload: Dict[str, Any] = json.loads(stripped)
            return from_model(GraphModel(**payload))
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise InvalidParameterError(f"invalid JSON graph: {e}") from e
    return from_graph6(stripped.splitlines()[0] if stripped else stripped)


def load_graph(path: Union[str, Path]) -> Graph:
    path = Path(path)
    if not path.exists():
        raise InvalidParameterError(f"graph file not found: {path}")
    logger.debug("Loading graph", path=str(path))
    return parse_graph(path.read_text())


def load_step_graphon(path: Union[str, Path]) -> StepGraphon:
    path = Path(path)
    if not path.exists():
        raise InvalidParameterError(f"graphon file not found: {path}")
    try:
        return StepGraphon(**json.loads(path.read_text()))
    except (json.JSONDecodeError, TypeError, ValueError) as e:
        raise InvalidParameterError(f"invalid step graphon file {path}: {e}") from e
