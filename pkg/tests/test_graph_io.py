import json

import networkx as nx
import pytest

from ngspread.core.graph import Graph, GraphKind, canonical_form, named_graph, random_graph
from ngspread.errors import InvalidParameterError
from ngspread.services.graph_io import (
    canonical_graph,
    from_graph6,
    from_networkx,
    load_graph,
    load_step_graphon,
    parse_graph,
    to_graph6,
    to_networkx,
)


class TestGraph6:
    @pytest.mark.parametrize(
        "graph,expected",
        [
            (named_graph(GraphKind.COMPLETE, 2), "A_"),
            (named_graph(GraphKind.COMPLETE, 4), "C~"),
            (Graph.empty(4), "C?"),
        ],
    )
    def test_known_strings(self, graph, expected):
        assert to_graph6(graph) == expected
        assert from_graph6(expected) == graph

    def test_header_is_accepted(self):
        assert from_graph6(">>graph6<<C~") == named_graph(GraphKind.COMPLETE, 4)

    def test_agrees_with_networkx(self, graph_corpus):
        for g in graph_corpus:
            text = to_graph6(g)
            assert nx.utils.graphs_equal(nx.from_graph6_bytes(text.encode()), to_networkx(g))

    def test_invalid_string(self):
        with pytest.raises(InvalidParameterError):
            from_graph6("not a graph6 line")


class TestParsing:
    def test_json_edge_list(self):
        g = parse_graph(json.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3]]}))
        assert g == named_graph(GraphKind.PATH, 4)

    def test_graph6_line(self):
        assert parse_graph("C~\n") == named_graph(GraphKind.COMPLETE, 4)

    def test_bad_json(self):
        with pytest.raises(InvalidParameterError):
            parse_graph('{"n": 3, "edges": [[0, 0]]}')

    def test_networkx_relabels_in_sorted_order(self):
        graph = nx.Graph([("b", "c"), ("a", "b")])
        assert from_networkx(graph) == named_graph(GraphKind.PATH, 3)

    def test_load_files(self, tmp_path):
        path = tmp_path / "g.g6"
        path.write_text("C~\n")
        assert load_graph(path) == named_graph(GraphKind.COMPLETE, 4)
        with pytest.raises(InvalidParameterError):
            load_graph(tmp_path / "missing.g6")

    def test_load_step_graphon(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps({"m": [0.5, 0.5], "values": [[0, 1], [1, 0]]}))
        assert load_step_graphon(path).k == 2
        path.write_text(json.dumps({"m": [0.5, 0.6], "values": [[0, 1], [1, 0]]}))
        with pytest.raises(InvalidParameterError):
            load_step_graphon(path)


class TestCanonicalGraph:
    def test_carries_form_and_graph6(self):
        g = random_graph(6, 0.5, 1)
        item = canonical_graph(g)
        form = canonical_form(g)
        assert item.bits == form.bits
        assert from_graph6(item.graph6) == form.to_graph()
        assert item.edges == [list(e) for e in form.to_graph().edges()]
