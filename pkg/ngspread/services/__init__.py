"""Service layer components."""

from ngspread.services.graph_io import (
    canonical_graph,
    from_graph6,
    load_graph,
    load_step_graphon,
    parse_graph,
    to_graph6,
)
from ngspread.services.reporting import render_csv, render_json, report_header

__all__ = [
    "to_graph6",
    "from_graph6",
    "parse_graph",
    "load_graph",
    "load_step_graphon",
    "canonical_graph",
    "render_json",
    "render_csv",
    "report_header",
]
