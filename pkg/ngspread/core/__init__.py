"""Core computational components."""

from ngspread.core.eigen import SymMatrix, full_spectrum, jacobi_eigh, min_pair, principal_pair
from ngspread.core.graph import CanonicalForm, Graph, GraphKind, canonical_form
from ngspread.core.scan_monitor import ScanMonitor

__all__ = [
    "Graph",
    "GraphKind",
    "CanonicalForm",
    "canonical_form",
    "SymMatrix",
    "jacobi_eigh",
    "full_spectrum",
    "principal_pair",
    "min_pair",
    "ScanMonitor",
]
