"""Spectral endpoint routes: closed-form bounds, objectives and diagnostics."""

from typing import List, Optional

from fastapi import APIRouter, Query
import structlog

from ngspread.core.spectral import asymptotic_diagnostics, bound_table, ng_sum, q_spread
from ngspread.errors import SpectralToolkitError
from ngspread.models import BoundRow, DiagnosticReport, GraphModel, NGReport, QSpreadReport
from ngspread.routers.errors import http_error
from ngspread.services.graph_io import from_model

router = APIRouter()
logger = structlog.get_logger(__name__)


@router.get("/bound/{n}", response_model=BoundRow)
def get_bound(n: int):
    """Conjectured NG maximum at one order with the optimal clique sizes."""
    try:
        return bound_table(n, n)[0]
    except SpectralToolkitError as e:
        raise http_error(e) from e


@router.get("/bound-table", response_model=List[BoundRow])
def get_bound_table(n_min: int = Query(3), n_max: int = Query(40)):
    try:
        return bound_table(n_min, n_max)
    except SpectralToolkitError as e:
        raise http_error(e) from e


@router.post("/ng", response_model=NGReport)
def post_ng(graph: GraphModel):
    """lambda_1(G) + lambda_1(complement) with both Perron vectors."""
    try:
        return ng_sum(from_model(graph))
    except SpectralToolkitError as e:
        raise http_error(e) from e


@router.post("/qspread", response_model=QSpreadReport)
def post_qspread(graph: GraphModel):
    try:
        return q_spread(from_model(graph))
    except SpectralToolkitError as e:
        raise http_error(e) from e


@router.post("/diagnostics", response_model=DiagnosticReport)
def post_diagnostics(graph: GraphModel, epsilon: Optional[float] = Query(None)):
    try:
        report = asymptotic_diagnostics(from_model(graph), epsilon)
    except SpectralToolkitError as e:
        raise http_error(e) from e
    logger.info("Diagnostics served", n=report.n, epsilon=report.partition.epsilon)
    return report
