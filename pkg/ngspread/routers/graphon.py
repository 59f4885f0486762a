"""Graphon endpoint routes."""

from fastapi import APIRouter

from ngspread.core.graphon import common_refinement_diff, cut_norm_result, theorem34_report
from ngspread.errors import SpectralToolkitError
from ngspread.models import CutNormRequest, CutNormResult, Theorem34Report
from ngspread.routers.errors import http_error

router = APIRouter()


@router.get("/theorem34", response_model=Theorem34Report)
def get_theorem34():
    """Spectrum of the two-block limit graphon and its complement."""
    return theorem34_report()


@router.post("/cut-norm", response_model=CutNormResult)
def post_cut_norm(request: CutNormRequest):
    """Cut norm of U - W on the common refinement of their partitions."""
    try:
        return cut_norm_result(common_refinement_diff(request.u, request.w), jobs=1)
    except SpectralToolkitError as e:
        raise http_error(e) from e
