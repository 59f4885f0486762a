"""Health endpoint routes."""

from datetime import datetime, timezone

from fastapi import APIRouter

from ngspread import __version__
from ngspread.models import HealthResponse

router = APIRouter()


@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(
        status="healthy",
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
