"""Main FastAPI application setup and configuration."""

from contextlib import asynccontextmanager
from typing import AsyncGenerator

from fastapi import FastAPI

from ngspread import __version__
from ngspread.config import settings
from ngspread.logging_config import setup_logging
from ngspread.routers import graphon, health, spectral

# Setup logging
logger = setup_logging()


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncGenerator[None, None]:
    """Application lifespan manager for startup and shutdown events."""
    # Startup
    logger.info("Spectral toolkit API starting up", version=__version__, port=settings.api_port)
    yield
    # Shutdown
    logger.info("Spectral toolkit API shutting down")


# Create FastAPI app
app = FastAPI(
    title="Nordhaus-Gaddum Spectral Toolkit API",
    description="Spectral extremal quantities, conjectured bounds and step-graphon checks",
    version=__version__,
    lifespan=lifespan,
)

# Include routers
app.include_router(health.router, tags=["health"])
app.include_router(spectral.router, prefix="/spectral", tags=["spectral"])
app.include_router(graphon.router, prefix="/graphon", tags=["graphon"])


@app.get("/")
async def root():
    """API information and available endpoints."""
    return {
        "name": "Nordhaus-Gaddum Spectral Toolkit API",
        "version": __version__,
        "endpoints": {
            "GET /health": "Health check",
            "GET /spectral/bound/{n}": "Conjectured NG maximum and optimal clique sizes at one order",
            "GET /spectral/bound-table": "Bound rows for n_min..n_max",
            "POST /spectral/ng": "lambda_1(G) + lambda_1(complement) for a JSON edge-list graph",
            "POST /spectral/qspread": "Signless Laplacian spread of a JSON edge-list graph",
            "POST /spectral/diagnostics": "S/T/L partition and structural predicates",
            "GET /graphon/theorem34": "Spectrum of the limit graphon and its complement",
            "POST /graphon/cut-norm": "Cut norm of the difference of two step graphons",
        },
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "ngspread.main:app",
        host="0.0.0.0",
        port=settings.api_port,
        reload=settings.debug,
    )
