"""API route handlers."""

from ngspread.routers import errors, graphon, health, spectral

__all__ = ["health", "spectral", "graphon", "errors"]
