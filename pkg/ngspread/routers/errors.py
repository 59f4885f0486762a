"""Translation of toolkit errors into HTTP responses."""

from fastapi import HTTPException
import structlog

from ngspread.errors import classify_error

logger = structlog.get_logger(__name__)

STATUS_BY_TYPE = {
    "invalid_parameter": 400,
    "size_limit": 400,
    "numeric_failure": 500,
}


def http_error(error: Exception) -> HTTPException:
    error_type = classify_error(error)
    status = STATUS_BY_TYPE.get(error_type, 500)
    logger.warning("Request failed", error_type=error_type, status=status, error=str(error))
    return HTTPException(status_code=status, detail={"error_type": error_type, "message": str(error)})
