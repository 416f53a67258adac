"""
Dependencies and error translation for API endpoints.
"""
import logging

from fastapi import HTTPException

from app.core.errors import (
    ConfigError,
    DegenerateLoss,
    GapClosed,
    NonConvergent,
    OutOfLattice,
    UnclassifiableBrokenPhase,
    WalkError,
)

logger = logging.getLogger(__name__)

INPUT_ERRORS = (ConfigError, DegenerateLoss, GapClosed, OutOfLattice)
NUMERICAL_ERRORS = (NonConvergent, UnclassifiableBrokenPhase)


def to_http_error(error: Exception) -> HTTPException:
    """Map domain errors to HTTP status codes; anything else is a 500."""
    if isinstance(error, INPUT_ERRORS):
        return HTTPException(status_code=400, detail=str(error))
    if isinstance(error, NUMERICAL_ERRORS):
        return HTTPException(status_code=422, detail=str(error))
    if isinstance(error, WalkError):
        return HTTPException(status_code=400, detail=str(error))
    logger.error(f"Unexpected error in endpoint: {error}", exc_info=error)
    return HTTPException(status_code=500, detail="internal error")
