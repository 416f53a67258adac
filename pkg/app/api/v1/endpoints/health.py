"""
Health check and status endpoints.
"""
from fastapi import APIRouter

from app.core.config import settings

router = APIRouter()


@router.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "qwalk diffusion API",
        "status": "running",
        "version": "1.0.0"
    }


@router.get("/health")
async def health_check():
    """Health check endpoint."""
    return {
        "status": "healthy",
        "environment": settings.environment,
        "default_num_k": settings.default_num_k,
        "max_sweep_rows": settings.api_max_sweep_rows,
    }
