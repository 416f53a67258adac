"""
FastAPI application exposing the quantum-walk engine over HTTP.
"""
from contextlib import asynccontextmanager
import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.api.v1.api import api_router
from app.core.config import settings
from app.core.logging import configure_logging

configure_logging()
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Manage application lifespan - startup and shutdown."""
    logger.info("Starting qwalk diffusion API...")
    logger.info(f"Environment: {settings.environment}")
    logger.info(
        f"Defaults: t={settings.default_steps}, num_k={settings.default_num_k}, "
        f"sweep workers={settings.sweep_max_workers}"
    )
    yield
    logger.info("Shutting down qwalk diffusion API")


app = FastAPI(
    title="qwalk diffusion API",
    description="Split-step quantum walk: diffusion, entropy, winding numbers and PT phases",
    version="1.0.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="/api/v1")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.environment == "development",
        log_level="info" if settings.environment == "development" else "warning"
    )
