"""
Launch the qwalk diffusion API with uvicorn using the QWALK_* settings.
"""
import logging

import uvicorn

from app.core.config import settings
from app.core.logging import configure_logging


def uvicorn_options() -> dict:
    """uvicorn keyword arguments; the log level follows the root logger."""
    return {
        "host": settings.host,
        "port": settings.port,
        "reload": settings.environment == "development",
        "log_level": logging.getLevelName(logging.getLogger().getEffectiveLevel()).lower(),
    }


if __name__ == "__main__":
    configure_logging()
    logging.getLogger(__name__).info(f"Serving qwalk API on {settings.host}:{settings.port}")
    uvicorn.run("app.main:app", **uvicorn_options())
