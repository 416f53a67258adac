"""
Logging bootstrap shared by the CLI and the HTTP app.
"""
import logging

from app.core.config import settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: int | None = None) -> None:
    """Configure root logging; INFO in development, WARNING otherwise."""
    if level is None:
        level = logging.INFO if settings.environment == "development" else logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT)
