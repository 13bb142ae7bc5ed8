import sys

from loguru import logger

from cli.api import build_cli
from cli.manager import QuantumManager
from settings.app_settings import settings


def configure_logging() -> None:
    """Log to stderr at the configured level, plus an optional rotating file."""
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)
    if settings.log_file is not None:
        logger.add(
            settings.log_file,
            level=settings.log_level,
            rotation="10 MB",
            retention="7 days",
        )


def init_manager() -> QuantumManager:
    """Initialize the task manager."""
    return QuantumManager(app_settings=settings)


app = build_cli(init_manager())


if __name__ == "__main__":
    configure_logging()
    app()
