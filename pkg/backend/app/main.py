import logging
import logging.handlers
from pathlib import Path
from typing import Optional

from rich.logging import RichHandler

from app.core.config import settings
from app.core.config_loader import BACKEND_DIR, get_app_config

_configured = False


# ============ Logging Configuration ============
def setup_logging(level: Optional[str] = None, force: bool = False) -> None:
    """Configure the root logger once: rich console output plus an optional rotating file"""
    global _configured
    if _configured and not force:
        return

    logging_config = get_app_config().logging
    log_level_str = level or settings.LOG_LEVEL or logging_config.level
    log_level = getattr(logging, log_level_str.upper(), logging.INFO)

    formatter = logging.Formatter(logging_config.format, datefmt=logging_config.datefmt)

    # Console handler (stderr, so CSV on stdout stays clean)
    console_handler = RichHandler(show_path=False, rich_tracebacks=True)
    console_handler.setLevel(log_level)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
    root_logger.addHandler(console_handler)

    log_file = None
    if settings.LOG_TO_FILE:
        log_dir = Path(settings.LOG_DIR)
        if not log_dir.is_absolute():
            log_dir = BACKEND_DIR / log_dir
        log_dir.mkdir(parents=True, exist_ok=True)

        # File handler (rotating)
        log_file = log_dir / logging_config.app_log
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=logging_config.max_log_size_mb * 1024 * 1024,
            backupCount=logging_config.backup_count,
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # Suppress third-party library logs (reduce noise)
    for name in logging_config.quiet_loggers:
        logging.getLogger(name).setLevel(logging.WARNING)

    _configured = True
    logging.debug(f"Logging configured: level={log_level_str}, file={log_file}")


def main() -> None:
    """Console entry point"""
    from app.cli import app

    app()


if __name__ == "__main__":
    main()
