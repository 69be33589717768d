"""
Common utilities for the Fermionic Entanglement Toolkit
"""

import json
import logging
import logging.config
import os
import sys
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Dict

import structlog

sys.path.append(str(Path(__file__).resolve().parent.parent))

from config.entanglement_config import DATA_PATHS, LOGGING_CONFIG

_logging_lock = threading.Lock()
_logging_configured = False


def _configure_logging() -> None:
    """Apply LOGGING_CONFIG and route structlog through the stdlib handlers (once)"""
    global _logging_configured
    with _logging_lock:
        if _logging_configured:
            return
        ensure_logs_directory()
        logging.config.dictConfig(LOGGING_CONFIG)
        structlog.configure(
            processors=[
                structlog.stdlib.filter_by_level,
                structlog.stdlib.add_log_level,
                structlog.processors.TimeStamper(fmt="iso"),
                structlog.processors.format_exc_info,
                structlog.processors.KeyValueRenderer(key_order=['event'], sort_keys=True),
            ],
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=True,
        )
        _logging_configured = True


def setup_logging(name: str) -> structlog.stdlib.BoundLogger:
    """Setup logging configuration and return a structured logger for `name`"""
    _configure_logging()
    return structlog.get_logger(name)


def save_json_file(data: Dict[str, Any], file_path: str) -> bool:
    """
    Write `data` as indented JSON, creating parent directories.

    Returns False (and logs) instead of raising when the file cannot be written.
    """
    target = Path(file_path).expanduser()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding='utf-8')
    except (OSError, TypeError, ValueError) as e:
        setup_logging(__name__).error("json_write_failed", path=str(target), reason=str(e))
        return False
    return True


def get_current_timestamp() -> float:
    """Unix time in seconds"""
    return datetime.now().timestamp()


def ensure_logs_directory():
    os.makedirs(os.path.dirname(os.path.abspath(DATA_PATHS["log_file"])), exist_ok=True)


ensure_logs_directory()
