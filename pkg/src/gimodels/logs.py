"""
Logging setup for scripts and the CLI.

Library modules only call logging.getLogger(__name__); handlers are attached
here, once, by whoever owns the process.
"""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

from gimodels.config import LoggingConfig

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s | %(message)s"


def configure_logging(
    cfg: LoggingConfig, level: Optional[str] = None
) -> Optional[Path]:
    """
    Configure the root logger and return the run-log path if one was opened.

    With cfg.to_file a timestamped <log_dir>/<ddmmYYYY_HHMMSS>_run.log is
    written next to the stderr stream.
    """
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    log_file = None
    if cfg.to_file:
        log_dir = Path(cfg.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%d%m%Y_%H%M%S")
        log_file = log_dir / f"{timestamp}_run.log"
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))

    logging.basicConfig(
        level=(level or cfg.level).upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    return log_file
