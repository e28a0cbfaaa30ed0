"""
Logging for the pcf library and CLI.

Records go through a QueueHandler on the root logger so the threads of a
Wronskian scan never block on I/O. The listener writes to a Rich console on
stderr (stdout carries CSV/JSON results) or, with PCF_LOG_JSON=1, one JSON
object per line; PCF_LOG_TO_FILE=1 adds a rotating file at PCF_LOG_FILE
(default .pcf/logs/pcf.log).

Library modules only call get_logger; the CLI calls init_logging once.
"""

from __future__ import annotations

import atexit
import json
import logging
import os
import queue
import sys
import time
from contextlib import contextmanager
from logging.handlers import QueueHandler, QueueListener, RotatingFileHandler
from pathlib import Path
from typing import Iterator, List, Optional

from rich.console import Console
from rich.logging import RichHandler

DEFAULT_LOG_FILE = Path(".pcf/logs/pcf.log")

_CONSOLE = Console(stderr=True, highlight=False, soft_wrap=True)
_LISTENER: Optional[QueueListener] = None


class JsonFormatter(logging.Formatter):
    """One JSON object per record; the thread name identifies scan workers."""

    def format(self, record: logging.LogRecord) -> str:  # type: ignore[override]
        payload = {
            "level": record.levelname,
            "time": self.formatTime(record, datefmt="%Y-%m-%dT%H:%M:%S%z"),
            "logger": record.name,
            "msg": record.getMessage(),
            "thread": record.threadName,
        }
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


def _sinks(as_json: bool, log_file: Optional[Path]) -> List[logging.Handler]:
    if as_json:
        console: logging.Handler = logging.StreamHandler(stream=sys.stderr)
        console.setFormatter(JsonFormatter())
    else:
        console = RichHandler(console=_CONSOLE, show_time=True, show_path=False, markup=True)
        console.setFormatter(logging.Formatter("%(message)s"))
    sinks = [console]
    if log_file is not None:
        try:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            fh = RotatingFileHandler(log_file, maxBytes=2 * 1024 * 1024, backupCount=3, encoding="utf-8")
        except OSError as exc:
            _CONSOLE.print(f"[yellow]log file {log_file} unavailable: {exc}[/]")
        else:
            fh.setFormatter(
                JsonFormatter() if as_json else logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
            )
            sinks.append(fh)
    return sinks


def init_logging(level: Optional[str] = None) -> None:
    """Install the queue handler and start the listener; later calls only change the level."""
    global _LISTENER

    name = (level or os.getenv("PCF_LOG_LEVEL") or "WARNING").upper()
    root = logging.getLogger()
    root.setLevel(getattr(logging, name, logging.WARNING))
    if _LISTENER is not None:
        return

    as_json = os.getenv("PCF_LOG_JSON", "0") == "1"
    log_file = None
    if os.getenv("PCF_LOG_TO_FILE", "0") == "1":
        log_file = Path(os.getenv("PCF_LOG_FILE") or DEFAULT_LOG_FILE)

    records: queue.Queue = queue.Queue(-1)
    root.addHandler(QueueHandler(records))
    _LISTENER = QueueListener(records, *_sinks(as_json, log_file), respect_handler_level=True)
    _LISTENER.start()
    atexit.register(_LISTENER.stop)


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Namespaced logger (``pcf.<module>``); does not configure handlers."""
    return logging.getLogger(name or "pcf")


@contextmanager
def timed(log: logging.Logger, label: str) -> Iterator[None]:
    """Log the wall time of a block at DEBUG."""
    start = time.perf_counter()
    try:
        yield
    finally:
        log.debug("%s took %.3f s", label, time.perf_counter() - start)
