"""Centralized logging configuration for newton-implicit.

Goal: when a verification run reports a falsified containment or an oracle
failure, there should be a plain-text log file that shows exactly which
curve, which coefficient draw, which lifting or staircase was involved and
the full exception, without rerunning the job under a debugger.

Every file record carries the run it belongs to (sub-command and seed), so
a rotated log holding many invocations can be filtered down to one run and
that run replayed with the same seed.

configure_logging() should be called exactly once, as early as possible,
typically from main.py. Standard output is reserved for JSON reports, so the
console handler writes to stderr.
"""
from __future__ import annotations

import logging
import logging.handlers
import os
import sys
from typing import Optional

LOG_FILENAME = "newton_implicit.log"
MAX_BYTES = 5 * 1024 * 1024  # 5 MB per file
BACKUP_COUNT = 3

FILE_FORMAT = "%(asctime)s | %(levelname)-8s | %(run)-18s | %(name)s | %(message)s"
CONSOLE_FORMAT = "%(levelname)s %(name)s: %(message)s"
NO_RUN = "-"

_configured = False
_run_label = NO_RUN


class RunContextFilter(logging.Filter):
    """Stamps records with the label of the current run."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run = _run_label
        return True


def set_run_context(command: str, seed: Optional[int] = None) -> str:
    global _run_label
    _run_label = command if seed is None else f"{command} seed={seed}"
    return _run_label


def configure_logging(log_dir: str, file_level=logging.DEBUG, console_level=logging.WARNING) -> str:
    """Sets up the root logger with a rotating file handler (verbose, run
    labelled) and a stderr handler (concise). Returns the full path to the
    active log file.

    Safe to call more than once; later calls are no-ops so the test suite and
    repeated CLI invocations in one process share the handlers.
    """
    global _configured
    if _configured:
        return get_current_log_path()

    log_path = os.path.join(log_dir, LOG_FILENAME)
    os.makedirs(log_dir, exist_ok=True)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)

    file_handler = logging.handlers.RotatingFileHandler(
        log_path, maxBytes=MAX_BYTES, backupCount=BACKUP_COUNT, encoding="utf-8"
    )
    file_handler.setLevel(file_level)
    file_handler.addFilter(RunContextFilter())
    file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
    root.addHandler(file_handler)

    if sys.stderr is not None:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(console_level)
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        root.addHandler(console_handler)

    _install_excepthook()

    _configured = True
    logging.getLogger(__name__).info("Logging initialized. Log file: %s", log_path)
    return log_path


def _install_excepthook():
    previous_hook = sys.excepthook

    def _log_uncaught(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            previous_hook(exc_type, exc_value, exc_traceback)
            return
        logging.getLogger("newton_implicit.uncaught").critical(
            "Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback)
        )
        previous_hook(exc_type, exc_value, exc_traceback)

    sys.excepthook = _log_uncaught


def get_current_log_path() -> str | None:
    for handler in logging.getLogger().handlers:
        if isinstance(handler, logging.handlers.RotatingFileHandler):
            return handler.baseFilename
    return None


def reset_logging_for_tests():
    """Drops all root handlers, the configured flag and the run label."""
    global _configured, _run_label
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    _configured = False
    _run_label = NO_RUN
