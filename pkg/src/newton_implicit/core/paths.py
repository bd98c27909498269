"""Where newton-implicit keeps the settings file and the rotating logs.

Both live in one per-user directory so a log is always found next to the
run defaults it was produced with. Setting NEWTON_IMPLICIT_HOME moves the
whole directory, e.g. to keep a batch of verification runs apart.
"""
from __future__ import annotations

import os
import sys
from typing import Optional

APP_DIR_NAME = "NewtonImplicit"
HOME_ENV_VAR = "NEWTON_IMPLICIT_HOME"
LOGS_DIRNAME = "logs"
SETTINGS_FILENAME = "settings.json"


def _platform_base() -> str:
    if sys.platform == "win32":
        return os.environ.get("APPDATA") or os.path.expanduser("~")
    if sys.platform == "darwin":
        return os.path.expanduser("~/Library/Application Support")
    return os.environ.get("XDG_DATA_HOME") or os.path.expanduser("~/.local/share")


def default_app_data_dir() -> str:
    """Returns (and creates if needed) the data directory:
    - $NEWTON_IMPLICIT_HOME when set
    - Windows: %APPDATA%\\NewtonImplicit
    - macOS:   ~/Library/Application Support/NewtonImplicit
    - Linux:   $XDG_DATA_HOME/NewtonImplicit or ~/.local/share/NewtonImplicit
    """
    path = os.environ.get(HOME_ENV_VAR) or os.path.join(_platform_base(), APP_DIR_NAME)
    os.makedirs(path, exist_ok=True)
    return path


def default_log_dir(app_data_dir: Optional[str] = None) -> str:
    path = os.path.join(app_data_dir or default_app_data_dir(), LOGS_DIRNAME)
    os.makedirs(path, exist_ok=True)
    return path


def default_settings_path(app_data_dir: Optional[str] = None) -> str:
    """Not created here; a missing file means defaults."""
    return os.path.join(app_data_dir or default_app_data_dir(), SETTINGS_FILENAME)
