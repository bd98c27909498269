"""Small JSON-backed store for run defaults (seeds, trial counts, caps).

Command-line flags override whatever is loaded here; the seed can also come
from the NEWTON_IMPLICIT_SEED environment variable.
"""
from __future__ import annotations

import json
import logging
import os

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "NEWTON_IMPLICIT_SEED"

DEFAULT_SETTINGS = {
    "seed": 0,
    "trials": 200,
    "bound": 9,
    "enumeration_cap": 24,
    "lifting_grid": [-3, 3],
    "random_lift_range": 10_000,
    "sample_margin": 5,
    "held_out_samples": 20,
    "t_height": 1000,
    "resample_budget": 50,
    "svg_scale": 40,
    "svg_margin": 1,
}


class SettingsStore:
    def __init__(self, settings_file: str):
        self.settings_file = settings_file

    def load(self) -> dict:
        settings = dict(DEFAULT_SETTINGS)
        if self.settings_file and os.path.exists(self.settings_file):
            try:
                with open(self.settings_file, 'r', encoding="utf-8") as f:
                    settings.update(json.load(f))
            except (OSError, json.JSONDecodeError) as e:
                logger.error(f"Failed to load settings, using defaults: {e}")
        return settings

    def save(self, settings: dict) -> None:
        try:
            os.makedirs(os.path.dirname(os.path.abspath(self.settings_file)), exist_ok=True)
            with open(self.settings_file, 'w', encoding="utf-8") as f:
                json.dump(settings, f, indent=4)
        except OSError as e:
            logger.error(f"Failed to save settings: {e}")


def resolve_seed(cli_seed: int | None, settings: dict) -> int:
    """Flag beats environment beats settings file."""
    if cli_seed is not None:
        return cli_seed
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value:
        try:
            return int(env_value)
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", SEED_ENV_VAR, env_value)
    return int(settings.get("seed", DEFAULT_SETTINGS["seed"]))
