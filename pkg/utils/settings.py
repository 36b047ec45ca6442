import os
import logging
from functools import lru_cache
from pathlib import Path

import yaml

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"

# environment variable -> (section, key, converter)
ENV_OVERRIDES = {
    "HAAR_MC_SAMPLES": ("monte_carlo", "samples", int),
    "HAAR_MC_SEED": ("monte_carlo", "seed", int),
    "HAAR_MC_WORKERS": ("monte_carlo", "workers", int),
    "HAAR_PORT": ("service", "port", int),
    "HAAR_LOG_LEVEL": ("logging", "level", str),
}


def load_yaml(name):
    """Load a YAML file from the config directory"""
    path = CONFIG_DIR / name
    with open(path, "r", encoding="utf-8") as handle:
        return yaml.safe_load(handle) or {}


@lru_cache(maxsize=1)
def load_settings():
    """Package defaults with environment overrides applied"""
    settings = load_yaml("defaults.yaml")

    for variable, (section, key, convert) in ENV_OVERRIDES.items():
        raw = os.getenv(variable)
        if raw is None:
            continue
        try:
            settings.setdefault(section, {})[key] = convert(raw)
            logger.debug(f"Override {section}.{key} from {variable}")
        except ValueError:
            logger.warning(f"Ignoring {variable}={raw!r}: not a valid {convert.__name__}")

    return settings


def get_setting(section, key, default=None):
    return load_settings().get(section, {}).get(key, default)
