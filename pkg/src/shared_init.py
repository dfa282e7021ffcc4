"""
Shared initialization for the Teledistill command line.
Contains config loading and logger setup common to every command.
"""

import copy
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from dotenv import load_dotenv

from src.constants import (
    DEFAULT_MAX_WORKERS,
    DEFAULT_SEED,
    LOG_DIR_DEFAULT,
    RANDOM_STATES_N2,
    RANDOM_STATES_PER_BATTERY,
    REPORT_FORMATS,
)
from src.error_handler import InvalidInputError
from src.verbose_logger import VerboseLogger, init_logger

# Load environment variables
load_dotenv()

CONFIG_ENV = "TELEDISTILL_CONFIG"
LOG_LEVEL_ENV = "TELEDISTILL_LOG_LEVEL"

DEFAULT_CONFIG: Dict[str, Any] = {
    "seed": DEFAULT_SEED,
    "battery": {
        "random_states": RANDOM_STATES_PER_BATTERY,
        "random_states_n2": RANDOM_STATES_N2,
        "max_workers": DEFAULT_MAX_WORKERS,
    },
    "report": {"format": "csv"},
    "logging": {"dir": LOG_DIR_DEFAULT, "level": "INFO"},
    "exponent": {"rates": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]},
}


@lru_cache(maxsize=8)
def _read_yaml(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        cfg = yaml.safe_load(f) or {}
    if not isinstance(cfg, dict):
        raise InvalidInputError(f"{path} must contain a mapping", field="config")
    return cfg


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Known keys of base overridden by override; unknown keys ignored"""
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in out:
            continue
        if isinstance(out[key], dict) and isinstance(value, dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from YAML over the built-in defaults

    Args:
        path: Config file; falls back to $TELEDISTILL_CONFIG, then config.yaml.
            A missing default file yields the defaults; a missing explicit
            file is an error.

    Returns:
        A fresh config dict (callers may mutate it)
    """
    explicit = path or os.getenv(CONFIG_ENV)
    candidate = Path(explicit or "config.yaml")
    if not candidate.exists():
        if explicit:
            raise FileNotFoundError(f"config file not found: {candidate}")
        return copy.deepcopy(DEFAULT_CONFIG)
    # Treat the cached file contents as immutable.
    return _merge(DEFAULT_CONFIG, _read_yaml(str(candidate)))


@dataclass
class Settings:
    """Resolved command settings"""
    seed: int
    random_states: int
    random_states_n2: int
    max_workers: int
    report_format: str
    log_dir: Optional[str]
    log_level: str
    rates: List[float]

    @classmethod
    def from_config(cls, cfg: Dict[str, Any]) -> "Settings":
        fmt = cfg["report"]["format"]
        if fmt not in REPORT_FORMATS:
            raise InvalidInputError(f"unknown report format {fmt!r}", field="report.format")
        return cls(
            seed=int(cfg["seed"]),
            random_states=int(cfg["battery"]["random_states"]),
            random_states_n2=int(cfg["battery"]["random_states_n2"]),
            max_workers=int(cfg["battery"]["max_workers"]),
            report_format=fmt,
            log_dir=cfg["logging"].get("dir"),
            log_level=os.getenv(LOG_LEVEL_ENV) or cfg["logging"]["level"],
            rates=[float(r) for r in cfg["exponent"]["rates"]],
        )


def init_session(config_path: Optional[str] = None, verbose: bool = False,
                 log_file: Optional[str] = None) -> Tuple[Settings, VerboseLogger]:
    """Load settings and initialize the global logger"""
    settings = Settings.from_config(load_config(config_path))
    logger = init_logger(verbose=verbose, log_file=log_file, log_dir=settings.log_dir if log_file is None else None,
                         level=settings.log_level)
    return settings, logger
