# config.py

import os
from typing import Optional

from dotenv import load_dotenv

from .services.errors import ConfigError

load_dotenv()

# Worker cap for per-eigen-index shift solves (0 = one per CPU)
# Set via environment variable GRIDSPECTRA_THREADS
DEFAULT_THREADS = 0

# Largest node count for which explicit dense Laplacians are assembled
# Set via environment variable GRIDSPECTRA_DENSE_CAP
DEFAULT_DENSE_CAP = 4096

# Root log level for the command-line tool (overridable with --log-level)
# Set via environment variable GRIDSPECTRA_LOG_LEVEL
DEFAULT_LOG_LEVEL = "WARNING"


def int_from_env(name: str, default: int, minimum: int) -> int:
    """Read an integer setting, rejecting values below ``minimum``."""
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def dense_cap() -> int:
    return int_from_env("GRIDSPECTRA_DENSE_CAP", DEFAULT_DENSE_CAP, 1)


def log_level() -> str:
    return os.environ.get("GRIDSPECTRA_LOG_LEVEL", "").strip().upper() or DEFAULT_LOG_LEVEL


def resolve_threads(requested: Optional[int] = None) -> int:
    """Turn a thread setting into a concrete worker count (0 means auto)."""
    if requested is None:
        value = int_from_env("GRIDSPECTRA_THREADS", DEFAULT_THREADS, 0)
    else:
        value = requested
    if value < 0:
        raise ConfigError(f"thread count must be >= 0, got {value}")
    if value == 0:
        return os.cpu_count() or 1
    return value
