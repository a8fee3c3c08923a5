"""Configuration for astjudge: defaults from the environment, overrides from JSON.

Precedence (lowest first):
  1. built-in defaults below, optionally overridden by ASTJUDGE_* variables
     in the environment or the repository's .env file
  2. a JSON config file passed with --config
  3. explicit CLI flags
"""
from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from astjudge.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parent.parent

load_dotenv(REPO_ROOT / ".env")


def _env_nonempty(key: str) -> str | None:
    v = os.getenv(key)
    return v.strip() if v and str(v).strip() else None


def _env_int(key: str, default: int) -> int:
    v = _env_nonempty(key)
    try:
        return int(v) if v is not None else default
    except ValueError:
        return default


def _env_float(key: str, default: float) -> float:
    v = _env_nonempty(key)
    try:
        return float(v) if v is not None else default
    except ValueError:
        return default


def _env_bool(key: str, default: bool) -> bool:
    v = _env_nonempty(key)
    if v is None:
        return default
    return v.lower() in ("1", "true", "yes", "on")


# --- Mapper / judge defaults ---
MIN_SUBTREE_HEIGHT = _env_int("ASTJUDGE_MIN_SUBTREE_HEIGHT", 2)
DICE_THRESHOLD = _env_float("ASTJUDGE_DICE_THRESHOLD", 0.5)
NAME_SIMILARITY_THRESHOLD = _env_float("ASTJUDGE_NAME_SIMILARITY_THRESHOLD", 0.6)
NIT_NAMES_ONLY = _env_bool("ASTJUDGE_NIT_NAMES_ONLY", False)

# --- Runner ---
JOBS = max(1, _env_int("ASTJUDGE_JOBS", 1))
LOG_LEVEL = _env_nonempty("ASTJUDGE_LOG_LEVEL") or "INFO"
DEFAULT_ALGORITHMS = ("gt", "mtd", "ijm")

# --- Paths ---
BASE_DIR = Path(__file__).resolve().parent
_out = _env_nonempty("ASTJUDGE_OUTPUT_DIR")
OUTPUT_DIR = Path(_out) if _out else (REPO_ROOT / "output")
_traces = _env_nonempty("ASTJUDGE_TRACE_DIR")
TRACE_DIR = Path(_traces) if _traces else (OUTPUT_DIR / "traces")

# --- HTTP API ---
API_HOST = _env_nonempty("ASTJUDGE_API_HOST") or "127.0.0.1"
API_PORT = _env_int("ASTJUDGE_API_PORT", 8900)

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"


def setup_logging(level: str | int | None = None):
    """Configure root logging once for CLI / API entry points."""
    logging.basicConfig(
        level=level or LOG_LEVEL,
        format=LOG_FORMAT,
    )


# ═══════════════════════════════════════════════════════════════
#  TYPED CONFIG MODELS
# ═══════════════════════════════════════════════════════════════

class MapperConfig(BaseModel):
    """Tuning knobs shared by the built-in mappers."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    min_subtree_height: int = Field(default=MIN_SUBTREE_HEIGHT, ge=1)
    dice_threshold: float = Field(default=DICE_THRESHOLD, ge=0.0, le=1.0)
    name_similarity_threshold: float = Field(
        default=NAME_SIMILARITY_THRESHOLD, ge=0.0, le=1.0)


class JudgeConfig(MapperConfig):
    """MapperConfig plus the judge's NIT sensitivity flag."""

    nit_names_only: bool = NIT_NAMES_ONLY

    @property
    def mapper(self) -> MapperConfig:
        return MapperConfig(
            min_subtree_height=self.min_subtree_height,
            dice_threshold=self.dice_threshold,
            name_similarity_threshold=self.name_similarity_threshold,
        )


def load_config(path: Path | str | None = None, **overrides) -> JudgeConfig:
    """Build a JudgeConfig from an optional JSON file plus explicit overrides.

    Overrides whose value is None are ignored, so CLI flags that were not
    given never mask file values.
    """
    data: dict = {}
    if path is not None:
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return JudgeConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "config"
        raise ConfigError(f"{field}: {first['msg']}") from e
