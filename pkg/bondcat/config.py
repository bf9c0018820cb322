from __future__ import annotations

import os
from pathlib import Path


def _as_bool(value: str | None, default: bool) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _as_int(value: str | None, default: int) -> int:
    if value is None or not value.strip():
        return default
    try:
        return int(value.strip())
    except ValueError:
        return default


DEFAULT_FIELD = (os.getenv("BONDCAT_FIELD") or "rational").strip().lower()
DEFAULT_SEED = _as_int(os.getenv("BONDCAT_SEED"), 1)
DEFAULT_TRIALS = max(1, _as_int(os.getenv("BONDCAT_TRIALS"), 20))
LOG_LEVEL = (os.getenv("BONDCAT_LOG_LEVEL") or "INFO").strip().upper()
HARNESS_WORKERS = max(1, _as_int(os.getenv("BONDCAT_HARNESS_WORKERS"), 1))
MAX_DEPTH = max(1, _as_int(os.getenv("BONDCAT_MAX_DEPTH"), 2))
JSON_REPORTS = _as_bool(os.getenv("BONDCAT_JSON_REPORTS"), False)
CHECK_OUTPUTS = _as_bool(os.getenv("BONDCAT_CHECK_OUTPUTS"), True)

# Randomized property suites run over a small odd prime field.
PROPERTY_FIELD = "gf:5"

FORMAT_TAG = "bondcat/1"
TEMPLATES_DIR = Path(__file__).resolve().parent / "templates"
