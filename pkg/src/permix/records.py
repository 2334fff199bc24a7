"""Run records and the newline-delimited JSON result cache."""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import FamilySpec
from .rational import format_fraction, to_fraction

log = logging.getLogger(__name__)

CACHE_ENV = "PERMIX_CACHE"
METHODS = ("walk", "oracle", "formula")


@dataclass(frozen=True)
class RunRecord:
    family: FamilySpec
    config: tuple
    method: str
    value: str
    ratio: str
    wall_time_ms: float = 0.0

    @property
    def key(self) -> tuple:
        return record_key(self.family, self.config, self.method)

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "config": [format_fraction(x) for x in self.config],
            "method": self.method,
            "value": self.value,
            "ratio": self.ratio,
            "wall_time_ms": self.wall_time_ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "RunRecord":
        method = data["method"]
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        # round-trip the rationals to reject malformed strings early
        value, ratio = data["value"], data["ratio"]
        to_fraction(value), to_fraction(ratio)
        return cls(
            family=FamilySpec.from_json(data["family"]),
            config=tuple(sorted(to_fraction(x) for x in data["config"])),
            method=method,
            value=value,
            ratio=ratio,
            wall_time_ms=float(data.get("wall_time_ms", 0.0)),
        )


def record_key(family: FamilySpec, config, method: str) -> tuple:
    cfg = tuple(format_fraction(x) for x in sorted(Fraction(x) for x in config))
    return (family.n, family.r, family.s, cfg, method)


class ResultCache:
    """Append-only store of run records, one JSON object per line.

    Corrupt lines are skipped with a warning.  The first record stored under
    a key wins, so a cached value is returned byte for byte.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = RunRecord.from_json(json.loads(line))
                except (ValueError, KeyError, TypeError) as exc:
                    log.warning("%s:%d: skipping corrupt cache line (%s)", self.path, lineno, exc)
                    continue
                self._records.setdefault(rec.key, rec)

    def get(self, family, config, method):
        return self._records.get(record_key(family, config, method))

    def put(self, record: RunRecord) -> RunRecord:
        with self._lock:
            existing = self._records.get(record.key)
            if existing is not None:
                return existing
            self._records[record.key] = record
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(record.dumps() + "\n")
            return record

    def __len__(self):
        return len(self._records)


def default_cache_path():
    return os.environ.get(CACHE_ENV) or None
