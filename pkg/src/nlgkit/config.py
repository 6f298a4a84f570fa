"""Flat ``key = value`` run configuration.

Every key has a typed default; a config file and ``--set key=value`` CLI
overrides are applied on top in that order. The effective values (minus
run-only keys such as ``jobs``) are embedded in every report.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .resources import resolve

DEFAULTS: dict[str, Any] = {
    "metrics": "bleu,ter,rouge_1,rouge_2,rouge_l,semsim,gbm",
    "bleu.max_n": 4,
    "bleu.smoothing": "none",
    "ter.shifts": True,
    "ter.max_shifts": 50,
    "semsim.provider": "lexical",
    "embeddings": "",
    "dictionary": "builtin:dictionary",
    "basic_words": "builtin:basic_words",
    "ls.top_k": 2000,
    "stopwords": "builtin:stopwords",
    "abbreviations": "builtin:abbreviations",
    "lexicon": "",
    "msttr.segment_size": 50,
    "ratings.scale_min": 1.0,
    "ratings.scale_max": 6.0,
    "validate.min_words": 3,
    "validate.max_misspellings": 0,
    "validate.coverage_threshold": 1.0,
    "validate.allow_skipped_slots": False,
    "validate.semsim_threshold": 0.3,
    "validate.forbid_foreign_values": True,
    "validate.min_pass_rate": 0.5,
    "seed": 42,
    "bootstrap.n_resamples": 1000,
    "format": "json",
    "jobs": 1,
}

RUN_ONLY = {"format", "jobs"}
PATH_KEYS = ("embeddings", "dictionary", "basic_words", "stopwords", "abbreviations", "lexicon")
KNOWN_METRICS = ("bleu", "ter", "rouge_1", "rouge_2", "rouge_3", "rouge_4", "rouge_l", "semsim", "gbm")


class ConfigError(ValueError):
    pass


def _coerce(key: str, raw: str) -> Any:
    default = DEFAULTS[key]
    raw = raw.strip()
    try:
        if isinstance(default, bool):
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {type(default).__name__}") from None
    return raw


@dataclass
class RunConfig:
    values: dict[str, Any] = field(default_factory=lambda: dict(DEFAULTS))

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def set(self, key: str, raw: str) -> None:
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        self.values[key] = _coerce(key, raw)

    @classmethod
    def load(cls, path: str | Path | None = None, overrides: dict[str, str] | None = None) -> "RunConfig":
        cfg = cls()
        if path is not None:
            text = Path(path).read_text(encoding="utf-8")
            for lineno, line in enumerate(text.splitlines(), start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, raw = line.split("=", 1)
                cfg.set(key.strip(), raw)
        for key, raw in (overrides or {}).items():
            cfg.set(key, raw)
        cfg.check()
        return cfg

    def check(self) -> None:
        for key in PATH_KEYS:
            if self.values[key] and not resolve(self.values[key]).exists():
                raise ConfigError(f"{key}: file not found: {self.values[key]}")
        for m in self.metrics:
            if m not in KNOWN_METRICS:
                raise ConfigError(f"unknown metric {m!r}; known: {', '.join(KNOWN_METRICS)}")
        if self.values["bleu.smoothing"] not in ("none", "add-one"):
            raise ConfigError("bleu.smoothing must be 'none' or 'add-one'")
        if self.values["semsim.provider"] not in ("lexical", "embedding"):
            raise ConfigError("semsim.provider must be 'lexical' or 'embedding'")
        if self.values["semsim.provider"] == "embedding" and not self.values["embeddings"]:
            raise ConfigError("semsim.provider = embedding requires an embeddings file")
        if self.values["format"] not in ("json", "table"):
            raise ConfigError("format must be 'json' or 'table'")
        if self.values["jobs"] < 1 or self.values["msttr.segment_size"] < 1:
            raise ConfigError("jobs and msttr.segment_size must be >= 1")

    @property
    def metrics(self) -> list[str]:
        return [m.strip() for m in str(self.values["metrics"]).split(",") if m.strip()]

    def embedded(self) -> dict[str, Any]:
        """Effective configuration as echoed into reports."""
        return {k: v for k, v in self.values.items() if k not in RUN_ONLY}
