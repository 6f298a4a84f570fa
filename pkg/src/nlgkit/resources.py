"""Word-list resources: bundled defaults and user-supplied files.

Paths of the form ``builtin:NAME`` resolve to ``nlgkit/data/NAME.txt``.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

BUILTIN_PREFIX = "builtin:"


def resolve(path: str | Path) -> Path:
    spec = str(path)
    if spec.startswith(BUILTIN_PREFIX):
        name = spec[len(BUILTIN_PREFIX):]
        suffix = "" if "." in name else ".txt"
        return Path(str(resources.files("nlgkit") / "data" / f"{name}{suffix}"))
    return Path(spec)


def read_lines(path: str | Path) -> list[str]:
    """Non-empty stripped lines, in file order."""
    text = resolve(path).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


@lru_cache(maxsize=32)
def _cached_wordset(path: str, top_k: int | None) -> frozenset[str]:
    lines = read_lines(path)
    if top_k is not None:
        lines = lines[:top_k]
    return frozenset(w.casefold() for w in lines)


def load_wordset(path: str | Path, top_k: int | None = None) -> frozenset[str]:
    """Load a one-word-per-line list, optionally keeping only the first ``top_k`` lines."""
    return _cached_wordset(str(path), top_k)


def default_dictionary() -> frozenset[str]:
    return load_wordset("builtin:dictionary")


def default_stopwords() -> frozenset[str]:
    return load_wordset("builtin:stopwords")


def default_basic_words(top_k: int = 2000) -> frozenset[str]:
    return load_wordset("builtin:basic_words", top_k)
