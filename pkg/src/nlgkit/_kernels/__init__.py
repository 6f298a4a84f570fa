"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

Every kernel works on ``int64`` id arrays (tokens are interned by the caller)
or on float arrays, and both backends return identical results. The numba
backend is used when numba imports cleanly and ``NLGKIT_DISABLE_NUMBA`` is not
set to a truthy value.
"""
from __future__ import annotations

import os

from . import _numpy as numpy_backend

_FALSY = {"", "0", "false", "no", "off"}


def _numba_requested() -> bool:
    return os.environ.get("NLGKIT_DISABLE_NUMBA", "").strip().lower() in _FALSY


numba_backend = None
if _numba_requested():
    try:
        from . import _numba as numba_backend  # noqa: F811
    except ImportError:  # pragma: no cover - numba missing
        numba_backend = None

backend = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if backend is numba_backend else "numpy"

lcs_length = backend.lcs_length
levenshtein = backend.levenshtein
ter_shift_search = backend.ter_shift_search
segment_type_counts = backend.segment_type_counts
bootstrap_spearman = backend.bootstrap_spearman

__all__ = [
    "BACKEND",
    "backend",
    "numba_backend",
    "numpy_backend",
    "lcs_length",
    "levenshtein",
    "ter_shift_search",
    "segment_type_counts",
    "bootstrap_spearman",
]
