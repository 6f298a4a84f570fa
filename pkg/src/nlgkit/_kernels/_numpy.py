"""Pure-numpy kernels. Reference backend; also used when numba is disabled."""
from __future__ import annotations

import numpy as np

MAX_PHRASE = 10


def lcs_length(a: np.ndarray, b: np.ndarray) -> int:
    """Length of the longest common subsequence of two id arrays."""
    if len(a) == 0 or len(b) == 0:
        return 0
    prev = np.zeros(len(b) + 1, dtype=np.int64)
    for token in a:
        # cur[j] = max(prev[j-1] + match, prev[j], cur[j-1]); rows are
        # non-decreasing so the cur[j-1] term is a running maximum
        tmp = prev.copy()
        hit = np.flatnonzero(b == token) + 1
        tmp[hit] = prev[hit - 1] + 1
        prev = np.maximum.accumulate(tmp)
    return int(prev[-1])


def _edit_distance_batch(rows: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Levenshtein distance from each row of ``rows`` (k, n) to ``ref``."""
    k, n = rows.shape
    m = len(ref)
    cols = np.arange(m + 1, dtype=np.int64)
    prev = np.broadcast_to(cols, (k, m + 1)).copy()
    for i in range(n):
        cost = (rows[:, i][:, None] != ref[None, :]).astype(np.int64)
        tmp = np.empty_like(prev)
        tmp[:, 0] = i + 1
        tmp[:, 1:] = np.minimum(prev[:, 1:] + 1, prev[:, :-1] + cost)
        # cur[j] = min(tmp[j], cur[j-1] + 1) == min_k(tmp[k] + j - k)
        prev = np.minimum.accumulate(tmp - cols, axis=1) + cols
    return prev[:, -1]


def levenshtein(a: np.ndarray, b: np.ndarray) -> int:
    if len(a) == 0:
        return len(b)
    return int(_edit_distance_batch(np.asarray(a, dtype=np.int64)[None, :], b)[0])


def _phrase_in_ref(hyp: np.ndarray, start: int, length: int, ref: np.ndarray) -> bool:
    if length > len(ref):
        return False
    phrase = hyp[start:start + length]
    windows = np.lib.stride_tricks.sliding_window_view(ref, length)
    return bool((windows == phrase).all(axis=1).any())


def _shift_candidates(hyp: np.ndarray, ref: np.ndarray, max_phrase: int):
    n = len(hyp)
    rows, keys = [], []
    for start in range(n):
        for length in range(1, min(max_phrase, n - start) + 1):
            if not _phrase_in_ref(hyp, start, length, ref):
                break  # longer phrases starting here cannot match either
            phrase = hyp[start:start + length]
            rest = np.concatenate([hyp[:start], hyp[start + length:]])
            for dest in range(len(rest) + 1):
                if dest == start:
                    continue
                rows.append(np.concatenate([rest[:dest], phrase, rest[dest:]]))
                keys.append((length, start, dest))
    return rows, keys


def ter_shift_search(hyp: np.ndarray, ref: np.ndarray, max_shifts: int = 50,
                     max_phrase: int = MAX_PHRASE) -> tuple[int, int]:
    """Greedy phrase-shift search. Returns ``(shifts, remaining_edit_distance)``.

    Each round applies the single shift that lowers the edit distance the most
    (ties: longer phrase, then earlier start, then earlier destination) and
    stops once no shift lowers it.
    """
    hyp = np.asarray(hyp, dtype=np.int64)
    ref = np.asarray(ref, dtype=np.int64)
    current = levenshtein(hyp, ref)
    shifts = 0
    while shifts < max_shifts and current > 0:
        rows, keys = _shift_candidates(hyp, ref, max_phrase)
        if not rows:
            break
        dists = _edit_distance_batch(np.stack(rows), ref)
        best = None
        for i, (length, start, dest) in enumerate(keys):
            key = (current - int(dists[i]), length, -start, -dest)
            if best is None or key > best[0]:
                best = (key, i)
        if best[0][0] <= 0:
            break
        hyp = rows[best[1]]
        current = int(dists[best[1]])
        shifts += 1
    return shifts, current


def segment_type_counts(ids: np.ndarray, segment_size: int) -> np.ndarray:
    """Number of distinct ids in each complete, non-overlapping segment."""
    n_seg = len(ids) // segment_size
    if n_seg == 0:
        return np.zeros(0, dtype=np.int64)
    seg = np.sort(np.asarray(ids[:n_seg * segment_size]).reshape(n_seg, segment_size), axis=1)
    return 1 + (np.diff(seg, axis=1) != 0).sum(axis=1)


def average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based fractional ranks along the last axis; ties get the mean rank."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    k, n = values.shape
    order = np.argsort(values, axis=1, kind="stable")
    sv = np.take_along_axis(values, order, axis=1)
    pos = np.broadcast_to(np.arange(n), (k, n))
    new_group = np.ones((k, n), dtype=bool)
    new_group[:, 1:] = sv[:, 1:] != sv[:, :-1]
    end_group = np.ones((k, n), dtype=bool)
    end_group[:, :-1] = new_group[:, 1:]
    first = np.maximum.accumulate(np.where(new_group, pos, 0), axis=1)
    last = np.minimum.accumulate(np.where(end_group, pos, n)[:, ::-1], axis=1)[:, ::-1]
    ranks = np.empty((k, n), dtype=np.float64)
    np.put_along_axis(ranks, order, (first + last) / 2.0 + 1.0, axis=1)
    return ranks


def rank_pearson_rows(rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
    n = rx.shape[1]
    # the mean of any rank vector is (n + 1) / 2, so centring stays exact
    cx = rx - (n + 1) / 2.0
    cy = ry - (n + 1) / 2.0
    sxy = (cx * cy).sum(axis=1)
    sxx = (cx * cx).sum(axis=1)
    syy = (cy * cy).sum(axis=1)
    out = np.full(rx.shape[0], np.nan)
    ok = (sxx > 0) & (syy > 0)
    out[ok] = np.clip(sxy[ok] / np.sqrt(sxx[ok] * syy[ok]), -1.0, 1.0)
    return out


def bootstrap_spearman(x: np.ndarray, y: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Spearman rho for every resample row of ``idx``; NaN where undefined."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return rank_pearson_rows(average_ranks(x[idx]), average_ranks(y[idx]))
