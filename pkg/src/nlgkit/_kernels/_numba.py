"""numba-compiled kernels; results match ``_numpy`` exactly."""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_PHRASE = 10


@njit(cache=True)
def _lcs(a, b):
    m = b.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(a.shape[0]):
        cur[0] = 0
        for j in range(1, m + 1):
            if a[i] == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        prev, cur = cur, prev
    return prev[m]


@njit(cache=True)
def _edit_distance(a, b, prev, cur):
    m = b.shape[0]
    for j in range(m + 1):
        prev[j] = j
    for i in range(a.shape[0]):
        cur[0] = i + 1
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if a[i] == b[j - 1] else 1)
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


@njit(cache=True)
def _phrase_in_ref(hyp, start, length, ref):
    for k in range(ref.shape[0] - length + 1):
        ok = True
        for t in range(length):
            if ref[k + t] != hyp[start + t]:
                ok = False
                break
        if ok:
            return True
    return False


@njit(cache=True)
def _apply_shift(hyp, start, length, dest, out):
    # remove hyp[start:start+length] and reinsert it before position dest of the remainder
    n = hyp.shape[0]
    w = 0
    r = 0
    for pos in range(n - length + 1):
        if pos == dest:
            for t in range(length):
                out[w] = hyp[start + t]
                w += 1
        if pos < n - length:
            if r == start:
                r += length
            out[w] = hyp[r]
            w += 1
            r += 1


@njit(cache=True)
def _ter_shift_search(hyp, ref, max_shifts, max_phrase):
    n = hyp.shape[0]
    m = ref.shape[0]
    prev = np.empty(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    work = hyp.copy()
    cand = np.empty(n, dtype=np.int64)
    best_seq = np.empty(n, dtype=np.int64)
    current = _edit_distance(work, ref, prev, cur)
    shifts = 0
    while shifts < max_shifts and current > 0:
        best_gain = 0
        best_len = -1
        best_start = 0
        best_dest = 0
        best_dist = current
        for start in range(n):
            for length in range(1, min(max_phrase, n - start) + 1):
                if length > m or not _phrase_in_ref(work, start, length, ref):
                    break
                for dest in range(n - length + 1):
                    if dest == start:
                        continue
                    _apply_shift(work, start, length, dest, cand)
                    dist = _edit_distance(cand, ref, prev, cur)
                    gain = current - dist
                    better = False
                    if best_len < 0 or gain > best_gain:
                        better = True
                    elif gain == best_gain:
                        if length > best_len:
                            better = True
                        elif length == best_len:
                            if start < best_start or (start == best_start and dest < best_dest):
                                better = True
                    if better:
                        best_gain = gain
                        best_len = length
                        best_start = start
                        best_dest = dest
                        best_dist = dist
                        best_seq[:] = cand
        if best_len < 0 or best_gain <= 0:
            break
        work[:] = best_seq
        current = best_dist
        shifts += 1
    return shifts, current


@njit(cache=True)
def _segment_type_counts(ids, segment_size):
    # one linear pass: an id is new to segment s if it was last seen in an earlier one
    n_seg = ids.shape[0] // segment_size
    out = np.zeros(n_seg, dtype=np.int64)
    if n_seg == 0:
        return out
    last = np.full(ids[:n_seg * segment_size].max() + 1, -1, dtype=np.int64)
    for i in range(n_seg * segment_size):
        s = i // segment_size
        if last[ids[i]] != s:
            last[ids[i]] = s
            out[s] += 1
    return out


@njit(cache=True)
def _average_ranks(values, out):
    n = values.shape[0]
    order = np.argsort(values, kind="mergesort")
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            out[order[t]] = rank
        i = j + 1


@njit(cache=True)
def _bootstrap_spearman(x, y, idx):
    k, n = idx.shape
    out = np.empty(k, dtype=np.float64)
    xs = np.empty(n, dtype=np.float64)
    ys = np.empty(n, dtype=np.float64)
    rx = np.empty(n, dtype=np.float64)
    ry = np.empty(n, dtype=np.float64)
    mid = (n + 1) / 2.0
    for r in range(k):
        for t in range(n):
            xs[t] = x[idx[r, t]]
            ys[t] = y[idx[r, t]]
        _average_ranks(xs, rx)
        _average_ranks(ys, ry)
        sxy = 0.0
        sxx = 0.0
        syy = 0.0
        for t in range(n):
            cx = rx[t] - mid
            cy = ry[t] - mid
            sxy += cx * cy
            sxx += cx * cx
            syy += cy * cy
        if sxx > 0.0 and syy > 0.0:
            rho = sxy / np.sqrt(sxx * syy)
            out[r] = min(1.0, max(-1.0, rho))
        else:
            out[r] = np.nan
    return out


def _ids(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def lcs_length(a, b) -> int:
    return int(_lcs(_ids(a), _ids(b)))


def levenshtein(a, b) -> int:
    b = _ids(b)
    buf = np.empty(len(b) + 1, dtype=np.int64)
    return int(_edit_distance(_ids(a), b, buf, np.empty_like(buf)))


def ter_shift_search(hyp, ref, max_shifts: int = 50, max_phrase: int = MAX_PHRASE) -> tuple[int, int]:
    shifts, dist = _ter_shift_search(_ids(hyp), _ids(ref), max_shifts, max_phrase)
    return int(shifts), int(dist)


def segment_type_counts(ids, segment_size: int) -> np.ndarray:
    return _segment_type_counts(_ids(ids), segment_size)


def bootstrap_spearman(x, y, idx) -> np.ndarray:
    return _bootstrap_spearman(np.ascontiguousarray(x, dtype=np.float64),
                               np.ascontiguousarray(y, dtype=np.float64),
                               np.ascontiguousarray(idx, dtype=np.int64))
