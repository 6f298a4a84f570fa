"""Reference-based word metrics: BLEU, TER, ROUGE-N, ROUGE-L and semantic similarity.

Inputs are token sequences (``Token`` objects or plain strings); comparison is
on lowercased forms. Every scorer returns a :class:`WbmScore`.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from . import _kernels
from .errors import EmptyReferences
from .resources import default_stopwords, resolve
from .textproc import TextUnit, Token, text_unit, word_keys

TokenSeq = Sequence[Token | str]

VARIANTS = {
    "bleu": "sentence BLEU, clipped n-gram precision, closest-reference brevity penalty (ties -> shorter)",
    "ter": "edits / mean reference length; greedy phrase shifts (max phrase 10, max 50 shifts)",
    "rouge_n": "clipped n-gram recall, max over references",
    "rouge_l": "LCS F1 (beta = 1), max over references",
    "semsim": "Dice over stopword-filtered lowercase word types",
}


@dataclass(frozen=True)
class WbmScore:
    metric: str
    value: float
    detail: dict[str, float] = field(default_factory=dict)
    flags: tuple[str, ...] = ()


def _check_refs(references: Sequence[TokenSeq]) -> list[list[str]]:
    if not references:
        raise EmptyReferences("at least one reference is required")
    return [word_keys(r) for r in references]


def _ngrams(keys: Sequence[str], n: int) -> Counter:
    return Counter(tuple(keys[i:i + n]) for i in range(len(keys) - n + 1))


def _intern(*seqs: Sequence[str]) -> list[np.ndarray]:
    vocab: dict[str, int] = {}
    return [np.array([vocab.setdefault(k, len(vocab)) for k in s], dtype=np.int64) for s in seqs]


def bleu(candidate: TokenSeq, references: Sequence[TokenSeq], max_n: int = 4,
         smoothing: str = "none") -> WbmScore:
    """Sentence-level BLEU.

    ``smoothing="add-one"`` adds one to the matched and total counts of every
    order above 1. Orders longer than the candidate have no n-grams and are
    left out of the geometric mean (flagged ``short_candidate``).
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if smoothing not in ("none", "add-one"):
        raise ValueError(f"unknown smoothing {smoothing!r}")
    refs = _check_refs(references)
    cand = word_keys(candidate)
    c = len(cand)
    if c == 0:
        return WbmScore("bleu", 0.0, {"bp": 0.0}, ("empty_candidate",))

    r = min((abs(len(ref) - c), len(ref)) for ref in refs)[1]
    bp = 1.0 if c >= r else math.exp(1.0 - r / c)
    detail = {"bp": bp, "ref_len": float(r), "cand_len": float(c)}
    flags = []
    orders = min(max_n, c)
    if orders < max_n:
        flags.append("short_candidate")
    # exact product of precisions: equal scores stay bitwise equal whatever the order
    product = Fraction(1)
    for n in range(1, orders + 1):
        cand_counts = _ngrams(cand, n)
        max_ref: Counter = Counter()
        for ref in refs:
            for gram, k in _ngrams(ref, n).items():
                if k > max_ref[gram]:
                    max_ref[gram] = k
        matched = sum(min(k, max_ref[g]) for g, k in cand_counts.items())
        total = c - n + 1
        if smoothing == "add-one" and n > 1:
            matched, total = matched + 1, total + 1
        detail[f"p{n}"] = matched / total
        product *= Fraction(matched, total)
    if product == 0:
        return WbmScore("bleu", 0.0, detail, tuple(flags))
    value = bp * float(product) ** (1.0 / orders)
    return WbmScore("bleu", min(1.0, value), detail, tuple(flags))


def ter(candidate: TokenSeq, references: Sequence[TokenSeq], shifts: bool = True,
        max_shifts: int = 50) -> WbmScore:
    """Translation edit rate against the closest reference.

    Numerator is the fewest edits (insert, delete, substitute, plus greedy
    phrase shifts when ``shifts``) over all references; denominator is the
    mean reference length.
    """
    refs = _check_refs(references)
    avg_len = sum(len(r) for r in refs) / len(refs)
    if avg_len == 0:
        raise EmptyReferences("TER needs at least one non-empty reference")
    cand = word_keys(candidate)
    best = None
    for ref in refs:
        h, rf = _intern(cand, ref)
        if shifts and len(h) > 1:
            n_shift, dist = _kernels.ter_shift_search(h, rf, max_shifts)
        else:
            n_shift, dist = 0, _kernels.levenshtein(h, rf)
        key = (n_shift + dist, n_shift)
        if best is None or key < best:
            best = key
    edits, n_shift = best
    detail = {"edits": float(edits), "shifts": float(n_shift), "ref_len": avg_len}
    return WbmScore("ter", edits / avg_len, detail)


def rouge_n(candidate: TokenSeq, references: Sequence[TokenSeq], n: int = 2) -> WbmScore:
    """Best clipped n-gram recall over the references."""
    if n < 1:
        raise ValueError("n must be >= 1")
    refs = _check_refs(references)
    cand = _ngrams(word_keys(candidate), n)
    best = (0.0, 0, 0)
    for ref in refs:
        ref_counts = _ngrams(ref, n)
        total = sum(ref_counts.values())
        if total == 0:
            continue  # reference shorter than n: recall 0
        matched = sum(min(k, cand[g]) for g, k in ref_counts.items())
        if best[2] == 0 or matched / total > best[0]:
            best = (matched / total, matched, total)
    recall, matched, total = best
    return WbmScore(f"rouge_{n}", recall, {"matched": float(matched), "ref_ngrams": float(total)})


def lcs_length(a: TokenSeq, b: TokenSeq) -> int:
    x, y = _intern(word_keys(a), word_keys(b))
    return _kernels.lcs_length(x, y)


def rouge_l(candidate: TokenSeq, references: Sequence[TokenSeq]) -> WbmScore:
    """Best LCS-based F1 over the references."""
    refs = _check_refs(references)
    cand = word_keys(candidate)
    best = (0.0, 0.0, 0.0)
    for ref in refs:
        if not cand or not ref:
            continue
        x, y = _intern(cand, ref)
        lcs = _kernels.lcs_length(x, y)
        r, p = lcs / len(ref), lcs / len(cand)
        f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        if f1 > best[0]:
            best = (f1, r, p)
    f1, r, p = best
    return WbmScore("rouge_l", min(1.0, f1), {"recall": r, "precision": p})


class SimilarityProvider(Protocol):
    name: str

    def similarity(self, a: TextUnit, b: TextUnit) -> tuple[float, tuple[str, ...]]: ...


def _as_unit(x: TextUnit | str) -> TextUnit:
    return x if isinstance(x, TextUnit) else text_unit(x)


class LexicalOverlap:
    """Dice coefficient over content-word types."""

    name = "lexical-overlap"

    def __init__(self, stopwords: frozenset[str] | None = None):
        self.stopwords = default_stopwords() if stopwords is None else stopwords

    def content_types(self, text: TextUnit) -> set[str]:
        return {t.lower for t in text.words if t.lower not in self.stopwords}

    def similarity(self, a, b):
        ta, tb = self.content_types(a), self.content_types(b)
        if not ta and not tb:
            return 0.0, ("empty_after_filtering",)
        return 2 * len(ta & tb) / (len(ta) + len(tb)), ()


class EmbeddingFile:
    """Cosine of mean word vectors from a ``word v1 ... vd`` text file, mapped to [0, 1]."""

    name = "embedding-file"

    def __init__(self, path: str | Path, stopwords: frozenset[str] | None = None):
        self.path = resolve(path)
        self.stopwords = default_stopwords() if stopwords is None else stopwords
        self.vectors = load_embeddings(self.path)

    def _mean(self, text: TextUnit) -> np.ndarray | None:
        rows = [self.vectors[t.lower] for t in text.words
                if t.lower not in self.stopwords and t.lower in self.vectors]
        return np.mean(rows, axis=0) if rows else None

    def similarity(self, a, b):
        va, vb = self._mean(a), self._mean(b)
        if va is None or vb is None:
            return 0.0, ("no_vectors",)
        na, nb = np.linalg.norm(va), np.linalg.norm(vb)
        if na == 0 or nb == 0:
            return 0.0, ("zero_vector",)
        cos = float(np.clip(va @ vb / (na * nb), -1.0, 1.0))
        return (cos + 1.0) / 2.0, ()


def load_embeddings(path: str | Path) -> dict[str, np.ndarray]:
    """Read a whitespace-separated vector file; a leading ``count dim`` header is skipped."""
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            parts = line.split()
            if not parts:
                continue
            if lineno == 0 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            vectors[parts[0].casefold()] = np.array([float(v) for v in parts[1:]])
    dims = {v.shape[0] for v in vectors.values()}
    if len(dims) > 1:
        raise ValueError(f"{path}: inconsistent vector dimensions {sorted(dims)}")
    return vectors


def semantic_similarity(a: TextUnit | str, b: TextUnit | str,
                        provider: SimilarityProvider | None = None) -> WbmScore:
    provider = provider or LexicalOverlap()
    ua, ub = _as_unit(a), _as_unit(b)
    # order the pair so the float arithmetic is identical for (a, b) and (b, a)
    if ua.raw > ub.raw:
        ua, ub = ub, ua
    value, flags = provider.similarity(ua, ub)
    return WbmScore("semsim", min(1.0, max(0.0, value)), {}, tuple(flags))
