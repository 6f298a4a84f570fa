"""Metric reliability: rank correlation with human ratings and pairwise ranking accuracy."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import _kernels
from ._kernels._numpy import average_ranks, rank_pearson_rows
from .errors import LengthMismatch, TooFewSamples, TooFewSystems

DEFAULT_ASPECTS = ("informativeness", "naturalness", "quality", "phrasing")


@dataclass(frozen=True)
class RatingScale:
    low: float = 1.0
    high: float = 6.0

    def check(self, value: float) -> float:
        if not self.low <= value <= self.high:
            raise ValueError(f"rating {value} outside scale [{self.low}, {self.high}]")
        return value


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho as the Pearson correlation of average ranks.

    Returns NaN when either input is constant.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} != {len(y)}")
    if len(x) < 2:
        raise TooFewSamples("spearman needs at least 2 paired samples")
    rx = average_ranks(np.asarray(x, dtype=np.float64))
    ry = average_ranks(np.asarray(y, dtype=np.float64))
    return float(rank_pearson_rows(rx, ry)[0])


def ranking_accuracy(metric_scores: Mapping[str, float], human_scores: Mapping[str, float]) -> float:
    """Agreement of metric and human orderings over system pairs.

    Only pairs the humans distinguish count; a metric tie on such a pair
    scores 0.5. NaN when humans tie on every pair.
    """
    systems = sorted(set(metric_scores) & set(human_scores))
    if len(systems) < 2:
        raise TooFewSystems("ranking accuracy needs at least 2 systems scored by both")
    total = 0
    agree = 0.0
    for a, b in combinations(systems, 2):
        dh = human_scores[a] - human_scores[b]
        if dh == 0:
            continue
        total += 1
        dm = metric_scores[a] - metric_scores[b]
        if dm == 0:
            agree += 0.5
        elif (dm > 0) == (dh > 0):
            agree += 1.0
    return agree / total if total else math.nan


class Interval(NamedTuple):
    low: float
    high: float
    flags: tuple[str, ...] = ()


def bootstrap_ci(x: Sequence[float], y: Sequence[float], n_resamples: int = 1000,
                 seed: int = 0, level: float = 0.95) -> Interval:
    """Percentile bootstrap interval for Spearman's rho.

    All resample indices come from one generator seeded with ``seed``, so the
    interval is reproducible bit for bit. Resamples with an undefined rho
    (constant draw) are dropped.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} != {len(y)}")
    n = len(x)
    if n < 2:
        raise TooFewSamples("bootstrap needs at least 2 paired samples")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(n_resamples, n))
    rhos = _kernels.bootstrap_spearman(np.asarray(x, float), np.asarray(y, float), idx)
    finite = rhos[np.isfinite(rhos)]
    flags = []
    if n < 3:
        flags.append("degenerate")
    if finite.size < n_resamples:
        flags.append(f"dropped_{n_resamples - finite.size}_undefined")
    if finite.size == 0:
        return Interval(math.nan, math.nan, tuple(flags))
    tail = (1.0 - level) / 2.0 * 100.0
    low, high = np.percentile(finite, [tail, 100.0 - tail])
    return Interval(float(low), float(high), tuple(flags))


@dataclass(frozen=True)
class CorrelationRow:
    metric: str
    aspect: str
    rho: float | None
    n: int
    n_dropped: int
    ci_low: float | None
    ci_high: float | None
    ranking_accuracy: float | None
    n_systems: int
    flags: tuple[str, ...] = ()

    def sort_key(self):
        return (-(abs(self.rho) if self.rho is not None else -1.0), self.metric, self.aspect)

    def as_dict(self) -> dict:
        return {
            "metric": self.metric,
            "aspect": self.aspect,
            "rho": self.rho,
            "n": self.n,
            "n_dropped": self.n_dropped,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "ranking_accuracy": self.ranking_accuracy,
            "n_systems": self.n_systems,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class ScoredItem:
    """One (item, system) unit: metric values and human ratings for the same output."""

    item_id: str
    system: str
    metrics: Mapping[str, float | None]
    ratings: Mapping[str, float] = field(default_factory=dict)


def _nan_to_none(v: float) -> float | None:
    return None if v is None or not math.isfinite(v) else float(v)


def correlate_pair(items: Sequence[ScoredItem], metric: str, aspect: str,
                   n_resamples: int = 1000, seed: int = 0) -> CorrelationRow:
    xs, ys, systems = [], [], []
    dropped = 0
    for it in items:
        m = it.metrics.get(metric)
        r = it.ratings.get(aspect)
        if m is None or r is None or not math.isfinite(m):
            dropped += 1
            continue
        xs.append(float(m))
        ys.append(float(r))
        systems.append(it.system)
    flags: list[str] = []
    rho = ci_low = ci_high = acc = None
    if len(xs) >= 2:
        rho = _nan_to_none(spearman(xs, ys))
        if rho is None:
            flags.append("rho_undefined")
        else:
            ci = bootstrap_ci(xs, ys, n_resamples, seed)
            flags.extend(ci.flags)
            ci_low, ci_high = _nan_to_none(ci.low), _nan_to_none(ci.high)
            if ci_low is not None and not ci_low <= rho <= ci_high:
                # percentile intervals need not contain the point estimate
                ci_low, ci_high = min(ci_low, rho), max(ci_high, rho)
                flags.append("ci_widened")
    else:
        flags.append("too_few_samples")

    by_system: dict[str, list[tuple[float, float]]] = {}
    for s, x, y in zip(systems, xs, ys):
        by_system.setdefault(s, []).append((x, y))
    if len(by_system) >= 2:
        metric_means = {s: float(np.mean([p[0] for p in v])) for s, v in by_system.items()}
        human_means = {s: float(np.mean([p[1] for p in v])) for s, v in by_system.items()}
        acc = _nan_to_none(ranking_accuracy(metric_means, human_means))
        if acc is None:
            flags.append("ranking_undefined")
    else:
        flags.append("too_few_systems")
    return CorrelationRow(metric, aspect, rho, len(xs), dropped, ci_low, ci_high, acc,
                          len(by_system), tuple(flags))


def correlate(items: Sequence[ScoredItem], metrics: Sequence[str] | None = None,
              aspects: Sequence[str] | None = None, n_resamples: int = 1000, seed: int = 0,
              executor=None) -> list[CorrelationRow]:
    """Full metric x aspect table, sorted by |rho| descending (undefined rows last)."""
    if metrics is None:
        metrics = sorted({m for it in items for m in it.metrics})
    if aspects is None:
        aspects = sorted({a for it in items for a in it.ratings})
    jobs = [(m, a) for m in metrics for a in aspects]
    run = (lambda ma: correlate_pair(items, ma[0], ma[1], n_resamples, seed))
    rows = list(executor.map(run, jobs)) if executor is not None else [run(j) for j in jobs]
    return sorted(rows, key=CorrelationRow.sort_key)
