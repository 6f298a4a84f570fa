"""Command-line entry point: ``nlgkit {score,correlate,corpus-stats,validate,export}``.

Exit codes: 0 success, 1 validation pass rate below the configured floor,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .config import ConfigError, RunConfig
from .corpusqual import DEFAULT_RULES, CorpusAccumulator, CorpusConfig
from .dataset import EvalRecord, dump_jsonl, load_dataset
from .errors import DatasetError, MRParseError, NlgkitError
from .gbm import READABILITY_FORMULA, exemption_words, gbm_profile
from .mr import SlotLexicon, parse_mr
from .report import dumps, format_table
from .resources import load_wordset
from .stats import ScoredItem, correlate
from .textproc import load_abbreviations, text_unit
from .validate import ValidationConfig, validate_batch
from .wbm import VARIANTS, EmbeddingFile, LexicalOverlap, bleu, rouge_l, rouge_n, semantic_similarity, ter

log = logging.getLogger("nlgkit")

GBM_FIELDS = ("readability", "chars_per_utterance", "chars_per_word",
              "syllables_per_sentence", "syllables_per_word", "misspellings")


class InputError(Exception):
    """Bad input reported with exit code 2."""


@dataclass
class Resources:
    dictionary: frozenset[str]
    stopwords: frozenset[str]
    basic_words: frozenset[str]
    abbreviations: frozenset[str]
    lexicon: SlotLexicon
    provider: Any

    @classmethod
    def from_config(cls, cfg: RunConfig) -> "Resources":
        stopwords = load_wordset(cfg["stopwords"])
        if cfg["semsim.provider"] == "embedding":
            provider = EmbeddingFile(cfg["embeddings"], stopwords)
        else:
            provider = LexicalOverlap(stopwords)
        return cls(
            dictionary=load_wordset(cfg["dictionary"]),
            stopwords=stopwords,
            basic_words=load_wordset(cfg["basic_words"], cfg["ls.top_k"]),
            abbreviations=load_abbreviations(cfg["abbreviations"]),
            lexicon=SlotLexicon.load(cfg["lexicon"] or None),
            provider=provider,
        )


@contextmanager
def _executor(jobs: int):
    if jobs <= 1:
        yield None
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            yield pool


def _map(executor, fn, items):
    return list(executor.map(fn, items)) if executor is not None else [fn(x) for x in items]


def _parse_record_mr(record: EvalRecord):
    if record.mr is None or not record.mr.strip():
        return None
    try:
        return parse_mr(record.mr)
    except MRParseError as exc:
        raise InputError(f"record {record.id}: bad MR: {exc}") from None


# ---------------------------------------------------------------------------
# score


def metric_variants(cfg: RunConfig) -> dict[str, str]:
    out = {}
    for m in cfg.metrics:
        if m == "bleu":
            out["bleu"] = f"{VARIANTS['bleu']}; max_n={cfg['bleu.max_n']}; smoothing={cfg['bleu.smoothing']}"
        elif m == "ter":
            out["ter"] = VARIANTS["ter"] if cfg["ter.shifts"] else "Levenshtein edits / mean reference length"
        elif m.startswith("rouge_") and m != "rouge_l":
            out[m] = f"{VARIANTS['rouge_n']}; n={m.split('_')[1]}"
        elif m == "rouge_l":
            out[m] = VARIANTS["rouge_l"]
        elif m == "semsim":
            out[m] = (VARIANTS["semsim"] if cfg["semsim.provider"] == "lexical"
                      else "cosine of mean word vectors rescaled to [0, 1]") + "; max over references"
        elif m == "gbm":
            for f in GBM_FIELDS:
                out[f"gbm.{f}"] = READABILITY_FORMULA if f == "readability" else "candidate only"
    return out


def score_output(candidate: str, references: Sequence[str], mr_values: Sequence[str],
                 cfg: RunConfig, res: Resources) -> tuple[dict[str, float | None], dict[str, list[str]]]:
    cand = text_unit(candidate, res.abbreviations)
    refs = [text_unit(r, res.abbreviations) for r in references]
    ct = cand.tokens
    rts = [r.tokens for r in refs]
    scores: dict[str, float | None] = {}
    flags: dict[str, list[str]] = {}

    def put(name, score):
        scores[name] = score.value
        if score.flags:
            flags[name] = list(score.flags)

    for m in cfg.metrics:
        if m == "bleu":
            put(m, bleu(ct, rts, cfg["bleu.max_n"], cfg["bleu.smoothing"]))
        elif m == "ter":
            put(m, ter(ct, rts, shifts=cfg["ter.shifts"], max_shifts=cfg["ter.max_shifts"]))
        elif m == "rouge_l":
            put(m, rouge_l(ct, rts))
        elif m.startswith("rouge_"):
            put(m, rouge_n(ct, rts, int(m.split("_")[1])))
        elif m == "semsim":
            best = max((semantic_similarity(cand, r, res.provider) for r in refs), key=lambda s: s.value)
            put(m, best)
        elif m == "gbm":
            prof = gbm_profile(cand, res.dictionary, exemption_words(mr_values))
            for f in GBM_FIELDS:
                v = getattr(prof, f)
                scores[f"gbm.{f}"] = float(v) if not (f == "readability" and not prof.readability_defined) else None
            if prof.flags:
                flags["gbm.readability"] = list(prof.flags)
    return scores, flags


def run_score(records: Sequence[EvalRecord], cfg: RunConfig, res: Resources) -> dict:
    jobs = []
    for r in records:
        if not r.references:
            raise InputError(f"record {r.id}: no references to score against")
        if not r.outputs:
            raise InputError(f"record {r.id}: no system outputs to score")
        if not any(ref.strip() for ref in r.references) and "ter" in cfg.metrics:
            raise InputError(f"record {r.id}: all references are empty")
        mr = _parse_record_mr(r)
        values = mr.values if mr else []
        for system in sorted(r.outputs):
            jobs.append((r, system, values))

    def one(job):
        r, system, values = job
        scores, flags = score_output(r.outputs[system], r.references, values, cfg, res)
        item = {"id": r.id, "system": system, "scores": scores}
        if flags:
            item["flags"] = flags
        return item

    with _executor(cfg["jobs"]) as ex:
        items = _map(ex, one, jobs)

    variants = metric_variants(cfg)
    aggregates: dict[str, dict[str, float | None]] = {}
    for system in sorted({it["system"] for it in items}):
        rows = [it["scores"] for it in items if it["system"] == system]
        agg = {}
        for name in variants:
            vals = [row[name] for row in rows if row.get(name) is not None]
            agg[name] = math.fsum(vals) / len(vals) if vals else None
        aggregates[system] = agg
    return {
        "schema": "nlgkit.metric_report.v1",
        "config": cfg.embedded(),
        "metrics": variants,
        "n_metrics": len(variants),
        "n_items": len(items),
        "items": items,
        "aggregates": aggregates,
    }


def score_table(report: dict) -> str:
    names = list(report["metrics"])
    rows = [[system] + [agg.get(n) for n in names] for system, agg in report["aggregates"].items()]
    return format_table(["system"] + names, rows)


# ---------------------------------------------------------------------------
# correlate


def scored_items(records: Sequence[EvalRecord], report: dict, cfg: RunConfig) -> list[ScoredItem]:
    by_id = {r.id: r for r in records}
    lo, hi = cfg["ratings.scale_min"], cfg["ratings.scale_max"]
    items = []
    for it in report["items"]:
        rec = by_id.get(str(it["id"]))
        if rec is None:
            continue
        ratings = rec.ratings.get(it["system"], {})
        for aspect, v in ratings.items():
            if not lo <= v <= hi:
                raise InputError(f"record {rec.id}/{it['system']}: {aspect} rating {v} outside [{lo}, {hi}]")
        items.append(ScoredItem(rec.id, it["system"], it["scores"], ratings))
    return items


def run_correlate(records: Sequence[EvalRecord], report: dict, cfg: RunConfig) -> dict:
    if not any(r.ratings for r in records):
        raise InputError("dataset has no human ratings")
    items = scored_items(records, report, cfg)
    rated = sum(1 for it in items if it.ratings)
    if rated < 2:
        raise InputError("need ratings for at least 2 scored items")
    with _executor(cfg["jobs"]) as ex:
        rows = correlate(items, metrics=list(report["metrics"]), n_resamples=cfg["bootstrap.n_resamples"],
                         seed=cfg["seed"], executor=ex)
    return {
        "schema": "nlgkit.correlation_report.v1",
        "config": cfg.embedded(),
        "method": "Spearman rho over (item, system) pairs; percentile bootstrap CI; "
                  "ranking accuracy over per-system means (metric ties count 0.5)",
        "n_items": len(items),
        "rows": [r.as_dict() for r in rows],
    }


def correlate_table(report: dict) -> str:
    rows = [[r["metric"], r["aspect"], r["rho"], r["ci_low"], r["ci_high"], r["n"], r["ranking_accuracy"]]
            for r in report["rows"]]
    return format_table(["metric", "aspect", "rho", "ci_low", "ci_high", "n", "rank_acc"], rows)


# ---------------------------------------------------------------------------
# corpus-stats


def corpus_entries(records: Sequence[EvalRecord]) -> list[tuple[Any, str]]:
    entries = []
    for r in records:
        mr = _parse_record_mr(r)
        for ref in r.references:
            entries.append((mr, ref))
    return entries


def dataset_stats(records: Sequence[EvalRecord], cfg: RunConfig, res: Resources):
    entries = corpus_entries(records)
    if not entries:
        raise InputError("dataset has no reference texts")
    ccfg = CorpusConfig(res.basic_words, res.stopwords, res.lexicon, cfg["msttr.segment_size"], DEFAULT_RULES)
    jobs = cfg["jobs"]
    size = -(-len(entries) // jobs)
    chunks = [entries[i:i + size] for i in range(0, len(entries), size)]

    def accumulate(chunk):
        acc = CorpusAccumulator(ccfg)
        for mr, text in chunk:
            acc.add(mr, text_unit(text, res.abbreviations))
        return acc

    with _executor(jobs) as ex:
        parts = _map(ex, accumulate, chunks)
    total = parts[0]
    for p in parts[1:]:
        total = total.merge(p)
    return total.finalize()


def run_corpus_stats(paths: Sequence[str], cfg: RunConfig, res: Resources, fmt: str) -> dict:
    rows = []
    for p in paths:
        stats = dataset_stats(load_dataset(p, fmt), cfg, res)
        rows.append({"dataset": p, "stats": stats.as_dict()})
    return {
        "schema": "nlgkit.corpus_stats.v1",
        "config": cfg.embedded(),
        "dlevel_rules": DEFAULT_RULES.version,
        "notes": {
            "ls": f"lexical word tokens outside the top {cfg['ls.top_k']} basic words",
            "msttr": f"segment size {cfg['msttr.segment_size']}; words concatenated in input file order",
        },
        "datasets": rows,
    }


def corpus_table(report: dict) -> str:
    def pct(v):
        return None if v is None else f"{100 * v:.0f}%"

    rows = []
    for d in report["datasets"]:
        s = d["stats"]
        rows.append([d["dataset"], s["ls"], s["msttr"], pct(s["frac_level01"]), pct(s["frac_level67"]),
                     pct(s["content_selection_rate"])])
    return format_table(["Dataset", "LS", "MSTTR", "Level 0-1", "Level 6-7", "Content sel."], rows)


# ---------------------------------------------------------------------------
# validate


def validation_config(cfg: RunConfig) -> ValidationConfig:
    return ValidationConfig(
        min_words=cfg["validate.min_words"],
        max_misspellings=cfg["validate.max_misspellings"],
        coverage_threshold=cfg["validate.coverage_threshold"],
        allow_skipped_slots=cfg["validate.allow_skipped_slots"],
        semsim_threshold=cfg["validate.semsim_threshold"],
        forbid_foreign_values=cfg["validate.forbid_foreign_values"],
    )


def run_validate(records: Sequence[EvalRecord], cfg: RunConfig, res: Resources) -> dict:
    pairs, ids = [], []
    for r in records:
        mr = _parse_record_mr(r)
        if mr is None:
            raise InputError(f"record {r.id}: validation needs an MR")
        for k, ref in enumerate(r.references):
            pairs.append((mr, ref))
            ids.append(r.id if len(r.references) == 1 else f"{r.id}#{k}")
    if not pairs:
        raise InputError("no (MR, utterance) pairs to validate")
    vcfg = validation_config(cfg)
    with _executor(cfg["jobs"]) as ex:
        batch = validate_batch(pairs, vcfg, res.lexicon, res.dictionary, res.provider, executor=ex)
    body = batch.as_dict()
    for rid, outcome in zip(ids, body["outcomes"]):
        outcome["id"] = rid
    body.update({
        "schema": "nlgkit.validation_report.v1",
        "config": cfg.embedded(),
        "min_pass_rate": cfg["validate.min_pass_rate"],
        "floor_met": batch.pass_rate >= cfg["validate.min_pass_rate"],
    })
    return body


def validate_table(report: dict) -> str:
    rows = [[o["id"], "pass" if o["passed"] else "FAIL"]
            + ["ok" if g["passed"] else "fail" for g in o["gates"]] for o in report["outcomes"]]
    table = format_table(["id", "result", "well_formed", "adequacy", "hallucination"], rows)
    return table + f"pass rate {report['pass_rate']:.4f} (floor {report['min_pass_rate']:g})\n"


# ---------------------------------------------------------------------------
# entry point


def _parse_set(values: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in values or ():
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat 'key = value' config file")
    common.add_argument("--format", choices=("json", "table"), help="report format (default json)")
    common.add_argument("--seed", type=int, help="bootstrap seed")
    common.add_argument("--jobs", type=int, help="worker threads; output does not depend on it")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    common.add_argument("--input-format", choices=("auto", "jsonl", "csv"), default="auto")

    parser = argparse.ArgumentParser(prog="nlgkit", description="NLG evaluation metrics and corpus quality tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[common], help="score system outputs against references")
    p.add_argument("dataset")
    p = sub.add_parser("correlate", parents=[common], help="correlate metric scores with human ratings")
    p.add_argument("dataset")
    p.add_argument("--report", help="metric report from 'score' (computed on the fly if omitted)")
    p = sub.add_parser("corpus-stats", parents=[common], help="lexical richness / D-level / content selection")
    p.add_argument("datasets", nargs="+")
    p = sub.add_parser("validate", parents=[common], help="run quality gates over (MR, utterance) pairs")
    p.add_argument("dataset")
    p = sub.add_parser("export", parents=[common], help="re-emit a dataset as JSONL")
    p.add_argument("dataset")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = _parse_set(args.set)
        for key in ("format", "seed", "jobs"):
            if getattr(args, key) is not None:
                overrides[key] = str(getattr(args, key))
        cfg = RunConfig.load(args.config, overrides)

        if args.command == "export":
            _emit(dump_jsonl(load_dataset(args.dataset, args.input_format)), args.out)
            return 0

        res = Resources.from_config(cfg)
        table = cfg["format"] == "table"
        if args.command == "score":
            report = run_score(load_dataset(args.dataset, args.input_format), cfg, res)
            _emit(score_table(report) if table else dumps(report), args.out)
        elif args.command == "correlate":
            records = load_dataset(args.dataset, args.input_format)
            if args.report:
                metric_report = json.loads(Path(args.report).read_text(encoding="utf-8"))
            else:
                # go through the serialised form so both paths see the same 6-decimal scores
                metric_report = json.loads(dumps(run_score(records, cfg, res)))
            report = run_correlate(records, metric_report, cfg)
            _emit(correlate_table(report) if table else dumps(report), args.out)
        elif args.command == "corpus-stats":
            report = run_corpus_stats(args.datasets, cfg, res, args.input_format)
            _emit(corpus_table(report) if table else dumps(report), args.out)
        elif args.command == "validate":
            report = run_validate(load_dataset(args.dataset, args.input_format), cfg, res)
            _emit(validate_table(report) if table else dumps(report), args.out)
            return 0 if report["floor_met"] else 1
        return 0
    except (InputError, ConfigError, DatasetError, NlgkitError, OSError, json.JSONDecodeError) as exc:
        print(f"nlgkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
