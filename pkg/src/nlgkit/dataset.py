"""Evaluation records and their JSONL / CSV file formats."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DatasetError, DuplicateId, Malformed

log = logging.getLogger(__name__)


@dataclass
class EvalRecord:
    id: str
    mr: str | None = None
    references: list[str] = field(default_factory=list)
    outputs: dict[str, str] = field(default_factory=dict)
    ratings: dict[str, dict[str, float]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"id": self.id, "mr": self.mr, "references": self.references,
             "outputs": self.outputs, "ratings": self.ratings},
            sort_keys=True, ensure_ascii=False,
        )


def detect_format(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    if suffix in (".csv", ".tsv"):
        return "csv"
    with open(path, "rb") as fh:
        head = fh.read(4096).lstrip(b"\xef\xbb\xbf \t\r\n")
    return "jsonl" if head.startswith(b"{") else "csv"


def _record_from_obj(obj: object, lineno: int) -> EvalRecord:
    if not isinstance(obj, dict):
        raise Malformed(lineno, "record is not a JSON object")
    rid = obj.get("id")
    rid = str(lineno) if rid in (None, "") else str(rid)
    mr = obj.get("mr")
    if mr is not None and not isinstance(mr, str):
        raise Malformed(lineno, "'mr' must be a string or null")
    if "references" not in obj:
        log.warning("line %d: record %s has no 'references'", lineno, rid)
    refs = obj.get("references") or []
    if isinstance(refs, str):
        refs = [refs]
    if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
        raise Malformed(lineno, "'references' must be a list of strings")
    outputs = obj.get("outputs") or {}
    if not isinstance(outputs, dict) or not all(isinstance(v, str) for v in outputs.values()):
        raise Malformed(lineno, "'outputs' must map system ids to strings")
    ratings_in = obj.get("ratings") or {}
    if not isinstance(ratings_in, dict):
        raise Malformed(lineno, "'ratings' must be an object")
    ratings: dict[str, dict[str, float]] = {}
    for system, aspects in ratings_in.items():
        if not isinstance(aspects, dict):
            raise Malformed(lineno, f"ratings for {system!r} must be an object")
        try:
            ratings[str(system)] = {str(a): float(v) for a, v in aspects.items()}
        except (TypeError, ValueError):
            raise Malformed(lineno, f"non-numeric rating for {system!r}") from None
    return EvalRecord(rid, mr, list(refs), {str(k): v for k, v in outputs.items()}, ratings)


def _read_jsonl(text: str) -> Iterable[EvalRecord]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise Malformed(lineno, f"invalid JSON: {exc.msg}") from None
        yield _record_from_obj(obj, lineno)


def _read_csv(text: str) -> Iterable[EvalRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        return
    if "mr" not in header:
        raise Malformed(1, "CSV header must contain an 'mr' column")
    mr_col = header.index("mr")
    ref_col = header.index("ref") if "ref" in header else None
    for row_no, row in enumerate(reader, start=1):
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise Malformed(reader.line_num, f"expected {len(header)} fields, got {len(row)}")
        refs = [row[ref_col]] if ref_col is not None else []
        yield EvalRecord(str(row_no), row[mr_col], refs)


def load_dataset(path: str | Path, fmt: str = "auto") -> list[EvalRecord]:
    """Load records from JSONL or ``mr,ref`` CSV; ``fmt="auto"`` checks the extension, then the first byte."""
    path = Path(path)
    try:
        if fmt == "auto":
            fmt = detect_format(path)
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise DatasetError(f"{path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise DatasetError(f"{path}: not UTF-8 ({exc.reason})") from exc
    if fmt == "jsonl":
        records = list(_read_jsonl(text))
    elif fmt == "csv":
        records = list(_read_csv(text))
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")
    seen: set[str] = set()
    for r in records:
        if r.id in seen:
            raise DuplicateId(f"{path}: duplicate record id {r.id!r}")
        seen.add(r.id)
    return records


def dump_jsonl(records: Iterable[EvalRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)
