"""Dialogue-act meaning representations and slot realisation checks.

Two serialisations are accepted, and may be mixed::

    inform(name = the Wrestlers, price range = cheap)
    inform(name[Blue Spice], food[French])

A bare bracket slot list (``name[Blue Spice], food[French]``, the form used
by common restaurant-domain CSV releases) is read as an ``inform`` act.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from .errors import EmptyAttribute, MalformedSlot, MissingActType, UnbalancedDelimiters
from .textproc import TextUnit, Token, text_unit, tokenize, word_keys

log = logging.getLogger(__name__)

IMPLICIT_ACT = "inform"


@dataclass(frozen=True)
class MeaningRepresentation:
    act_type: str
    slots: tuple[tuple[str, str], ...] = ()

    @property
    def attributes(self) -> list[str]:
        return [a for a, _ in self.slots]

    @property
    def values(self) -> list[str]:
        return [v for _, v in self.slots]

    @property
    def duplicate_attributes(self) -> list[str]:
        counts = Counter(a.casefold() for a in self.attributes)
        return sorted(a for a, c in counts.items() if c > 1)

    def to_string(self) -> str:
        """Serialise with ``attr = value`` pairs."""
        body = ", ".join(f"{a} = {v}" for a, v in self.slots)
        return f"{self.act_type}({body})"

    def __str__(self) -> str:
        return self.to_string()


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _split_pairs(text: str, start: int, end: int) -> list[tuple[int, int]]:
    """Comma-separated spans of ``text[start:end]`` at bracket depth 0."""
    spans = []
    depth = 0
    opened: list[int] = []
    piece = start
    for i in range(start, end):
        ch = text[i]
        if ch in "[(":
            depth += 1
            opened.append(i)
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise UnbalancedDelimiters(f"unexpected {ch!r}", _byte_offset(text, i))
            opened.pop()
        elif ch == "," and depth == 0:
            spans.append((piece, i))
            piece = i + 1
    if depth:
        raise UnbalancedDelimiters("unclosed delimiter", _byte_offset(text, opened[-1]))
    spans.append((piece, end))
    return spans


def _parse_pair(text: str, start: int, end: int) -> tuple[str, str]:
    piece = text[start:end]
    eq = piece.find("=")
    br = piece.find("[")
    if eq >= 0 and (br < 0 or eq < br):
        attr, value = piece[:eq], piece[eq + 1:]
    elif br >= 0:
        tail = piece.rstrip()
        if not tail.endswith("]"):
            raise UnbalancedDelimiters("slot value not closed by ']'", _byte_offset(text, start + br))
        attr, value = piece[:br], tail[br + 1:-1]
    else:
        raise MalformedSlot(f"expected 'attr = value' or 'attr[value]', got {piece.strip()!r}",
                            _byte_offset(text, start))
    if not attr.strip():
        raise EmptyAttribute("empty attribute name", _byte_offset(text, start))
    return attr.strip(), value.strip()


def parse_mr(text: str) -> MeaningRepresentation:
    """Parse ``act(attr = value, attr[value], ...)``.

    Errors carry the UTF-8 byte offset where parsing failed.
    """
    if not text.strip():
        raise MissingActType("empty meaning representation", 0)
    open_i = text.find("(")
    if open_i < 0:
        if ")" in text:
            raise UnbalancedDelimiters("')' without '('", _byte_offset(text, text.index(")")))
        if "[" not in text:
            raise UnbalancedDelimiters("expected '(' after act type", _byte_offset(text, len(text)))
        act, body_start, body_end = IMPLICIT_ACT, 0, len(text)
    else:
        act = text[:open_i].strip()
        if not act:
            raise MissingActType("missing act type before '('", _byte_offset(text, open_i))
        if any(c in act for c in "()[]"):
            raise MissingActType(f"invalid act type {act!r}", 0)
        stripped = text.rstrip()
        if not stripped.endswith(")"):
            raise UnbalancedDelimiters("act not closed by ')'", _byte_offset(text, len(stripped)))
        body_start, body_end = open_i + 1, len(stripped) - 1

    if not text[body_start:body_end].strip():
        return MeaningRepresentation(act, ())
    slots = []
    for s, e in _split_pairs(text, body_start, body_end):
        if not text[s:e].strip():
            raise EmptyAttribute("empty slot", _byte_offset(text, s))
        slots.append(_parse_pair(text, s, e))
    mr = MeaningRepresentation(act, tuple(slots))
    if mr.duplicate_attributes:
        log.warning("duplicate attributes in MR %r: %s", text, ", ".join(mr.duplicate_attributes))
    return mr


@lru_cache(maxsize=65536)
def _pattern(surface: str) -> tuple[str, ...]:
    return tuple(word_keys(tokenize(surface)))


@dataclass(frozen=True)
class SlotLexicon:
    """attribute -> value -> surface realisations. Keys match case-insensitively."""

    realizations: Mapping[str, Mapping[str, tuple[str, ...]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        table: dict[str, dict[str, tuple[str, ...]]] = {}
        for attr, values in self.realizations.items():
            inner = table.setdefault(attr.strip().casefold(), {})
            for value, surfaces in values.items():
                merged = list(inner.get(value.strip().casefold(), ()))
                for s in [value, *surfaces]:
                    if s not in merged:
                        merged.append(s)
                inner[value.strip().casefold()] = tuple(merged)
        object.__setattr__(self, "realizations", table)

    @classmethod
    def identity(cls) -> "SlotLexicon":
        return cls({})

    @classmethod
    def load(cls, path: str | Path | None) -> "SlotLexicon":
        """JSON ``{attribute: {value: [realisation, ...]}}``; ``None`` or a missing file gives the identity lexicon."""
        from .resources import resolve

        if path is None:
            return cls.identity()
        p = resolve(path)
        if not p.exists():
            log.warning("lexicon %s not found, using identity lexicon", p)
            return cls.identity()
        data = json.loads(p.read_text(encoding="utf-8"))
        return cls({a: {v: tuple(r) for v, r in vals.items()} for a, vals in data.items()})

    def surfaces(self, attribute: str, value: str) -> tuple[str, ...]:
        known = self.realizations.get(attribute.strip().casefold(), {})
        return known.get(value.strip().casefold(), (value,))

    def patterns(self, attribute: str, value: str) -> list[tuple[str, ...]]:
        return [p for p in (_pattern(s) for s in self.surfaces(attribute, value)) if p]

    def inventory(self, attribute: str) -> tuple[str, ...]:
        return tuple(self.realizations.get(attribute.strip().casefold(), {}))

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(self.realizations)


def contains_run(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    """True if ``needle`` occurs as a contiguous run of ``haystack``."""
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - n + 1):
        if haystack[i] == first and tuple(haystack[i:i + n]) == tuple(needle):
            return True
    return False


def _keys(utterance: TextUnit | str | Sequence[Token]) -> list[str]:
    if isinstance(utterance, str):
        utterance = text_unit(utterance)
    if isinstance(utterance, TextUnit):
        return word_keys(utterance.tokens)
    return word_keys(utterance)


def slot_realized(attribute: str, value: str, utterance: TextUnit | str,
                  lexicon: SlotLexicon | None = None) -> bool:
    """Whether any realisation of (attribute, value) appears as whole tokens in ``utterance``."""
    lexicon = lexicon or SlotLexicon.identity()
    keys = _keys(utterance)
    return any(contains_run(keys, p) for p in lexicon.patterns(attribute, value))


def realized_slots(mr: MeaningRepresentation, utterance: TextUnit | str,
                   lexicon: SlotLexicon | None = None) -> list[bool]:
    lexicon = lexicon or SlotLexicon.identity()
    keys = _keys(utterance)
    return [any(contains_run(keys, p) for p in lexicon.patterns(a, v)) for a, v in mr.slots]


def coverage(mr: MeaningRepresentation, utterance: TextUnit | str,
             lexicon: SlotLexicon | None = None) -> float:
    """Fraction of MR slots realised in the utterance; 1.0 for an MR without slots."""
    if not mr.slots:
        return 1.0
    flags = realized_slots(mr, utterance, lexicon)
    return sum(flags) / len(flags)
