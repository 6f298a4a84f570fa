"""Normalisation, tokenisation, sentence splitting and syllable counting.

Everything here is rule based and deterministic; no trained models.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .resources import load_wordset


class TokenKind(str, Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCT = "Punct"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind
    char_span: tuple[int, int]
    lower: str = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", self.surface.casefold())

    @property
    def is_word(self) -> bool:
        return self.kind is TokenKind.WORD


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    raw: str

    @property
    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]


@dataclass(frozen=True)
class TextUnit:
    raw: str
    sentences: tuple[Sentence, ...]

    @property
    def tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens]

    @property
    def words(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens if t.is_word]


_WS = re.compile(r"\s+")
_LETTER = r"[^\W\d_]"
_TOKEN = re.compile(
    rf"(?P<word>{_LETTER}+(?:['’\-]{_LETTER}+)*)"
    r"|(?P<number>\d+(?:[.,]\d+)*)"
    r"|(?P<punct>\S)"
)
_KINDS = {"word": TokenKind.WORD, "number": TokenKind.NUMBER, "punct": TokenKind.PUNCT}

DEFAULT_ABBREVIATIONS = frozenset({"mr", "mrs", "dr", "st", "etc", "e.g", "i.e", "vs"})


def normalize(text: str) -> str:
    """NFC-compose, collapse whitespace runs to one space and strip."""
    return _WS.sub(" ", unicodedata.normalize("NFC", text)).strip()


def tokenize(text: str, offset: int = 0) -> list[Token]:
    return [
        Token(m.group(), _KINDS[m.lastgroup], (m.start() + offset, m.end() + offset))
        for m in _TOKEN.finditer(text)
    ]


def load_abbreviations(path: str | Path) -> frozenset[str]:
    """One lowercase abbreviation per line, without the trailing dot."""
    return frozenset(w.rstrip(".") for w in load_wordset(path))


def _sentence_ends(text: str, abbreviations: Iterable[str]) -> list[int]:
    abbrevs = frozenset(abbreviations)
    ends = []
    n = len(text)
    for i, ch in enumerate(text):
        if ch not in ".!?":
            continue
        if i + 1 < n and text[i + 1] in ".!?":
            continue  # let "?!" and "..." end at their last mark
        at_end = i + 1 == n
        if not at_end and not (text[i + 1] == " " and i + 2 < n and text[i + 2].isupper()):
            continue
        if ch == "." and not at_end:
            j = i
            while j > 0 and not text[j - 1].isspace():
                j -= 1
            word = text[j:i].lstrip("\"'([{").casefold()
            if word in abbrevs:
                continue
        ends.append(i + 1)
    return ends


def split_sentences(text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> list[Sentence]:
    """Split at ``.``/``!``/``?`` followed by space + uppercase letter, or by end of text.

    A period closing a known abbreviation (``Dr.``) is not a boundary. Text
    without any terminator is a single sentence; empty text has none.
    """
    sentences = []
    start = 0
    for end in _sentence_ends(text, abbreviations) + [len(text)]:
        chunk = text[start:end]
        lead = len(chunk) - len(chunk.lstrip())
        raw = chunk.strip()
        if raw:
            sentences.append(Sentence(tuple(tokenize(raw, start + lead)), raw))
        start = end
    return sentences


def text_unit(text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> TextUnit:
    """Normalise ``text`` and segment it into sentences and tokens."""
    norm = normalize(text)
    return TextUnit(norm, tuple(split_sentences(norm, abbreviations)))


_VOWEL_GROUP = re.compile(r"[aeiouy]+")
_VOWELS = frozenset("aeiouy")


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate.

    Counts maximal runs of a/e/i/o/u/y, drops a final silent "e" that follows
    a consonant (but keeps consonant + "le", as in "table"), never below 1.
    """
    w = word.casefold()
    n = len(_VOWEL_GROUP.findall(w))
    if len(w) > 2 and w[-1] == "e" and w[-2] not in _VOWELS:
        if not (w[-2] == "l" and w[-3] not in _VOWELS):
            n -= 1
    return max(n, 1)


def word_keys(tokens: Sequence[Token | str]) -> list[str]:
    """Lowercased comparison keys for a token sequence (plain strings pass through)."""
    return [t.lower if isinstance(t, Token) else t.casefold() for t in tokens]
