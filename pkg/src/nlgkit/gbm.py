"""Reference-free surface metrics computed from a single text."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from .textproc import TextUnit, count_syllables, text_unit

READABILITY_FORMULA = "Flesch Reading Ease: 206.835 - 1.015 * words/sentences - 84.6 * syllables/words"


@dataclass(frozen=True)
class GbmProfile:
    readability: float
    chars_per_utterance: float
    chars_per_word: float
    syllables_per_sentence: float
    syllables_per_word: float
    misspellings: int
    word_count: int
    sentence_count: int
    flags: tuple[str, ...] = ()

    @property
    def readability_defined(self) -> bool:
        return "readability_undefined" not in self.flags

    def as_dict(self) -> dict:
        return asdict(self)


def flesch_reading_ease(words: int, sentences: int, syllables: int) -> float:
    return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)


def exemption_words(values: Iterable[str]) -> frozenset[str]:
    """Lowercased word tokens of MR values, so names like "Wrestlers" are not misspellings."""
    return frozenset(t.lower for v in values for t in text_unit(v).words)


def is_known(word: str, dictionary: frozenset[str], exemptions: frozenset[str] = frozenset()) -> bool:
    """Dictionary lookup; hyphenated compounds pass when every part is known."""
    w = word.casefold().replace("\u2019", "'")
    if w in dictionary or w in exemptions:
        return True
    parts = w.split("-")
    return len(parts) > 1 and all(p in dictionary or p in exemptions for p in parts)


def gbm_profile(text: TextUnit | str, dictionary: frozenset[str],
                exemptions: frozenset[str] = frozenset()) -> GbmProfile:
    if isinstance(text, str):
        text = text_unit(text)
    words = text.words
    chars = sum(1 for ch in text.raw if not ch.isspace())
    n_sent = len(text.sentences)
    if not words:
        return GbmProfile(0.0, float(chars), 0.0, 0.0, 0.0, 0, 0, n_sent, ("readability_undefined",))
    n_words = len(words)
    syllables = sum(count_syllables(t.surface) for t in words)
    misspelled = sum(1 for t in words if not is_known(t.lower, dictionary, exemptions))
    return GbmProfile(
        readability=flesch_reading_ease(n_words, n_sent, syllables),
        chars_per_utterance=float(chars),
        chars_per_word=sum(len(t.surface) for t in words) / n_words,
        syllables_per_sentence=syllables / n_sent,
        syllables_per_word=syllables / n_words,
        misspellings=misspelled,
        word_count=n_words,
        sentence_count=n_sent,
    )
