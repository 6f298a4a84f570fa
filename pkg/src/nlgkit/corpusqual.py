"""Corpus-level lexical richness, syntactic variation and content selection.

D-levels come from a transparent cue table, not a parser. Each cue found in a
sentence belongs to one category:

    1  infinitive ("to" + verb) or gerund complement after a catenative verb
    2  clause coordination (and/but/or/so/yet + subject + finite verb)
    3  relative or complement clause after the main verb
    4  comparative ("than"), non-finite clause with its own subject, or an
       adverbial subordinate clause
    5  relative clause modifying the subject

One cue gives its category's level, two or more cues give 6, and three or
more cues spanning at least two categories give 7.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import EmptyInput
from .mr import MeaningRepresentation, SlotLexicon, coverage
from .textproc import Sentence, TextUnit, Token, TokenKind, text_unit

# ---------------------------------------------------------------------------
# D-level rules

_VERBS = """
accept add agree allow appear arrive ask attract avoid bake be become begin believe
book bring build buy call carry change check choose clean close come consider
continue cook cost cover create cut decide deliver describe deserve dine do drink
drive eat enjoy enter expect experience explain fall feature feel fill find finish
fit fly follow forget fry get give go grab grill happen hate have head hear help
hold hope impress include intend invite join keep know learn leave let lie like
listen live look lose love make mean meet mind miss move need offer open order pay
pick plan play please prefer prepare present promise provide put reach read
realise realize receive recommend relax remember rent reserve return rise run
satisfy say see seem sell send serve set share show sit sleep smell speak spend
stand start stay stop suggest suit suppose take talk taste teach tell tend think
travel treat try turn understand use visit wait walk want watch welcome wish
wonder work worry write
""".split()

_IRREGULAR_PAST = """
was were been had did made took gave went gone came saw seen found got said thought
knew known ate eaten sat drank drunk bought brought built chose chosen felt fell
flew forgot held heard kept left lost meant met paid put read ran rose sold sent set
showed shown slept spoke spent stood taught told understood wrote written
""".split()

_EXTRA_FINITE = """
is are am was were has have had does do did can could will would shall should may
might must 's 're 've 'd 'll
""".split()


def _inflect(base: str) -> tuple[str, str]:
    if base.endswith(("s", "sh", "ch", "x", "z", "o")):
        third = base + "es"
    elif base.endswith("y") and base[-2] not in "aeiou":
        third = base[:-1] + "ies"
    else:
        third = base + "s"
    if base.endswith("e"):
        past = base + "d"
    elif base.endswith("y") and base[-2] not in "aeiou":
        past = base[:-1] + "ied"
    elif base in {"stop", "plan", "shop", "drop", "grab", "chat"}:
        past = base + base[-1] + "ed"
    else:
        past = base + "ed"
    return third, past


@dataclass(frozen=True)
class DLevelRuleSet:
    version: str = "cue-rules-1"
    verb_base: frozenset[str] = frozenset(_VERBS)
    catenative: frozenset[str] = frozenset(
        "enjoy love like stop start keep recommend avoid finish try consider suggest "
        "begin continue prefer hate mind miss quit risk go".split())
    coordinators: frozenset[str] = frozenset({"and", "but", "or", "so", "yet"})
    relativizers: frozenset[str] = frozenset({"that", "which", "who", "whom", "whose", "where"})
    subordinators: frozenset[str] = frozenset(
        "because although though while whereas if unless since when whenever until once".split())
    comparative: frozenset[str] = frozenset({"than"})
    subject_pronouns: frozenset[str] = frozenset({"i", "you", "he", "she", "it", "we", "they", "there"})
    object_pronouns: frozenset[str] = frozenset({"me", "him", "her", "us", "them", "you"})
    determiners: frozenset[str] = frozenset(
        "the a an this these those its their our my your his her some many every each no any".split())
    participles: frozenset[str] = frozenset(
        {"called", "named", "located", "situated", "rated", "priced", "based", "known", "set"})
    be_forms: frozenset[str] = frozenset({"be", "is", "are", "am", "was", "were", "been", "being"})
    ing_exclusions: frozenset[str] = frozenset(
        "thing something nothing anything everything evening morning building king ring "
        "wedding pudding dumpling seating rating pricing parking ceiling".split())
    # bare plural subjects after which a base-form verb is finite ("students go")
    plural_subjects: frozenset[str] = frozenset(
        "people families customers students diners guests kids children critics locals".split())
    finite: frozenset[str] = field(init=False)

    def __post_init__(self) -> None:
        third, past = zip(*(_inflect(v) for v in self.verb_base)) if self.verb_base else ((), ())
        finite = set(_EXTRA_FINITE) | set(third) | set(past) | set(_IRREGULAR_PAST)
        finite -= {"been", "gone", "seen", "eaten", "known", "shown", "written", "chosen", "drunk"}
        object.__setattr__(self, "finite", frozenset(finite))


DEFAULT_RULES = DLevelRuleSet()

CATEGORY_LEVEL = {"inf": 1, "coord": 2, "orel": 3, "comp": 4, "srel": 5}


def _is_finite(keys: Sequence[str], i: int, rules: DLevelRuleSet) -> bool:
    w = keys[i]
    if w in rules.finite:
        if w in rules.participles or (w.endswith("ed") and w not in _EXTRA_FINITE):
            # participle after an auxiliary ("is located") or a noun ("a pub called X")
            return i > 0 and keys[i - 1] in rules.subject_pronouns
        return True
    if w in rules.verb_base and i > 0:
        prev = keys[i - 1]
        return prev in rules.subject_pronouns or prev in rules.plural_subjects
    return False


def sentence_cues(sentence: Sentence | Sequence[Token], rules: DLevelRuleSet = DEFAULT_RULES) -> list[tuple[int, str]]:
    """(token index, category) for every complexity cue in a sentence."""
    tokens = list(sentence.tokens if isinstance(sentence, Sentence) else sentence)
    keys = [t.lower for t in tokens]
    n = len(keys)
    is_word = [t.kind is TokenKind.WORD for t in tokens]
    question = n > 0 and keys[-1] == "?"
    finite = [is_word[i] and _is_finite(keys, i, rules) for i in range(n)]
    cues: list[tuple[int, str]] = []

    def finite_within(start: int, span: int) -> int:
        for j in range(start, min(n, start + span)):
            if finite[j]:
                return j
            if not is_word[j] and keys[j] != "'s":
                return -1
        return -1

    for i, w in enumerate(keys):
        if not is_word[i]:
            continue
        nxt = keys[i + 1] if i + 1 < n else ""
        if w == "to" and nxt in rules.verb_base and i + 1 < n and tokens[i + 1].surface.islower():
            prev = keys[i - 1] if i > 0 else ""
            cues.append((i, "comp" if prev in rules.object_pronouns and i > 1 else "inf"))
        elif (w.endswith("ing") and len(w) > 4 and w not in rules.ing_exclusions and i > 0
              and keys[i - 1] not in rules.be_forms
              and (keys[i - 1] in rules.catenative
                   or any(keys[i - 1] in _inflect(c) for c in rules.catenative))):
            cues.append((i, "inf"))
        elif w in rules.coordinators and 0 < i and any(finite[:i]):
            j = finite_within(i + 1, 5)
            if j > i + 1 and keys[i + 1] not in rules.relativizers:
                subj = keys[i + 1]
                if (subj in rules.subject_pronouns or subj in rules.determiners
                        or tokens[i + 1].surface[:1].isupper() or j == i + 2):
                    cues.append((i, "coord"))
        elif w in rules.relativizers and i > 0:
            prev = keys[i - 1]
            if w == "that":
                if prev in rules.determiners or prev in {"of", "in", "at", "so", "like", "than"}:
                    continue
                follows = (finite[i + 1] if i + 1 < n else False) or nxt in rules.subject_pronouns \
                    or nxt in rules.determiners or (i + 1 < n and tokens[i + 1].surface[:1].isupper()) \
                    or finite_within(i + 2, 2) >= 0
                if not follows:
                    continue
            cues.append((i, "orel" if any(finite[:i]) else "srel"))
        elif w in rules.subordinators and not (i == 0 and question):
            if finite_within(i + 1, 6) >= 0:
                cues.append((i, "comp"))
        elif w in rules.comparative and i > 0:
            cues.append((i, "comp"))
    return cues


def dlevel(sentence: Sentence | Sequence[Token], rules: DLevelRuleSet = DEFAULT_RULES) -> int:
    """Syntactic complexity level 0..7 of one sentence."""
    cues = sentence_cues(sentence, rules)
    categories = {c for _, c in cues}
    if len(cues) >= 3 and len(categories) >= 2:
        return 7
    if len(cues) >= 2:
        return 6
    if cues:
        return CATEGORY_LEVEL[cues[0][1]]
    return 0


# ---------------------------------------------------------------------------
# lexical measures


def _word_keys(tokens: Iterable[Token | str]) -> list[str]:
    out = []
    for t in tokens:
        if isinstance(t, Token):
            if t.is_word:
                out.append(t.lower)
        else:
            out.append(t.casefold())
    return out


def _segment_ratios(keys: Sequence[str], segment_size: int) -> np.ndarray:
    vocab: dict[str, int] = {}
    ids = np.array([vocab.setdefault(k, len(vocab)) for k in keys], dtype=np.int64)
    return _kernels.segment_type_counts(ids, segment_size) / segment_size


def msttr(tokens: Sequence[Token | str], segment_size: int = 50) -> float:
    """Mean type/token ratio over consecutive complete segments.

    The trailing partial segment is dropped. Input shorter than one segment
    falls back to the plain type/token ratio (see :func:`msttr_detail`).
    """
    return msttr_detail(tokens, segment_size)[0]


def msttr_detail(tokens: Sequence[Token | str], segment_size: int = 50) -> tuple[float, tuple[str, ...]]:
    if segment_size < 1:
        raise ValueError("segment_size must be >= 1")
    keys = _word_keys(tokens)
    if not keys:
        raise EmptyInput("MSTTR needs at least one word token")
    if len(keys) < segment_size:
        return len(set(keys)) / len(keys), ("short_input",)
    return float(np.mean(_segment_ratios(keys, segment_size))), ()


def ttr(tokens: Sequence[Token | str]) -> float:
    keys = _word_keys(tokens)
    if not keys:
        raise EmptyInput("TTR needs at least one word token")
    return len(set(keys)) / len(keys)


def lexical_sophistication(tokens: Sequence[Token | str], basic_list: frozenset[str],
                           stopwords: frozenset[str]) -> float:
    """Share of lexical (non-stopword) word tokens that are not in the basic list."""
    lexical = [k for k in _word_keys(tokens) if k not in stopwords]
    if not lexical:
        return 0.0
    return sum(1 for k in lexical if k not in basic_list) / len(lexical)


def content_selection_rate(pairs: Sequence[tuple[MeaningRepresentation, TextUnit | str]],
                           lexicon: SlotLexicon | None = None) -> float:
    """Fraction of pairs whose utterance leaves at least one MR slot unrealised."""
    if not pairs:
        raise EmptyInput("content selection rate needs at least one pair")
    return sum(1 for mr, text in pairs if coverage(mr, text, lexicon) < 1.0) / len(pairs)


# ---------------------------------------------------------------------------
# corpus aggregation


@dataclass(frozen=True)
class CorpusConfig:
    basic_words: frozenset[str]
    stopwords: frozenset[str]
    lexicon: SlotLexicon = field(default_factory=SlotLexicon.identity)
    segment_size: int = 50
    rules: DLevelRuleSet = DEFAULT_RULES

    @classmethod
    def default(cls, **overrides) -> "CorpusConfig":
        from .resources import default_basic_words, default_stopwords

        kw = {"basic_words": default_basic_words(), "stopwords": default_stopwords()}
        kw.update(overrides)
        return cls(**kw)


@dataclass(frozen=True)
class CorpusStats:
    ls: float
    msttr: float
    ttr: float
    dlevel_hist: tuple[float, ...]
    frac_level01: float
    frac_level67: float
    frac_above_level1: float
    content_selection_rate: float | None
    n_pairs: int
    n_sentences: int
    n_tokens: int
    flags: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "ls": self.ls,
            "msttr": self.msttr,
            "ttr": self.ttr,
            "dlevel_hist": list(self.dlevel_hist),
            "frac_level01": self.frac_level01,
            "frac_level67": self.frac_level67,
            "frac_above_level1": self.frac_above_level1,
            "content_selection_rate": self.content_selection_rate,
            "n_pairs": self.n_pairs,
            "n_sentences": self.n_sentences,
            "n_tokens": self.n_tokens,
            "flags": list(self.flags),
        }


@dataclass
class CorpusAccumulator:
    """Integer partial aggregates; ``merge`` concatenates in order.

    Everything except the word stream (kept for MSTTR, which is order
    sensitive) is a commutative count, so merging chunk accumulators in input
    order reproduces the single-pass result exactly.
    """

    config: CorpusConfig
    words: list[str] = field(default_factory=list)
    n_tokens: int = 0
    n_pairs: int = 0
    lexical: int = 0
    sophisticated: int = 0
    dlevels: list[int] = field(default_factory=lambda: [0] * 8)
    with_mr: int = 0
    selected: int = 0

    def add(self, mr: MeaningRepresentation | None, text: TextUnit | str) -> None:
        if isinstance(text, str):
            text = text_unit(text)
        cfg = self.config
        self.n_pairs += 1
        self.n_tokens += len(text.tokens)
        keys = [t.lower for t in text.words]
        self.words.extend(keys)
        for k in keys:
            if k not in cfg.stopwords:
                self.lexical += 1
                if k not in cfg.basic_words:
                    self.sophisticated += 1
        for sent in text.sentences:
            self.dlevels[dlevel(sent, cfg.rules)] += 1
        if mr is not None:
            self.with_mr += 1
            if coverage(mr, text, cfg.lexicon) < 1.0:
                self.selected += 1

    def merge(self, other: "CorpusAccumulator") -> "CorpusAccumulator":
        out = CorpusAccumulator(self.config)
        out.words = self.words + other.words
        out.dlevels = [a + b for a, b in zip(self.dlevels, other.dlevels)]
        for name in ("n_tokens", "n_pairs", "lexical", "sophisticated", "with_mr", "selected"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def finalize(self) -> CorpusStats:
        if not self.words:
            raise EmptyInput("corpus has no word tokens")
        m, flags = msttr_detail(self.words, self.config.segment_size)
        n_sent = sum(self.dlevels)
        hist = tuple(c / n_sent for c in self.dlevels) if n_sent else (1.0,) + (0.0,) * 7
        low = hist[0] + hist[1]
        high = hist[6] + hist[7]
        return CorpusStats(
            ls=self.sophisticated / self.lexical if self.lexical else 0.0,
            msttr=m,
            ttr=len(set(self.words)) / len(self.words),
            dlevel_hist=hist,
            frac_level01=low,
            frac_level67=high,
            frac_above_level1=1.0 - low,
            content_selection_rate=self.selected / self.with_mr if self.with_mr else None,
            n_pairs=self.n_pairs,
            n_sentences=n_sent,
            n_tokens=self.n_tokens,
            flags=flags,
        )


def corpus_stats(corpus: Sequence[tuple[MeaningRepresentation | None, TextUnit | str]],
                 config: CorpusConfig | None = None) -> CorpusStats:
    """LS, MSTTR, D-level histogram and content selection for a corpus of (MR or None, text) entries, in order."""
    if not corpus:
        raise EmptyInput("corpus is empty")
    acc = CorpusAccumulator(config or CorpusConfig.default())
    for mr, text in corpus:
        acc.add(mr, text)
    return acc.finalize()


def dlevel_histogram(sentences: Iterable[Sentence], rules: DLevelRuleSet = DEFAULT_RULES) -> Counter:
    return Counter(dlevel(s, rules) for s in sentences)
