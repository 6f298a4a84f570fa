"""Automatic quality gates for crowdsourced (MR, utterance) pairs.

Gates, always all evaluated and reported in this order:

* ``well_formedness``: enough words, few enough misspellings (MR values
  exempt), no control characters;
* ``semantic_adequacy``: slot coverage plus similarity between the MR values
  and the utterance;
* ``hallucination``: no lexicon value foreign to the MR appears.
"""
from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import EmptyInput
from .gbm import exemption_words, is_known
from .mr import MeaningRepresentation, SlotLexicon, contains_run, coverage
from .textproc import text_unit, word_keys
from .wbm import LexicalOverlap, SimilarityProvider, semantic_similarity

GATES = ("well_formedness", "semantic_adequacy", "hallucination")


@dataclass(frozen=True)
class ValidationConfig:
    min_words: int = 3
    max_misspellings: int = 0
    coverage_threshold: float = 1.0
    allow_skipped_slots: bool = False
    semsim_threshold: float = 0.3
    forbid_foreign_values: bool = True

    def __post_init__(self) -> None:
        if self.min_words < 0 or self.max_misspellings < 0:
            raise ValueError("min_words and max_misspellings must be non-negative")
        for name in ("coverage_threshold", "semsim_threshold"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GateResult:
    name: str
    passed: bool
    diagnostic: str
    value: float


@dataclass(frozen=True)
class ValidationOutcome:
    gates: tuple[GateResult, ...]

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gates)

    def gate(self, name: str) -> GateResult:
        return next(g for g in self.gates if g.name == name)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "gates": [asdict(g) for g in self.gates]}


def _has_control(text: str) -> bool:
    return any(unicodedata.category(ch) == "Cc" and ch not in "\t\n\r" for ch in text)


def _foreign_values(mr: MeaningRepresentation, keys: list[str], lexicon: SlotLexicon) -> list[str]:
    own = {(a.casefold(), v.casefold()) for a, v in mr.slots}
    own_patterns = {p for a, v in mr.slots for p in lexicon.patterns(a, v)}
    hits = []
    for attr in lexicon.attributes:
        for value in lexicon.inventory(attr):
            if (attr, value) in own:
                continue
            for p in lexicon.patterns(attr, value):
                if p not in own_patterns and contains_run(keys, p):
                    hits.append(f"{attr}={value}")
                    break
    return hits


def validate_utterance(mr: MeaningRepresentation, text: str,
                       config: ValidationConfig | None = None,
                       lexicon: SlotLexicon | None = None,
                       dictionary: frozenset[str] | None = None,
                       provider: SimilarityProvider | None = None) -> ValidationOutcome:
    from .resources import default_dictionary

    config = config or ValidationConfig()
    lexicon = lexicon or SlotLexicon.identity()
    dictionary = default_dictionary() if dictionary is None else dictionary
    provider = provider or LexicalOverlap()

    unit = text_unit(text)
    words = unit.words
    exempt = exemption_words(mr.values)
    misspelled = sorted({t.lower for t in words if not is_known(t.lower, dictionary, exempt)})
    n_miss = sum(1 for t in words if not is_known(t.lower, dictionary, exempt))
    control = _has_control(text)
    wf_ok = len(words) >= config.min_words and n_miss <= config.max_misspellings and not control
    wf_diag = f"words={len(words)} (min {config.min_words}); misspellings={n_miss} (max {config.max_misspellings})"
    if misspelled:
        wf_diag += f" [{', '.join(misspelled)}]"
    if control:
        wf_diag += "; control characters present"

    cov = coverage(mr, unit, lexicon)
    sim = semantic_similarity(" ".join(mr.values), unit, provider).value
    cov_ok = cov > 0.0 if config.allow_skipped_slots else cov >= config.coverage_threshold
    sa_ok = cov_ok and sim >= config.semsim_threshold
    need = "> 0" if config.allow_skipped_slots else f">= {config.coverage_threshold:g}"
    sa_diag = f"coverage={cov:.3f} (need {need}); semsim={sim:.3f} (min {config.semsim_threshold:g})"

    if config.forbid_foreign_values:
        foreign = _foreign_values(mr, word_keys(unit.tokens), lexicon)
        h_diag = "foreign values: " + (", ".join(foreign) if foreign else "none")
    else:
        foreign = []
        h_diag = "disabled"

    return ValidationOutcome((
        GateResult("well_formedness", wf_ok, wf_diag, float(n_miss)),
        GateResult("semantic_adequacy", sa_ok, sa_diag, cov),
        GateResult("hallucination", not foreign, h_diag, float(len(foreign))),
    ))


@dataclass(frozen=True)
class BatchReport:
    outcomes: tuple[ValidationOutcome, ...]
    gate_failures: dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def pass_rate(self) -> float:
        return sum(o.passed for o in self.outcomes) / self.n

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "pass_rate": self.pass_rate,
            "gate_failures": dict(self.gate_failures),
            "outcomes": [o.as_dict() for o in self.outcomes],
        }


def validate_batch(pairs: Sequence[tuple[MeaningRepresentation, str]],
                   config: ValidationConfig | None = None,
                   lexicon: SlotLexicon | None = None,
                   dictionary: frozenset[str] | None = None,
                   provider: SimilarityProvider | None = None,
                   executor=None) -> BatchReport:
    """Validate every pair; outcomes keep input order."""
    if not pairs:
        raise EmptyInput("no pairs to validate")
    run = (lambda p: validate_utterance(p[0], p[1], config, lexicon, dictionary, provider))
    outcomes = tuple(executor.map(run, pairs) if executor is not None else map(run, pairs))
    failures = Counter({g: 0 for g in GATES})
    for o in outcomes:
        for g in o.gates:
            if not g.passed:
                failures[g.name] += 1
    return BatchReport(outcomes, dict(failures))
