"""NLG evaluation toolkit: word- and grammar-based metrics, metric reliability
statistics, and corpus quality analysis for MR-to-text datasets."""
from __future__ import annotations

__version__ = "0.1.0"

from .corpusqual import (CorpusStats, content_selection_rate, corpus_stats, dlevel,
                         lexical_sophistication, msttr)
from .gbm import GbmProfile, gbm_profile
from .mr import MeaningRepresentation, SlotLexicon, coverage, parse_mr, slot_realized
from .stats import bootstrap_ci, ranking_accuracy, spearman
from .textproc import count_syllables, normalize, split_sentences, text_unit, tokenize
from .validate import ValidationConfig, validate_batch, validate_utterance
from .wbm import WbmScore, bleu, rouge_l, rouge_n, semantic_similarity, ter

__all__ = [
    "CorpusStats", "GbmProfile", "MeaningRepresentation", "SlotLexicon", "ValidationConfig",
    "WbmScore", "bleu", "bootstrap_ci", "content_selection_rate", "corpus_stats", "count_syllables",
    "coverage", "dlevel", "gbm_profile", "lexical_sophistication", "msttr", "normalize", "parse_mr",
    "ranking_accuracy", "rouge_l", "rouge_n", "semantic_similarity", "slot_realized", "spearman",
    "split_sentences", "ter", "text_unit", "tokenize", "validate_batch", "validate_utterance",
]
