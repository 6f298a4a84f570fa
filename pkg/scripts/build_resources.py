"""Regenerate the bundled word lists and the syllable fixture.

Dev-only: needs ``wordfreq``, ``cmudict`` and ``scikit-learn``, none of which
the package imports at runtime.

    python scripts/build_resources.py
"""
from __future__ import annotations

import re
from pathlib import Path

import cmudict
import wordfreq
from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "nlgkit" / "data"
FIXTURES = ROOT / "tests" / "fixtures"

WORD_RE = re.compile(r"[a-z]+(?:['-][a-z]+)*")


def _write(path: Path, lines) -> None:
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def main() -> None:
    pron = cmudict.dict()
    ranked = [w for w in wordfreq.top_n_list("en", 200_000) if WORD_RE.fullmatch(w)]

    # spelling dictionary: frequent words that also have a pronunciation entry,
    # which filters out high-frequency typos such as "teh"
    _write(DATA / "dictionary.txt", [w for w in ranked if w in pron][:50_000])
    _write(DATA / "basic_words.txt", ranked[:2000])
    _write(DATA / "stopwords.txt", sorted(ENGLISH_STOP_WORDS))

    rows = []
    for w in ranked:
        if not re.fullmatch(r"[a-z]+", w) or w not in pron:
            continue
        counts = sorted({sum(p[-1].isdigit() for p in variant) for variant in pron[w]})
        rows.append(f"{w}\t{','.join(map(str, counts))}")
        if len(rows) == 1000:
            break
    _write(FIXTURES / "syllables_cmu_1000.tsv", rows)


if __name__ == "__main__":
    main()
