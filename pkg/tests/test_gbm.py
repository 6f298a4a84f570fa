import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgkit.gbm import exemption_words, flesch_reading_ease, gbm_profile, is_known
from nlgkit.resources import default_dictionary

DICT = default_dictionary()


def test_flesch_hand_value():
    prof = gbm_profile("The cat sat.", DICT)
    assert (prof.word_count, prof.sentence_count) == (3, 1)
    assert prof.syllables_per_word == 1.0
    assert prof.readability == pytest.approx(206.835 - 1.015 * 3 - 84.6 * 1, abs=0.01)
    assert prof.readability == pytest.approx(119.19, abs=0.01)


def test_misspellings():
    assert gbm_profile("teh cat", DICT).misspellings == 1
    assert gbm_profile("the cat", DICT).misspellings == 0


def test_mr_values_are_exempt():
    text = "Zizzi is near Fitzbillies."
    assert gbm_profile(text, DICT).misspellings == 2
    assert gbm_profile(text, DICT, exemption_words(["Zizzi", "Fitzbillies"])).misspellings == 0


def test_hyphenated_compounds():
    assert is_known("family-friendly", DICT)
    assert not is_known("family-frendly", DICT)


def test_empty_text_is_flagged():
    prof = gbm_profile("", DICT)
    assert prof.word_count == 0
    assert not prof.readability_defined
    assert prof.syllables_per_word == prof.chars_per_word == 0.0


def test_other_ratios():
    prof = gbm_profile("Cheap pubs. Near water.", DICT)
    assert prof.chars_per_utterance == len("Cheap pubs. Near water.".replace(" ", ""))
    assert prof.chars_per_word == (5 + 4 + 4 + 5) / 4
    assert prof.syllables_per_sentence == 5 / 2
    assert prof.readability == pytest.approx(flesch_reading_ease(4, 2, 5))


sentences = st.lists(
    st.sampled_from(["cheap", "pub", "restaurant", "the", "teh", "riverside", "family-friendly", "Zizzi"]),
    min_size=1, max_size=8,
).map(lambda ws: " ".join(ws).capitalize() + ".")


@settings(max_examples=200)
@given(st.lists(sentences, min_size=1, max_size=3).map(" ".join))
def test_duplication_invariance(text):
    one = gbm_profile(text, DICT)
    two = gbm_profile(text + " " + text, DICT)
    assert two.word_count == 2 * one.word_count
    assert two.chars_per_utterance == 2 * one.chars_per_utterance
    for field in ("readability", "chars_per_word", "syllables_per_sentence", "syllables_per_word"):
        assert getattr(two, field) == pytest.approx(getattr(one, field), rel=1e-12)


@settings(max_examples=200)
@given(st.lists(sentences, min_size=1, max_size=3).map(" ".join))
def test_misspellings_monotone_in_dictionary(text):
    small = frozenset({"the", "cheap"})
    assert gbm_profile(text, DICT | small).misspellings <= gbm_profile(text, small).misspellings
    prof = gbm_profile(text, small)
    assert prof.misspellings <= prof.word_count
    assert prof.chars_per_word >= 1 and prof.syllables_per_word >= 1
