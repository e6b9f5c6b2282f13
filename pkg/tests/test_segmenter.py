import pytest
from hypothesis import given, strategies as st

from bitextkit.segmenter import (
    RulesError,
    SegmenterRules,
    default_rules,
    load_rules,
    segment,
    segment_sentences,
)


def test_examples():
    assert len(segment("Hello world. Bye.")) == 2
    assert segment_sentences("Pi is 3.14 exactly. Next.") == ["Pi is 3.14 exactly.", "Next."]
    text = "এ. কে. ফজলুল হক বাংলার প্রধানমন্ত্রী ছিলেন।"
    assert segment_sentences(text) == [text]
    assert segment("") == []


def test_spans_are_offsets_into_text():
    text = "  First one.  Second one!\n\nThird?"
    spans = segment(text)
    assert [text[s.start : s.end] for s in spans] == [s.text for s in spans]
    assert all(a.end <= b.start for a, b in zip(spans, spans[1:]))


def test_law_mode_splits_at_line_final_semicolon():
    text = "(a) the first clause;\n(b) the second clause;\n(c) the last clause."
    assert len(segment(text, law_mode=True)) == 3
    assert segment_sentences("one thing;\ntwo things") == ["one thing; two things"]
    assert segment_sentences("one thing;\ntwo things", law_mode=True) == ["one thing;", "two things"]


def test_load_rules_merges_file(tmp_path):
    path = tmp_path / "abbr.txt"
    path.write_text("# extra\nDr.\nএ.\nZz.\nZz.\n", encoding="utf-8")
    rules = load_rules(path)
    assert {"Dr.", "এ.", "Zz."} <= rules.abbreviations
    assert rules.abbreviations >= default_rules().abbreviations
    assert segment_sentences("Ask Zz. Smith.", rules) == ["Ask Zz. Smith."]


def test_load_rules_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert load_rules(path).abbreviations == default_rules().abbreviations


def test_load_rules_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_rules(tmp_path / "missing.txt")
    bad = tmp_path / "bad.txt"
    bad.write_text("Dr.\nU. S.\n")
    with pytest.raises(RulesError, match=r"bad.txt:2"):
        load_rules(bad)
    with pytest.raises(RulesError):
        load_rules(overrides={"bogus": 1})


def test_rules_invariants():
    with pytest.raises(RulesError):
        SegmenterRules(frozenset({"Dr"}))
    with pytest.raises(RulesError):
        SegmenterRules(frozenset(), terminal_chars=frozenset())


def test_overrides_replace_terminals():
    rules = load_rules(overrides={"terminal_chars": ["।"]})
    assert segment_sentences("One. Two.", rules) == ["One. Two."]
    assert segment_sentences("এক। দুই।", rules) == ["এক।", "দুই।"]


WORDS = ["Dr.", "Mr.", "etc.", "এ.", "কে.", "word", "Word", "শব্দ", "3.14", "ok.", "End.", "Yes!", "হ্যাঁ।", "(a)", "“Hi.”"]


@given(st.lists(st.sampled_from(WORDS), min_size=1, max_size=25), st.sampled_from([" ", "  ", "\n"]))
def test_no_boundary_after_abbreviation(words, sep):
    rules = default_rules()
    spans = segment(sep.join(words), rules)
    for span in spans[:-1]:
        assert span.text.split()[-1] not in rules.abbreviations


@given(st.lists(st.sampled_from(WORDS), min_size=1, max_size=25))
def test_idempotent_on_own_output(words):
    for sentence in segment_sentences(" ".join(words)):
        assert segment_sentences(sentence) == [sentence]


# Two alphabets with the same punctuation classes: upper-case Latin letters
# and Bengali consonants both open a sentence.
LATIN = "ABCDEFGHIJ"
BENGALI = "কখগঘঙচছজঝঞ"
TO_BENGALI = str.maketrans(LATIN, BENGALI)
skeleton = st.text(alphabet=LATIN + "0123456789 .!?\n“”()", max_size=80)


@given(skeleton)
def test_script_consistency(text):
    rules = SegmenterRules(frozenset())
    latin = [(s.start, s.end) for s in segment(text, rules)]
    bengali = [(s.start, s.end) for s in segment(text.translate(TO_BENGALI), rules)]
    assert latin == bengali
