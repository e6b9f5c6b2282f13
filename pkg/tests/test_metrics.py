import math
import random

import pytest
from hypothesis import given, strategies as st

from bitextkit.corpus import SentencePair
from bitextkit.metrics import (
    BleuParams,
    GoldSet,
    corpus_bleu,
    f1_score,
    precision_recall_f1,
    sentence_bleu,
    tokenize_13a,
)

from oracles import clipped_unigram_precision


def test_prf_examples():
    gold = GoldSet.from_pairs([("a", "b"), ("c", "e")])
    r = precision_recall_f1([("a", "b"), ("c", "d")], gold)
    assert (r.precision, r.recall, r.f1) == (0.5, 0.5, 0.5)
    assert (r.n_pred, r.n_gold, r.n_correct) == (2, 2, 1)
    same = precision_recall_f1([SentencePair("a", "b"), SentencePair("c", "e")], gold)
    assert (same.precision, same.recall, same.f1) == (1.0, 1.0, 1.0)
    assert abs(f1_score(0.9321, 0.8582) - 0.8937) < 1e-4
    assert f1_score(0, 0) == 0


def test_prf_empty_pred_and_gold():
    gold = GoldSet.from_pairs([("a", "b")])
    assert precision_recall_f1([], gold).precision == 0.0
    with pytest.raises(ValueError):
        precision_recall_f1([("a", "b")], GoldSet.from_pairs([]))


def test_gold_normalization():
    gold = GoldSet.from_pairs([("A  b", "C"), ("a b", "c")], case_fold=True)
    assert len(gold) == 1
    assert ("a B", " c ") in gold


pairs = st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from("wxyz")), max_size=12)


@given(pairs, st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from("wxyz")), min_size=1, max_size=12), st.randoms())
def test_prf_permutation_invariant(pred, gold_pairs, rnd):
    a = precision_recall_f1(pred, GoldSet.from_pairs(gold_pairs))
    pred2, gold2 = pred[:], gold_pairs[:]
    rnd.shuffle(pred2)
    rnd.shuffle(gold2)
    b = precision_recall_f1(pred2, GoldSet.from_pairs(gold2))
    assert a == b
    assert a.n_correct <= min(a.n_pred, a.n_gold)


def test_tokenize_13a():
    assert tokenize_13a("Hello, world!") == ["Hello", ",", "world", "!"]
    assert tokenize_13a("") == []
    assert tokenize_13a("It costs $3.50, ok?", case_fold=True) == ["it", "costs", "$", "3.50", ",", "ok", "?"]
    assert tokenize_13a("a &amp; b") == ["a", "&", "b"]


@given(st.text(alphabet="abc XYZ.,!?-$1২আ", max_size=40))
def test_tokenize_idempotent(text):
    toks = tokenize_13a(text)
    assert tokenize_13a(" ".join(toks)) == toks


def test_tokenize_matches_sacrebleu():
    pytest.importorskip("sacrebleu")
    from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

    tok = Tokenizer13a()
    for text in ["Hello, world!", "It's 3.5-4 km (approx.) from A&B.", "আমি ভাত খাই। 1,000 টাকা"]:
        assert tokenize_13a(text) == tok(text).split()


def test_sentence_bleu_examples():
    ref = "the cat is on the mat".split()
    assert sentence_bleu(ref, [ref]) == 1.0
    hyp = "the the the the the the the".split()
    assert clipped_unigram_precision(hyp, ref) == (2, 7)
    assert sentence_bleu(hyp, [ref], BleuParams(max_ngram=1)) == pytest.approx(2 / 7)
    short = "the cat is on".split()
    assert sentence_bleu(short, [ref]) == pytest.approx(math.exp(1 - 6 / 4))
    assert sentence_bleu([], [ref]) == 0.0
    with pytest.raises(ValueError):
        sentence_bleu(ref, [[]])
    with pytest.raises(ValueError):
        BleuParams(max_ngram=0)


def test_sentence_bleu_closest_reference_length():
    hyp = "a b c d".split()
    refs = ["a b c d e f g h".split(), "a b c".split(), "a b c d e".split()]
    # |4-3| == |4-5|: shorter reference wins, so no brevity penalty
    assert sentence_bleu(hyp, refs, BleuParams(max_ngram=1)) == 1.0


def test_smoothing_only_above_unigrams():
    hyp, ref = "a x b y".split(), "a b".split()
    assert sentence_bleu(hyp, [ref], BleuParams(smoothing=False)) == 0.0
    smoothed = sentence_bleu(hyp, [ref], BleuParams(max_ngram=2))
    assert smoothed == pytest.approx(math.sqrt(0.5 * 1 / 4))


@given(st.lists(st.sampled_from("abcde"), min_size=1, max_size=10), st.lists(st.sampled_from("abcde"), min_size=1, max_size=10))
def test_sentence_bleu_range(hyp, ref):
    score = sentence_bleu(hyp, [ref])
    assert 0.0 <= score <= 1.0
    if score == 1.0 and len(hyp) >= 4:
        assert hyp == ref


def test_corpus_bleu_examples():
    corpus = [s.split() for s in ["the cat sat here", "a b c d e", "one two three four five six"]]
    assert corpus_bleu(corpus, [[c] for c in corpus]) == 100.0
    with pytest.raises(ValueError):
        corpus_bleu([], [])
    with pytest.raises(ValueError):
        corpus_bleu(corpus, [[c] for c in corpus[:2]])


@given(st.lists(st.sampled_from("abcd"), min_size=1, max_size=12), st.lists(st.sampled_from("abcd"), min_size=1, max_size=12))
def test_single_segment_corpus_equals_unsmoothed_sentence(hyp, ref):
    assert corpus_bleu([hyp], [[ref]]) == pytest.approx(100 * sentence_bleu(hyp, [ref], BleuParams(smoothing=False)))


def test_corpus_bleu_matches_sacrebleu():
    sacrebleu = pytest.importorskip("sacrebleu")
    rng = random.Random(4)
    words = "the a cat dog sat ran on under mat rug quickly".split()
    refs = [" ".join(rng.choices(words, k=rng.randint(6, 14))) for _ in range(30)]
    hyps = [" ".join(w if rng.random() < 0.7 else rng.choice(words) for w in r.split()) for r in refs]
    ours = corpus_bleu([tokenize_13a(h) for h in hyps], [[tokenize_13a(r)] for r in refs])
    theirs = sacrebleu.corpus_bleu(hyps, [refs], tokenize="13a").score
    assert ours == pytest.approx(theirs, abs=1e-9)
