"""Alignment precision/recall/F1 and BLEU.

Two BLEU scales are used on purpose: :func:`sentence_bleu` returns a value in
[0, 1] (used as a similarity by the BLEU aligner), :func:`corpus_bleu` returns
0-100 like the usual reporting tools.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import AlignReport, SentencePair, collapse_ws


def normalize_pair(src: str, tgt: str, case_fold: bool = False) -> tuple[str, str]:
    src, tgt = collapse_ws(src), collapse_ws(tgt)
    if case_fold:
        return src.casefold(), tgt.casefold()
    return src, tgt


@dataclass(frozen=True)
class GoldSet:
    """Deduplicated reference pairs, stored normalized."""

    pairs: frozenset[tuple[str, str]]
    case_fold: bool = False

    @classmethod
    def from_pairs(cls, pairs: Iterable[SentencePair | tuple[str, str]], case_fold: bool = False) -> GoldSet:
        keys = set()
        for p in pairs:
            src, tgt = p.key if isinstance(p, SentencePair) else p
            keys.add(normalize_pair(src, tgt, case_fold))
        return cls(frozenset(keys), case_fold)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, item: tuple[str, str]) -> bool:
        return normalize_pair(*item, case_fold=self.case_fold) in self.pairs


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean, 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def precision_recall_f1(pred: Iterable[SentencePair | tuple[str, str]], gold: GoldSet) -> AlignReport:
    if not len(gold):
        raise ValueError("gold set is empty")
    predicted = GoldSet.from_pairs(pred, gold.case_fold).pairs
    correct = len(predicted & gold.pairs)
    p = correct / len(predicted) if predicted else 0.0
    r = correct / len(gold.pairs)
    return AlignReport(p, r, f1_score(p, r), len(predicted), len(gold.pairs), correct)


# --- tokenization ----------------------------------------------------------

_13A_RULES = [
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


def tokenize_13a(text: str, case_fold: bool = False) -> list[str]:
    """mteval-v13a tokenization as used by WMT scoring scripts."""
    line = text.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = line.replace("&quot;", '"').replace("&amp;", "&").replace("&lt;", "<").replace("&gt;", ">")
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    if case_fold:
        line = line.lower()
    return line.split()


# --- BLEU ------------------------------------------------------------------


@dataclass(frozen=True)
class BleuParams:
    max_ngram: int = 4
    smoothing: bool = True
    case_fold: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.max_ngram <= 4:
            raise ValueError(f"max_ngram must be in 1..4, got {self.max_ngram}")


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _segment_stats(hyp: Sequence[str], refs: Sequence[Sequence[str]], max_ngram: int):
    """Clipped matches and totals per order, plus hypothesis and closest reference length."""
    if not refs or any(len(r) == 0 for r in refs):
        raise ValueError("references must be non-empty")
    matches, totals = [], []
    for n in range(1, max_ngram + 1):
        h = ngram_counts(hyp, n)
        clip: Counter = Counter()
        for ref in refs:
            clip |= ngram_counts(ref, n)
        matches.append(sum(min(c, clip[g]) for g, c in h.items()))
        totals.append(max(len(hyp) - n + 1, 0))
    c = len(hyp)
    # closest reference length, shorter wins ties
    r = min((abs(len(ref) - c), len(ref)) for ref in refs)[1]
    return matches, totals, c, r


def _brevity_penalty(c: int, r: int) -> float:
    if c == 0:
        return 0.0
    if c >= r:
        return 1.0
    return math.exp(1 - r / c)


def sentence_bleu(hyp: Sequence[str], refs: Sequence[Sequence[str]], params: BleuParams = BleuParams()) -> float:
    """Sentence BLEU in [0, 1].

    With smoothing on, an order n >= 2 with no matches uses 1/(total+1) as its
    precision; unigram precision is never smoothed.
    """
    if params.case_fold:
        hyp = [t.lower() for t in hyp]
        refs = [[t.lower() for t in r] for r in refs]
    matches, totals, c, r = _segment_stats(hyp, refs, params.max_ngram)
    if c == 0 or matches[0] == 0:
        return 0.0
    log_p = 0.0
    for n, (m, t) in enumerate(zip(matches, totals), 1):
        if m == 0:
            if not params.smoothing or n == 1:
                return 0.0
            p = 1.0 / (t + 1)
        else:
            p = m / t
        log_p += math.log(p) / params.max_ngram
    return min(1.0, _brevity_penalty(c, r) * math.exp(log_p))


def corpus_bleu(
    hyps: Sequence[Sequence[str]],
    refs_list: Sequence[Sequence[Sequence[str]]],
    params: BleuParams = BleuParams(),
) -> float:
    """Unsmoothed corpus BLEU on a 0-100 scale; counts are summed before ratios."""
    if len(hyps) != len(refs_list):
        raise ValueError(f"{len(hyps)} hypotheses but {len(refs_list)} reference sets")
    if not hyps:
        raise ValueError("empty corpus")
    N = params.max_ngram
    matches, totals = [0] * N, [0] * N
    c_sum = r_sum = 0
    for hyp, refs in zip(hyps, refs_list):
        if params.case_fold:
            hyp = [t.lower() for t in hyp]
            refs = [[t.lower() for t in r] for r in refs]
        m, t, c, r = _segment_stats(hyp, refs, N)
        matches = [a + b for a, b in zip(matches, m)]
        totals = [a + b for a, b in zip(totals, t)]
        c_sum += c
        r_sum += r
    if any(m == 0 for m in matches):
        return 0.0
    log_p = sum(math.log(m / t) for m, t in zip(matches, totals)) / N
    return min(100.0, 100.0 * _brevity_penalty(c_sum, r_sum) * math.exp(log_p))
