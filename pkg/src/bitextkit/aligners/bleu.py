"""Alignment through a machine translation of the source side.

Every translated source sentence is scored against every target sentence with
smoothed low-order sentence BLEU. The best-scoring strictly monotone set of
1-1 anchors above a threshold is chosen by dynamic programming; gaps between
consecutive anchors are then filled 1-1 when both sides of the gap have the
same length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..corpus import AlignmentLink
from ..metrics import BleuParams, sentence_bleu, tokenize_13a


@dataclass(frozen=True)
class BleuAlignParams:
    max_ngram: int = 2
    anchor_threshold: float = 0.10
    gap_fill: bool = True
    case_fold: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.max_ngram <= 4:
            raise ValueError("max_ngram must be in 1..4")
        if not 0 <= self.anchor_threshold <= 1:
            raise ValueError("anchor_threshold must be in [0, 1]")


def similarity_matrix(src_translated: Sequence[str], tgt: Sequence[str], params: BleuAlignParams) -> np.ndarray:
    bp = BleuParams(max_ngram=params.max_ngram, smoothing=True, case_fold=params.case_fold)
    hyp = [tokenize_13a(s) for s in src_translated]
    ref = [tokenize_13a(t) for t in tgt]
    sim = np.zeros((len(hyp), len(ref)))
    for i, h in enumerate(hyp):
        for j, r in enumerate(ref):
            if h and r:
                sim[i, j] = sentence_bleu(h, [r], bp)
    return sim


def best_anchors(sim: np.ndarray, threshold: float) -> list[tuple[int, int]]:
    """Strictly monotone (i, j) set of maximal total similarity, each cell >= threshold.

    Ties prefer the lexicographically smaller path found by the recurrence
    (skip source, then skip target, then take).
    """
    n, m = sim.shape
    best = np.zeros((n + 1, m + 1))
    move = np.zeros((n + 1, m + 1), dtype=np.int8)  # 1 skip src, 2 skip tgt, 3 take
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            options = [(best[i - 1, j], 1), (best[i, j - 1], 2)]
            if sim[i - 1, j - 1] >= threshold:
                options.append((best[i - 1, j - 1] + sim[i - 1, j - 1], 3))
            value, mv = options[0]
            for v, k in options[1:]:
                if v > value:
                    value, mv = v, k
            best[i, j], move[i, j] = value, mv
    anchors = []
    i, j = n, m
    while i and j:
        mv = move[i, j]
        if mv == 3:
            anchors.append((i - 1, j - 1))
            i, j = i - 1, j - 1
        elif mv == 1:
            i -= 1
        else:
            j -= 1
    anchors.reverse()
    return anchors


def _fill_gaps(anchors: list[tuple[int, int]], n: int, m: int) -> list[tuple[int, int]]:
    out = []
    bounds = [(-1, -1), *anchors, (n, m)]
    for (i0, j0), (i1, j1) in zip(bounds, bounds[1:]):
        gap_s, gap_t = i1 - i0 - 1, j1 - j0 - 1
        if gap_s == gap_t and gap_s > 0 and (i0, j0) != (-1, -1) and (i1, j1) != (n, m):
            out.extend((i0 + 1 + d, j0 + 1 + d) for d in range(gap_s))
        if (i1, j1) != (n, m):
            out.append((i1, j1))
    return out


def align_bleu(
    src_translated: Sequence[str],
    tgt: Sequence[str],
    params: BleuAlignParams = BleuAlignParams(),
    src: Sequence[str] | None = None,
) -> list[AlignmentLink]:
    """Align translated source sentences to target sentences.

    ``src`` is only used to check that the translation is line-aligned with
    the original source. Only interior gaps (between two anchors) are filled.
    """
    if src is not None and len(src) != len(src_translated):
        raise ValueError(f"translation has {len(src_translated)} lines, source has {len(src)}")
    if not src_translated or not tgt:
        return []
    sim = similarity_matrix(src_translated, tgt, params)
    anchors = best_anchors(sim, params.anchor_threshold)
    pairs = _fill_gaps(anchors, len(src_translated), len(tgt)) if params.gap_fill else anchors
    return [AlignmentLink((i,), (j,)) for i, j in pairs]
