"""Length-based sentence alignment with an optional bilingual-dictionary boost.

The core is the Gale-Church model over character lengths. When a lexicon is
given, a bead's cost is lowered by ``dict_weight`` times the share of its
source tokens that have a listed translation on its target side.
"""

from __future__ import annotations

import math
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from scipy.special import log_ndtr

from ..corpus import AlignmentLink, read_text

Bead = tuple[int, int]
BEADS: tuple[Bead, ...] = ((1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2))
DEFAULT_PRIORS: dict[Bead, float] = {
    (1, 1): 0.89,
    (1, 0): 0.0099,
    (0, 1): 0.0099,
    (2, 1): 0.089,
    (1, 2): 0.089,
    (2, 2): 0.011,
}


@dataclass(frozen=True)
class BilingualLexicon:
    entries: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        for src, tgts in self.entries.items():
            for tok in (src, *tgts):
                if tok != tok.lower() or any(ch.isspace() for ch in tok) or not tok:
                    raise ValueError(f"lexicon token must be lowercase without whitespace: {tok!r}")

    @classmethod
    def from_pairs(cls, pairs) -> BilingualLexicon:
        merged: dict[str, set[str]] = defaultdict(set)
        for s, t in pairs:
            merged[s.lower()].add(t.lower())
        return cls({k: frozenset(v) for k, v in merged.items()})

    @classmethod
    def load(cls, path: str | Path) -> BilingualLexicon:
        """Read ``src<TAB>tgt`` lines; repeated sources merge into one set."""
        pairs = []
        for n, line in enumerate(read_text(path).splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.strip().split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{n}: expected src<TAB>tgt")
            pairs.append((parts[0].strip(), parts[1].strip()))
        return cls.from_pairs(pairs)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class LengthAlignParams:
    mean_ratio: float = 1.0
    variance: float = 6.8
    bead_priors: Mapping[Bead, float] = field(default_factory=lambda: dict(DEFAULT_PRIORS))
    dictionary: BilingualLexicon | None = None
    dict_weight: float = 0.35

    def __post_init__(self) -> None:
        if self.variance <= 0:
            raise ValueError("variance must be positive")
        if set(self.bead_priors) != set(BEADS):
            raise ValueError(f"bead_priors must cover exactly {BEADS}")
        if any(p <= 0 for p in self.bead_priors.values()) or sum(self.bead_priors.values()) > 1.2:
            raise ValueError("bead priors must be positive and sum to at most 1.2")
        if not 0 <= self.dict_weight <= 1:
            raise ValueError("dict_weight must lie in [0, 1]")


def gale_church_cost(l1: int, l2: int, bead: Bead, params: LengthAlignParams = LengthAlignParams()) -> float:
    """-log prior(bead) - log P(|delta|) with a two-sided normal tail."""
    if bead not in params.bead_priors:
        raise ValueError(f"unknown bead type {bead}")
    if l1 < 0 or l2 < 0 or l1 == l2 == 0:
        raise ValueError(f"invalid lengths {l1}, {l2}")
    c, s2 = params.mean_ratio, params.variance
    if l1 > 0:
        delta = (l2 - l1 * c) / math.sqrt(l1 * s2)
    else:
        delta = (l2 - l1 * c) / math.sqrt((l1 + l2 / c) / 2 * s2)
    # log(2 * (1 - Phi(|d|))) = log 2 + log Phi(-|d|)
    log_tail = math.log(2.0) + float(log_ndtr(-abs(delta)))
    return -math.log(params.bead_priors[bead]) - min(log_tail, 0.0)


def tokens(text: str) -> list[str]:
    """Lowercased whitespace tokens with surrounding punctuation removed."""
    out = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and unicodedata.category(raw[start])[0] in "PS":
            start += 1
        while end > start and unicodedata.category(raw[end - 1])[0] in "PS":
            end -= 1
        if start < end:
            out.append(raw[start:end])
    return out


def dictionary_overlap(src_tokens: Sequence[str], tgt_tokens: Sequence[str], lexicon: BilingualLexicon) -> float:
    """Fraction of source tokens with at least one listed translation among the target tokens."""
    if not src_tokens:
        return 0.0
    tgt = set(tgt_tokens)
    hits = sum(1 for t in src_tokens if lexicon.entries.get(t, frozenset()) & tgt)
    return hits / len(src_tokens)


class BeadCoster:
    """Cost of any bead ending at (i, j); shared by the DP and exhaustive search."""

    def __init__(self, src: Sequence[str], tgt: Sequence[str], params: LengthAlignParams):
        self.params = params
        self.src_len = [len(s) for s in src]
        self.tgt_len = [len(t) for t in tgt]
        lex = params.dictionary
        self.src_tok = [tokens(s) for s in src] if lex else None
        self.tgt_tok = [tokens(t) for t in tgt] if lex else None

    def __call__(self, i: int, j: int, bead: Bead) -> float:
        di, dj = bead
        l1 = sum(self.src_len[i - di : i])
        l2 = sum(self.tgt_len[j - dj : j])
        cost = gale_church_cost(l1, l2, bead, self.params)
        if self.params.dictionary is not None and di and dj:
            s_tok = [t for k in range(i - di, i) for t in self.src_tok[k]]
            t_tok = [t for k in range(j - dj, j) for t in self.tgt_tok[k]]
            cost -= self.params.dict_weight * dictionary_overlap(s_tok, t_tok, self.params.dictionary)
        return cost


def bead_to_link(i: int, j: int, bead: Bead) -> AlignmentLink:
    di, dj = bead
    return AlignmentLink(tuple(range(i - di, i)), tuple(range(j - dj, j)))


def align_length_with_cost(
    src: Sequence[str], tgt: Sequence[str], params: LengthAlignParams = LengthAlignParams()
) -> tuple[list[AlignmentLink], float]:
    if not src or not tgt:
        raise ValueError("both sentence lists must be non-empty")
    n, m = len(src), len(tgt)
    coster = BeadCoster(src, tgt, params)
    inf = math.inf
    cost = [[inf] * (m + 1) for _ in range(n + 1)]
    back: list[list[Bead | None]] = [[None] * (m + 1) for _ in range(n + 1)]
    cost[0][0] = 0.0
    for i in range(n + 1):
        row = cost[i]
        for j in range(m + 1):
            if i == j == 0:
                continue
            best, best_bead = inf, None
            for bead in BEADS:
                di, dj = bead
                if di > i or dj > j:
                    continue
                prev = cost[i - di][j - dj]
                if prev == inf:
                    continue
                c = prev + coster(i, j, bead)
                if c < best:
                    best, best_bead = c, bead
            row[j] = best
            back[i][j] = best_bead
    links = []
    i, j = n, m
    while i or j:
        bead = back[i][j]
        links.append(bead_to_link(i, j, bead))
        i, j = i - bead[0], j - bead[1]
    links.reverse()
    return links, cost[n][m]


def align_length(src: Sequence[str], tgt: Sequence[str], params: LengthAlignParams = LengthAlignParams()) -> list[AlignmentLink]:
    """Minimum-cost monotone bead sequence covering both sides exactly once."""
    return align_length_with_cost(src, tgt, params)[0]
