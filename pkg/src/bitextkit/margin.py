"""Margin-based filtering of sentence pairs with precomputed embeddings.

A pair (x, y) is scored with the ratio margin

    cos(x, y) / (sum(nn_x) / 2k + sum(nn_y) / 2k)

where ``nn_x`` are the cosines of x to its k nearest target-side vectors and
``nn_y`` those of y to its k nearest source-side vectors, both searched inside
the pair's neighbourhood (its document, its batch, or the whole corpus). The
pair's own partner is excluded from its neighbour lists.

Batch mode shuffles pair indices with a Fisher-Yates shuffle driven by
SplitMix64 (seeded from the config), cuts them into consecutive batches of
``batch_size`` and filters each batch on its own. Rows inside a batch are
processed in original input order, so a single batch covering the whole input
reproduces global mode exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import SentencePair

MODES = ("document", "batch", "global")
_MASK64 = (1 << 64) - 1
_CHUNK_FLOATS = 1 << 24


@dataclass(frozen=True)
class EmbeddingMatrix:
    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"embeddings must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("embeddings contain NaN or Inf")
        norms = np.linalg.norm(arr, axis=1)
        if arr.shape[0] and np.any(norms == 0):
            raise ValueError(f"zero embedding row(s): {np.flatnonzero(norms == 0)[:10].tolist()}")
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return self.data.shape[0]

    def unit(self) -> np.ndarray:
        return self.data / np.linalg.norm(self.data, axis=1, keepdims=True)


@dataclass(frozen=True)
class FilterParams:
    margin: float = 0.96
    k: int = 4
    mode: str = "document"
    batch_size: int = 1000
    seed: int = 42

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.margin < 0:
            raise ValueError("margin must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class FilterReport:
    n_in: int
    n_kept: int
    mode: str = "global"
    n_degenerate: int = 0
    units: list[dict] = field(default_factory=list)

    @property
    def pct_filtered(self) -> float:
        return 100.0 * (self.n_in - self.n_kept) / self.n_in if self.n_in else 0.0

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n_in": self.n_in,
            "n_kept": self.n_kept,
            "pct_filtered": self.pct_filtered,
            "n_degenerate": self.n_degenerate,
            "units": self.units,
        }


def cosine(x: Sequence[float], y: Sequence[float]) -> float:
    x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch {x.shape} vs {y.shape}")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ValueError("cosine of a zero vector")
    return float(np.clip(np.dot(x, y) / (nx * ny), -1.0, 1.0))


def knn(pool: EmbeddingMatrix, query_index: int, k: int) -> list[int]:
    """Exact k nearest rows to ``pool[query_index]`` by cosine, excluding itself.

    Ties go to the lower index. A pool with fewer than k other rows yields all
    of them.
    """
    unit = pool.unit()
    sims = unit @ unit[query_index]
    order = sorted((i for i in range(len(pool)) if i != query_index), key=lambda i: (-sims[i], i))
    return order[:k]


def margin_score(x, y, nn_x: Sequence[float], nn_y: Sequence[float]) -> float:
    """Ratio margin; NaN when the neighbour average is exactly zero or absent."""
    if not len(nn_x) or not len(nn_y):
        return math.nan
    denom = sum(nn_x) / (2 * len(nn_x)) + sum(nn_y) / (2 * len(nn_y))
    if denom == 0:
        return math.nan
    return cosine(x, y) / denom


def _topk_sums(a: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    """For each row i of a: sum of the k largest cosines to rows of b other than i."""
    n = a.shape[0]
    out = np.empty(n)
    step = max(1, _CHUNK_FLOATS // max(n, 1))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        sims = a[lo:hi] @ b.T
        sims[np.arange(hi - lo), np.arange(lo, hi)] = -np.inf
        top = -np.partition(-sims, k - 1, axis=1)[:, :k]
        out[lo:hi] = np.sort(top, axis=1).sum(axis=1)
    return out


def pool_scores(src: np.ndarray, tgt: np.ndarray, k: int) -> tuple[np.ndarray, bool]:
    """Margin scores for row-aligned unit vectors forming one neighbourhood.

    Returns the scores (NaN where undefined) and whether the pool was too
    small for k neighbours.
    """
    n = src.shape[0]
    if n < 2:
        return np.full(n, np.nan), True
    k_eff = min(k, n - 1)
    direct = np.einsum("ij,ij->i", src, tgt)
    denom = _topk_sums(src, tgt, k_eff) / (2 * k_eff) + _topk_sums(tgt, src, k_eff) / (2 * k_eff)
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.where(denom == 0, np.nan, direct / denom)
    return scores, k_eff < k


# --- shuffling ---------------------------------------------------------------


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection sampling."""
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = self.next()
            if r < limit:
                return r % bound


def fisher_yates(n: int, seed: int) -> list[int]:
    perm = list(range(n))
    rng = SplitMix64(seed)
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def batch_partition(n: int, batch_size: int, seed: int) -> list[np.ndarray]:
    """Shuffle 0..n-1 and cut into ceil(n / batch_size) batches, each sorted."""
    perm = fisher_yates(n, seed)
    return [np.sort(np.asarray(perm[lo : lo + batch_size], dtype=np.int64)) for lo in range(0, n, batch_size)]


# --- filtering ---------------------------------------------------------------


def _units(n: int, params: FilterParams, groups: Sequence[str] | None) -> list[tuple[str, np.ndarray]]:
    if params.mode == "global":
        return [("global", np.arange(n))]
    if params.mode == "batch":
        return [(f"batch-{b}", idx) for b, idx in enumerate(batch_partition(n, params.batch_size, params.seed))]
    if groups is None or len(groups) != n:
        raise ValueError("document mode needs one document id per pair")
    by_doc: dict[str, list[int]] = {}
    for i, g in enumerate(groups):
        by_doc.setdefault(g, []).append(i)
    return [(g, np.asarray(idx, dtype=np.int64)) for g, idx in by_doc.items()]


def margin_scores(
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    params: FilterParams,
    groups: Sequence[str] | None = None,
) -> tuple[np.ndarray, list[tuple[str, np.ndarray]], int]:
    """Score every pair within its neighbourhood unit.

    Returns scores, the units (name, row indices) and the number of pairs in
    units too small for k neighbours.
    """
    if len(src_emb) != len(tgt_emb):
        raise ValueError(f"{len(src_emb)} source rows vs {len(tgt_emb)} target rows")
    if len(src_emb) and src_emb.dim != tgt_emb.dim:
        raise ValueError("source and target embeddings differ in dimension")
    n = len(src_emb)
    src, tgt = (src_emb.unit(), tgt_emb.unit()) if n else (np.zeros((0, 1)), np.zeros((0, 1)))
    scores = np.full(n, np.nan)
    degenerate = 0
    units = _units(n, params, groups)
    for _, idx in units:
        s, small = pool_scores(src[idx], tgt[idx], params.k)
        scores[idx] = s
        degenerate += len(idx) if small else 0
    return scores, units, degenerate


def keep_mask(scores: np.ndarray, margin: float) -> np.ndarray:
    return np.nan_to_num(scores, nan=-np.inf) >= margin


def filter_pool(
    pairs: Sequence[SentencePair],
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    params: FilterParams,
    groups: Sequence[str] | None = None,
) -> tuple[list[SentencePair], FilterReport]:
    """Keep pairs whose margin score reaches ``params.margin``; input order is preserved."""
    if len(pairs) != len(src_emb) or len(pairs) != len(tgt_emb):
        raise ValueError(f"{len(pairs)} pairs but {len(src_emb)}/{len(tgt_emb)} embedding rows")
    scores, units, degenerate = margin_scores(src_emb, tgt_emb, params, groups)
    keep = keep_mask(scores, params.margin)
    kept = [p for p, k in zip(pairs, keep) if k]
    report = FilterReport(
        n_in=len(pairs),
        n_kept=len(kept),
        mode=params.mode,
        n_degenerate=degenerate,
        units=[{"unit": name, "n_in": int(len(idx)), "n_kept": int(keep[idx].sum())} for name, idx in units],
    )
    return kept, report


def batch_filter(
    pairs: Sequence[SentencePair],
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    params: FilterParams,
) -> tuple[list[SentencePair], FilterReport]:
    if params.mode != "batch":
        raise ValueError("batch_filter needs mode='batch'")
    return filter_pool(pairs, src_emb, tgt_emb, params)
