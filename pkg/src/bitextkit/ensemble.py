"""Aligner ensembling: per-document union of the pairs each aligner extracted."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import SentencePair, collapse_ws


class EnsembleConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleInput:
    per_aligner: Mapping[str, Mapping[str, Sequence[SentencePair]]]

    def __post_init__(self) -> None:
        doc_sets = {name: frozenset(docs) for name, docs in self.per_aligner.items()}
        if len(set(doc_sets.values())) > 1:
            raise EnsembleConfigError(f"aligners cover different documents: { {k: sorted(v) for k, v in doc_sets.items()} }")

    @property
    def doc_ids(self) -> list[str]:
        for docs in self.per_aligner.values():
            return list(docs)
        return []


def _normalized(p: SentencePair) -> SentencePair:
    src, tgt = collapse_ws(p.src_text), collapse_ws(p.tgt_text)
    if (src, tgt) == p.key:
        return p
    return SentencePair(src, tgt, origin=p.origin)


def ensemble_union(inp: EnsembleInput, members: Iterable[str]) -> dict[str, list[SentencePair]]:
    """Union of member pair sets per document, sorted by (source, target).

    When several members produce the same pair, the copy from the first
    member (in sorted member order) is kept, including its origin.
    """
    members = sorted(set(members))
    if not members:
        raise EnsembleConfigError("no ensemble members given")
    unknown = [m for m in members if m not in inp.per_aligner]
    if unknown:
        raise EnsembleConfigError(f"unknown ensemble members {unknown}; known: {sorted(inp.per_aligner)}")
    out = {}
    for doc in inp.doc_ids:
        merged: dict[tuple[str, str], SentencePair] = {}
        for name in members:
            for pair in inp.per_aligner[name][doc]:
                p = _normalized(pair)
                merged.setdefault(p.key, p)
        out[doc] = [merged[k] for k in sorted(merged)]
    return out


def name_ensemble(members: Sequence[str]) -> str:
    """Concatenate member initials, e.g. ``["Bleualign", "Hunalign"]`` -> ``"BH"``."""
    if not members:
        raise ValueError("empty member list")
    return "".join(m[0].upper() for m in members)
