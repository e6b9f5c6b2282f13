"""Corpus hygiene: normalization, shared foreign strings, dangling Latin on the
Bengali side, deduplication, leakage removal and evaluation-set filters."""

from __future__ import annotations

import difflib
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import SentencePair, read_text
from .aligners.length import tokens

log = logging.getLogger(__name__)

_JOINERS = frozenset({"‌", "‍"})
_HASANTA = "্"
_BN_DIGITS = str.maketrans("0123456789", "০১২৩৪৫৬৭৮৯")
DEFAULT_LETTER_MAP = dict(zip("abcdefghijklmnopqrstuvwxyz", "কখগঘঙচছজঝঞটঠডঢণতথদধনপফবভমযর"))


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class NormalizationTable:
    char_map: Mapping[str, str]
    strip_set: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if any(not k for k in self.char_map):
            raise TableError("empty key in char_map")
        keys = sorted(self.char_map, key=len, reverse=True)
        pattern = re.compile("|".join(re.escape(k) for k in keys)) if keys else None
        object.__setattr__(self, "_pattern", pattern)
        for key, value in self.char_map.items():
            if normalize_text(value, self) != value:
                raise TableError(f"entry {key!r} -> {value!r} is not stable under the table")

    @classmethod
    def load(cls, path: str | Path) -> NormalizationTable:
        return cls._parse(read_text(path), str(path))

    @classmethod
    def default(cls) -> NormalizationTable:
        text = resources.files("bitextkit.data").joinpath("normalization.tsv").read_text(encoding="utf-8")
        return cls._parse(text, "normalization.tsv")

    @classmethod
    def _parse(cls, text: str, origin: str) -> NormalizationTable:
        char_map, strip = {}, set()
        for n, line in enumerate(text.split("\n"), 1):
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise TableError(f"{origin}:{n}: expected from<TAB>to")
            src, dst = line.split("\t", 1)
            if not src:
                raise TableError(f"{origin}:{n}: empty 'from' column")
            if dst == "" and len(src) == 1:
                strip.add(src)
            else:
                char_map[src] = dst
        strip |= _JOINERS
        return cls(char_map, frozenset(strip))


def _strip(text: str, strip_set: frozenset[str]) -> str:
    out = []
    for i, ch in enumerate(text):
        if ch in strip_set:
            # ZWJ/ZWNJ are meaningful next to a hasanta (conjunct shaping)
            if ch in _JOINERS and (
                (i > 0 and text[i - 1] == _HASANTA) or (i + 1 < len(text) and text[i + 1] == _HASANTA)
            ):
                out.append(ch)
            continue
        out.append(ch)
    return "".join(out)


def _normalize_once(text: str, table: NormalizationTable) -> str:
    text = unicodedata.normalize("NFC", text)
    if table._pattern is not None:
        text = table._pattern.sub(lambda m: table.char_map[m.group(0)], text)
    return _strip(text, table.strip_set)


def normalize_text(text: str, table: NormalizationTable) -> str:
    """NFC, then the table (longest key first), then stripping; repeated to a fixpoint."""
    for _ in range(16):
        new = _normalize_once(text, table)
        if new == text:
            return new
        text = new
    raise TableError(f"normalization does not converge on {text!r}")


def normalize_pair(pair: SentencePair, table: NormalizationTable) -> SentencePair | None:
    src = " ".join(normalize_text(pair.src_text, table).split())
    tgt = " ".join(normalize_text(pair.tgt_text, table).split())
    if not src or not tgt:
        return None
    return SentencePair(src, tgt, origin=pair.origin)


# --- shared foreign strings -------------------------------------------------


def _native(ch: str) -> bool:
    return "ঀ" <= ch <= "৿" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _foreign_runs(text: str) -> list[str]:
    runs, buf = [], []
    for ch in text:
        if _native(ch):
            if buf:
                runs.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        runs.append("".join(buf))
    return [r for r in runs if any(unicodedata.category(c).startswith("L") for c in r)]


def shared_foreign_strings(src: str, tgt: str, min_len: int = 10) -> list[str]:
    """Maximal common substrings of foreign-script runs, longest first.

    Only substrings with at least one letter count, so shared numbers and
    punctuation are left alone.
    """
    found = set()
    for a in _foreign_runs(src):
        for b in _foreign_runs(tgt):
            sm = difflib.SequenceMatcher(None, a, b, autojunk=False)
            for blk in sm.get_matching_blocks():
                piece = a[blk.a : blk.a + blk.size].strip()
                if len(piece) >= min_len and any(unicodedata.category(c).startswith("L") for c in piece):
                    found.add(piece)
    return sorted(found, key=lambda s: (-len(s), s))


def remove_shared_foreign(pair: SentencePair, min_len: int = 10) -> SentencePair | None:
    """Delete foreign strings present on both sides; None if a side becomes empty."""
    src, tgt = pair.src_text, pair.tgt_text
    pieces = shared_foreign_strings(src, tgt, min_len)
    if not pieces:
        return pair
    for piece in pieces:
        src, tgt = src.replace(piece, " "), tgt.replace(piece, " ")
    src, tgt = " ".join(src.split()), " ".join(tgt.split())
    if not src or not tgt:
        log.info("pair dropped: empty after removing shared foreign text %r", pieces)
        return None
    return SentencePair(src, tgt, origin=pair.origin)


# --- dangling Latin on the Bengali side ---------------------------------------

_TOKEN = re.compile(r"^([(\[]?)([A-Za-z0-9]+)([)\].,;:।]*)$")


def transliterate_dangling(bn_text: str, letter_map: Mapping[str, str] | None = None) -> str:
    """Map standalone ASCII numbers and Latin enumerator letters to Bengali.

    ``1971`` becomes ``১৯৭১``; ``(a)`` becomes ``(ক)`` with the default map.
    Letters count as enumerators only when bracketed or followed by ``)``/``.``.
    """
    letter_map = DEFAULT_LETTER_MAP if letter_map is None else letter_map
    parts = re.split(r"(\s+)", bn_text)
    for i in range(0, len(parts), 2):
        m = _TOKEN.match(parts[i])
        if not m:
            continue
        opener, core, tail = m.groups()
        if core.isdigit():
            parts[i] = opener + core.translate(_BN_DIGITS) + tail
        elif len(core) == 1 and (opener or tail[:1] in (")", ".")):
            mapped = letter_map.get(core.lower())
            if mapped:
                parts[i] = opener + mapped + tail
    return "".join(parts)


def transliterate_pair(pair: SentencePair, bn_side: str, letter_map: Mapping[str, str] | None = None) -> SentencePair:
    if bn_side == "src":
        return SentencePair(transliterate_dangling(pair.src_text, letter_map), pair.tgt_text, origin=pair.origin)
    if bn_side == "tgt":
        return SentencePair(pair.src_text, transliterate_dangling(pair.tgt_text, letter_map), origin=pair.origin)
    raise ValueError(f"bn_side must be 'src' or 'tgt', got {bn_side!r}")


# --- dedup and leakage ------------------------------------------------------


def dedup(pairs: Iterable[SentencePair]) -> list[SentencePair]:
    seen = set()
    out = []
    for p in pairs:
        if p.key not in seen:
            seen.add(p.key)
            out.append(p)
    return out


def remove_leakage(
    train: Iterable[SentencePair],
    eval_sets: Iterable[Iterable[SentencePair]],
    mode: str = "both-sides",
) -> list[SentencePair]:
    """Drop training pairs that also occur in any evaluation set.

    ``both-sides`` matches whole pairs; ``either-side`` drops a pair when its
    source matches any evaluation source or its target any evaluation target.
    """
    if mode not in ("both-sides", "either-side"):
        raise ValueError(f"unknown leakage mode {mode!r}")
    eval_pairs, eval_src, eval_tgt = set(), set(), set()
    for es in eval_sets:
        for p in es:
            eval_pairs.add(p.key)
            eval_src.add(p.src_text)
            eval_tgt.add(p.tgt_text)
    kept, dropped = [], 0
    for p in train:
        if p.key in eval_pairs or (mode == "either-side" and (p.src_text in eval_src or p.tgt_text in eval_tgt)):
            dropped += 1
            continue
        kept.append(p)
    log.info("leakage removal dropped %d pairs (%s)", dropped, mode)
    return kept


# --- evaluation-set quality filters --------------------------------------------


@dataclass(frozen=True)
class EvalFilterRules:
    vocab: frozenset[str] = frozenset()
    translit_lexicon: frozenset[str] = frozenset()
    min_chars: int = 50
    max_chars: int = 250
    max_translit_frac: float = 1 / 3
    max_oov_frac: float = 0.5
    max_oov_count: int = 5
    check_oov: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.min_chars < self.max_chars:
            raise ValueError("need 0 < min_chars < max_chars")
        for name in ("max_translit_frac", "max_oov_frac"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in (0, 1]")


@dataclass
class Rejection:
    pair: SentencePair
    rule: int
    reason: str


def _check(p: SentencePair, rules: EvalFilterRules) -> tuple[int, str] | None:
    for side, text in (("source", p.src_text), ("target", p.tgt_text)):
        if not rules.min_chars <= len(text) <= rules.max_chars:
            return 1, f"{side} has {len(text)} characters"
    for side, text in (("source", p.src_text), ("target", p.tgt_text)):
        toks = tokens(text)
        if toks:
            frac = sum(t in rules.translit_lexicon for t in toks) / len(toks)
            if frac > rules.max_translit_frac:
                return 2, f"{side} is {frac:.0%} transliterations"
    if rules.check_oov:
        for side, text in (("source", p.src_text), ("target", p.tgt_text)):
            toks = tokens(text)
            oov = sum(t not in rules.vocab for t in toks)
            if toks and (oov > rules.max_oov_count or oov / len(toks) > rules.max_oov_frac):
                return 3, f"{side} has {oov}/{len(toks)} OOV tokens"
    return None


def quality_filter_eval(
    pairs: Sequence[SentencePair], rules: EvalFilterRules
) -> tuple[list[SentencePair], list[Rejection]]:
    """Split pairs into kept and rejected; each rejection names its first failing rule.

    Rule 1 is the character-length window, rule 2 the transliteration share,
    rule 3 the OOV count/share against ``rules.vocab``.
    """
    if rules.check_oov and not rules.vocab:
        raise ValueError("OOV rule is active but the vocabulary is empty")
    kept, rejected = [], []
    for p in pairs:
        failure = _check(p, rules)
        if failure is None:
            kept.append(p)
        else:
            rejected.append(Rejection(p, *failure))
    return kept, rejected


def build_vocab(pairs: Iterable[SentencePair]) -> frozenset[str]:
    vocab = set()
    for p in pairs:
        vocab.update(tokens(p.src_text))
        vocab.update(tokens(p.tgt_text))
    return frozenset(vocab)


def read_token_set(path: str | Path) -> frozenset[str]:
    return frozenset(t.strip().lower() for t in read_text(path).splitlines() if t.strip() and not t.startswith("#"))


STEPS = ("normalize", "foreign", "translit", "dedup")


@dataclass
class PreprocessResult:
    pairs: list[SentencePair]
    counts: list[tuple[str, int, int]] = field(default_factory=list)


def run_steps(
    pairs: Sequence[SentencePair],
    steps: Sequence[str],
    table: NormalizationTable | None = None,
    bn_side: str = "src",
    min_foreign_len: int = 10,
    letter_map: Mapping[str, str] | None = None,
) -> PreprocessResult:
    """Apply preprocessing steps in order, recording (step, n_in, n_out)."""
    unknown = [s for s in steps if s not in STEPS]
    if unknown:
        raise ValueError(f"unknown preprocessing steps {unknown}; choose from {STEPS}")
    table = table or NormalizationTable.default()
    current = list(pairs)
    result = PreprocessResult(current)
    for step in steps:
        n_in = len(current)
        if step == "normalize":
            current = [q for q in (normalize_pair(p, table) for p in current) if q is not None]
        elif step == "foreign":
            current = [q for q in (remove_shared_foreign(p, min_foreign_len) for p in current) if q is not None]
        elif step == "translit":
            current = [transliterate_pair(p, bn_side, letter_map) for p in current]
        else:
            current = dedup(current)
        result.counts.append((step, n_in, len(current)))
    result.pairs = current
    return result
