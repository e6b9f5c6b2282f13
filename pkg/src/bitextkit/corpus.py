"""Core corpus types and the plain-text file formats shared by every stage.

File formats (all UTF-8, LF line endings):

* segmented document: one sentence per line
* link file: one bead per line, ``<src ints>:<tgt ints>`` e.g. ``1,2:1`` or ``3:``
* pair file: ``src<TAB>tgt`` per line
* embeddings: text (one row of space-separated floats per line) or raw
  little-endian float32 with a ``<file>.meta`` sidecar holding ``dim=<d> rows=<n>``
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

_WS_CONTROL = re.compile(r"[\t\r\n\v\f\u0085\u2028\u2029]+")
_INTS = re.compile(r"^\d+(?:,\d+)*$")


class CorpusFormatError(ValueError):
    """Raised when an input file violates its format."""


class LinkParseError(CorpusFormatError):
    pass


def clean_sentence(text: str) -> str:
    """Replace TAB/newline runs with one space and trim."""
    return _WS_CONTROL.sub(" ", text).strip()


def collapse_ws(text: str) -> str:
    return " ".join(text.split())


def _check_field(text: str, what: str) -> None:
    if not text.strip():
        raise ValueError(f"{what} is empty")
    if _WS_CONTROL.search(text):
        raise ValueError(f"{what} contains a TAB or line break: {text!r}")


@dataclass(frozen=True, slots=True)
class Document:
    lang: str
    sentences: tuple[str, ...]
    doc_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(self.sentences))
        for i, s in enumerate(self.sentences):
            _check_field(s, f"{self.doc_id} sentence {i}")

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True, slots=True)
class DocumentPair:
    src: Document
    tgt: Document
    pair_id: str

    def __post_init__(self) -> None:
        if self.src.doc_id == self.tgt.doc_id:
            raise ValueError(f"{self.pair_id}: source and target share doc_id {self.src.doc_id!r}")
        if self.src.lang == self.tgt.lang:
            raise ValueError(f"{self.pair_id}: both sides are {self.src.lang!r}")


@dataclass(frozen=True, slots=True, order=True)
class AlignmentLink:
    """A bead: a group of source sentence indices linked to a group of target ones.

    One empty side marks an unaligned (1-0 or 0-1) bead.
    """

    src_idx: tuple[int, ...]
    tgt_idx: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "src_idx", tuple(self.src_idx))
        object.__setattr__(self, "tgt_idx", tuple(self.tgt_idx))
        if not self.src_idx and not self.tgt_idx:
            raise ValueError("link has both sides empty")
        for side in (self.src_idx, self.tgt_idx):
            if any(i < 0 for i in side):
                raise ValueError(f"negative index in {side}")
            if any(a >= b for a, b in zip(side, side[1:])):
                raise ValueError(f"indices not strictly increasing: {side}")

    @classmethod
    def of(cls, src: Iterable[int], tgt: Iterable[int]) -> AlignmentLink:
        """Build a link from arbitrary index iterables (sorted, deduplicated)."""
        return cls(tuple(sorted(set(src))), tuple(sorted(set(tgt))))

    @property
    def bead(self) -> tuple[int, int]:
        return len(self.src_idx), len(self.tgt_idx)

    @property
    def is_null(self) -> bool:
        return not self.src_idx or not self.tgt_idx


@dataclass(frozen=True, slots=True)
class SentencePair:
    src_text: str
    tgt_text: str
    origin: tuple[str, AlignmentLink] | None = field(default=None, compare=False, hash=False)

    def __post_init__(self) -> None:
        _check_field(self.src_text, "source text")
        _check_field(self.tgt_text, "target text")

    @property
    def key(self) -> tuple[str, str]:
        return self.src_text, self.tgt_text


@dataclass(frozen=True, slots=True)
class AlignReport:
    precision: float
    recall: float
    f1: float
    n_pred: int
    n_gold: int
    n_correct: int

    def __post_init__(self) -> None:
        if self.n_correct > min(self.n_pred, self.n_gold):
            raise ValueError("n_correct exceeds n_pred or n_gold")

    def as_dict(self) -> dict[str, float | int]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "n_pred": self.n_pred,
            "n_gold": self.n_gold,
            "n_correct": self.n_correct,
        }


# --- links -----------------------------------------------------------------


def _parse_side(side: str, line: str) -> tuple[int, ...]:
    if side == "":
        return ()
    if not _INTS.match(side):
        raise LinkParseError(f"malformed link line: {line!r}")
    return tuple(sorted({int(x) for x in side.split(",")}))


def parse_link_line(line: str) -> AlignmentLink:
    body = line.rstrip("\n")
    if body.count(":") != 1:
        raise LinkParseError(f"malformed link line: {line!r}")
    left, right = body.split(":")
    src, tgt = _parse_side(left, line), _parse_side(right, line)
    if not src and not tgt:
        raise LinkParseError(f"link line has both sides empty: {line!r}")
    return AlignmentLink(src, tgt)


def serialize_link(link: AlignmentLink) -> str:
    return ",".join(map(str, link.src_idx)) + ":" + ",".join(map(str, link.tgt_idx))


def expand_links(links: Iterable[AlignmentLink], pair: DocumentPair) -> list[SentencePair]:
    """Turn beads into sentence pairs; null beads produce nothing.

    Multi-sentence sides are joined with a single space in index order.
    """
    src, tgt = pair.src.sentences, pair.tgt.sentences
    out = []
    for link in links:
        for doc, idx in ((pair.src, link.src_idx), (pair.tgt, link.tgt_idx)):
            for i in idx:
                if i >= len(doc):
                    raise IndexError(f"{doc.doc_id}: sentence index {i} out of range (n={len(doc)})")
        if link.is_null:
            continue
        out.append(
            SentencePair(
                " ".join(src[i] for i in link.src_idx),
                " ".join(tgt[i] for i in link.tgt_idx),
                origin=(pair.pair_id, link),
            )
        )
    return out


# --- file I/O --------------------------------------------------------------


def read_text(path: str | Path) -> str:
    """Read a UTF-8 file, reporting the line and byte offset of any bad byte."""
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data.count(b"\n", 0, exc.start) + 1
        raise CorpusFormatError(f"{path}: invalid UTF-8 at byte {exc.start} (line {line})") from None


def _lines(path: str | Path) -> list[str]:
    text = read_text(path)
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def read_sentences(path: str | Path) -> list[str]:
    """One sentence per line; blank lines are skipped."""
    return [s for s in (clean_sentence(ln) for ln in _lines(path)) if s]


def write_sentences(path: str | Path, sentences: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s in sentences:
            f.write(clean_sentence(s) + "\n")


def read_document(path: str | Path, lang: str, doc_id: str | None = None) -> Document:
    return Document(lang, tuple(read_sentences(path)), doc_id or Path(path).stem)


def read_links(path: str | Path) -> list[AlignmentLink]:
    links = []
    for n, line in enumerate(_lines(path), 1):
        if not line.strip():
            continue
        try:
            links.append(parse_link_line(line.strip()))
        except LinkParseError as exc:
            raise LinkParseError(f"{path}:{n}: {exc}") from None
    return links


def write_links(path: str | Path, links: Iterable[AlignmentLink]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for link in links:
            f.write(serialize_link(link) + "\n")


def read_pairs(path: str | Path) -> list[SentencePair]:
    pairs = []
    for n, line in enumerate(_lines(path), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise CorpusFormatError(f"{path}:{n}: expected exactly one TAB, found {len(parts) - 1}")
        try:
            pairs.append(SentencePair(clean_sentence(parts[0]), clean_sentence(parts[1])))
        except ValueError as exc:
            raise CorpusFormatError(f"{path}:{n}: {exc}") from None
    return pairs


def write_pairs(path: str | Path, pairs: Iterable[SentencePair]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for p in pairs:
            f.write(f"{p.src_text}\t{p.tgt_text}\n")


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".meta")


def read_embeddings(path: str | Path) -> np.ndarray:
    """Load an embedding file as a float64 array of shape (rows, dim).

    Binary layout is chosen when a ``.meta`` sidecar exists next to the file.
    """
    path = Path(path)
    meta = _sidecar(path)
    if meta.exists():
        fields = dict(kv.split("=", 1) for kv in read_text(meta).split())
        try:
            dim, rows = int(fields["dim"]), int(fields["rows"])
        except (KeyError, ValueError):
            raise CorpusFormatError(f"{meta}: expected 'dim=<d> rows=<n>'") from None
        raw = np.fromfile(path, dtype="<f4")
        if raw.size != dim * rows:
            raise CorpusFormatError(f"{path}: {raw.size} floats, sidecar promises {rows}x{dim}")
        return raw.reshape(rows, dim).astype(np.float64)
    rows_ = []
    for n, line in enumerate(_lines(path), 1):
        if not line.strip():
            continue
        try:
            rows_.append([float(x) for x in line.split()])
        except ValueError:
            raise CorpusFormatError(f"{path}:{n}: non-numeric embedding value") from None
    if not rows_:
        return np.zeros((0, 0))
    width = {len(r) for r in rows_}
    if len(width) != 1:
        raise CorpusFormatError(f"{path}: rows have differing dimensions {sorted(width)}")
    return np.asarray(rows_, dtype=np.float64)


def write_embeddings(path: str | Path, matrix: np.ndarray, binary: bool = False) -> None:
    path = Path(path)
    matrix = np.asarray(matrix)
    if binary:
        matrix.astype("<f4").tofile(path)
        _sidecar(path).write_text(f"dim={matrix.shape[1]} rows={matrix.shape[0]}\n", encoding="utf-8")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in matrix:
            f.write(" ".join(repr(float(x)) for x in row) + "\n")


def pairs_from_tuples(items: Sequence[tuple[str, str]]) -> list[SentencePair]:
    return [SentencePair(a, b) for a, b in items]
