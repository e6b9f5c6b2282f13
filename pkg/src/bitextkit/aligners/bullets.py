"""Deterministic aligner for section/bullet structured legal texts.

Both sides are cut into units at line ends carrying ``;``, ``।`` or ``.``,
and before lines opening with an enumerator (``(1)``, ``(ক)``, ``(a)``...).
Sections start at numbered headings (``5.`` / ``৫।``, optionally prefixed by
``Section``/``ধারা``) and are paired by number. Paired sections with the
same unit count are linked position by position; others are skipped.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from ..corpus import AlignmentLink

log = logging.getLogger(__name__)

_BN_DIGITS = str.maketrans("০১২৩৪৫৬৭৮৯", "0123456789")
_SECTION = re.compile(r"^\s*(?:Section|ধারা)?\s*([0-9০-৯]+[A-Za-z]?)\s*[.।]\s")
_ENUMERATOR = re.compile(r"^\s*(?:\([0-9০-৯]{1,3}\)|\([A-Za-zঀ-৿]{1,4}\)|[0-9০-৯]{1,3}\)|[a-zক-হ]\))\s")
_UNIT_END = (";", "।", ".")


@dataclass
class BulletAlignment:
    links: list[AlignmentLink]
    src_units: list[str]
    tgt_units: list[str]
    skipped: list[tuple[str, int, int]] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


def _sections(text: str) -> list[tuple[str, list[str]]]:
    sections: list[tuple[str, list[str]]] = []
    current: list[str] | None = None
    for line in text.splitlines():
        m = _SECTION.match(line)
        if m:
            current = []
            sections.append((m.group(1).translate(_BN_DIGITS), current))
        elif current is None:
            if not line.strip():
                continue
            current = []
            sections.append(("", current))
        current.append(line)
    return sections


def split_units(lines: list[str]) -> list[str]:
    units, buf = [], []
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if buf and _ENUMERATOR.match(line):
            units.append(" ".join(buf))
            buf = []
        buf.append(stripped)
        if stripped.endswith(_UNIT_END):
            units.append(" ".join(buf))
            buf = []
    if buf:
        units.append(" ".join(buf))
    return units


def align_bullets(src_doc: str, tgt_doc: str) -> BulletAlignment:
    src_secs, tgt_secs = _sections(src_doc), _sections(tgt_doc)
    result = BulletAlignment([], [], [])
    if not src_secs or not tgt_secs:
        if src_secs or tgt_secs:
            result.diagnostics.append("one side has no parseable content")
        return result
    tgt_index: dict[str, tuple[int, int]] = {}
    for key, lines in tgt_secs:
        units = split_units(lines)
        if key in tgt_index:
            result.diagnostics.append(f"duplicate target section {key!r} ignored")
        else:
            tgt_index[key] = (len(result.tgt_units), len(units))
        result.tgt_units.extend(units)
    seen = set()
    for key, lines in src_secs:
        units = split_units(lines)
        offset = len(result.src_units)
        result.src_units.extend(units)
        if key in seen or key not in tgt_index:
            result.skipped.append((key, len(units), 0))
            result.diagnostics.append(f"section {key!r}: no counterpart on the target side")
            continue
        seen.add(key)
        t0, n_tgt = tgt_index[key]
        if len(units) != n_tgt:
            result.skipped.append((key, len(units), n_tgt))
            result.diagnostics.append(f"section {key!r}: {len(units)} source units vs {n_tgt} target units, skipped")
            continue
        result.links.extend(AlignmentLink((offset + d,), (t0 + d,)) for d in range(len(units)))
    for msg in result.diagnostics:
        log.info(msg)
    return result
