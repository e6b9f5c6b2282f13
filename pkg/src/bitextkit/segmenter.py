"""Rule-based sentence segmentation that treats Bengali and English alike.

A terminal run (``. ! ? । …`` and repeats) followed by optional closing
quotes/brackets and whitespace is a candidate boundary. The candidate is
rejected, most specific rule first, when the terminal sits inside a URL or
e-mail address, between two digits, right after a non-breaking token, or
inside a matched quote/bracket region (the boundary then moves to after the
closing character, if one follows). Apart from the danda, a boundary also
needs the next sentence to start with an upper-case or uncased letter, a
digit, an opening quote/bracket or a bullet mark; this under-splits rather
than over-splits.

Blank lines always separate sentences. Enumerators such as ``1.``, ``(ক)``
or ``(a)`` at the start of a line or sentence never end a sentence, and a
line that starts with one always starts a new sentence.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

DANDA = "।"
DEFAULT_TERMINALS = frozenset({".", "!", "?", DANDA, "…"})
DEFAULT_QUOTE_PAIRS = {
    "“": "”",
    "‘": "’",
    '"': '"',
    "«": "»",
    "‹": "›",
    "(": ")",
    "[": "]",
    "{": "}",
}
DEFAULT_BULLET_PATTERN = (
    r"(?:\(?[0-9০-৯]{1,3}[.)।]"  # 1.  1)  (1)  ১।
    r"|\([A-Za-zঀ-৿]{1,4}\)"  # (a)  (ক)  (iv)
    r"|[A-Za-zঅ-হ][.)]"  # a.  a)  ক)
    r"|[•◦▪‣●\-\*])"
)

_URL = re.compile(r"(?:https?://|ftp://|www\.)\S+|[\w.+-]+@[\w-]+(?:\.[\w-]+)+", re.UNICODE)
_PARAGRAPH_BREAK = re.compile(r"\n[ \t\r\f\v]*\n\s*")
_BULLET_SYMBOLS = "•◦▪‣●"


class RulesError(ValueError):
    pass


@dataclass(frozen=True)
class SegmenterRules:
    abbreviations: frozenset[str]
    terminal_chars: frozenset[str] = DEFAULT_TERMINALS
    quote_pairs: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_QUOTE_PAIRS))
    bullet_pattern: str = DEFAULT_BULLET_PATTERN

    def __post_init__(self) -> None:
        if not self.terminal_chars:
            raise RulesError("terminal_chars is empty")
        for a in self.abbreviations:
            if not a.endswith(".") or any(ch.isspace() for ch in a):
                raise RulesError(f"bad abbreviation entry {a!r}")
        object.__setattr__(self, "_bullet_re", re.compile(self.bullet_pattern + r"(?=\s|$)"))
        object.__setattr__(self, "_closers", frozenset(self.quote_pairs.values()))


@dataclass(frozen=True)
class Span:
    """A sentence as ``text[start:end]`` (code-point offsets)."""

    start: int
    end: int
    text: str

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad span [{self.start}, {self.end})")


def _read_lexicon(lines: Iterable[str], origin: str) -> set[str]:
    entries = set()
    for n, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if any(ch.isspace() for ch in line):
            raise RulesError(f"{origin}:{n}: abbreviation contains whitespace: {line!r}")
        entries.add(line if line.endswith(".") else line + ".")
    return entries


def _with_capitalized(entries: Iterable[str]) -> frozenset[str]:
    out = set(entries)
    out.update(e[0].upper() + e[1:] for e in entries if e[0].islower())
    return frozenset(out)


def default_abbreviations() -> frozenset[str]:
    text = resources.files("bitextkit.data").joinpath("abbreviations.txt").read_text(encoding="utf-8")
    return _with_capitalized(_read_lexicon(text.splitlines(), "abbreviations.txt"))


def default_rules() -> SegmenterRules:
    return SegmenterRules(default_abbreviations())


def load_rules(abbrev_path: str | Path | None = None, overrides: Mapping | None = None) -> SegmenterRules:
    """Merge the shipped defaults, an abbreviation file and optional overrides.

    ``overrides`` may carry ``abbreviations`` (extra entries),
    ``terminal_chars``, ``quote_pairs`` and ``bullet_pattern`` (replacements).
    """
    abbrevs = set(default_abbreviations())
    if abbrev_path is not None:
        path = Path(abbrev_path)
        if not path.is_file():
            raise FileNotFoundError(f"abbreviation file not found: {path}")
        abbrevs |= _read_lexicon(path.read_text(encoding="utf-8").splitlines(), str(path))
    overrides = dict(overrides or {})
    abbrevs |= _read_lexicon(overrides.pop("abbreviations", []), "overrides")
    kwargs = {}
    if "terminal_chars" in overrides:
        kwargs["terminal_chars"] = frozenset(overrides.pop("terminal_chars"))
    if "quote_pairs" in overrides:
        kwargs["quote_pairs"] = dict(overrides.pop("quote_pairs"))
    if "bullet_pattern" in overrides:
        kwargs["bullet_pattern"] = overrides.pop("bullet_pattern")
    if overrides:
        raise RulesError(f"unknown override keys: {sorted(overrides)}")
    return SegmenterRules(_with_capitalized(abbrevs), **kwargs)


def _quote_regions(text: str, pairs: Mapping[str, str]) -> list[int]:
    """Per-position count of matched quote/bracket regions that are still open.

    ``depth[p] > 0`` means a closer for an opener at or before ``p`` comes
    after ``p``. Unmatched openers and closers are ignored.
    """
    closer_to_opener: dict[str, list[str]] = {}
    for o, c in pairs.items():
        closer_to_opener.setdefault(c, []).append(o)
    stack: list[tuple[str, int]] = []
    regions = []
    for i, ch in enumerate(text):
        if ch in closer_to_opener:
            openers = closer_to_opener[ch]
            hit = next((k for k in range(len(stack) - 1, -1, -1) if stack[k][0] in openers), None)
            if hit is not None:
                regions.append((stack[hit][1], i))
                del stack[hit:]
                continue
            if ch in pairs and ch in openers:  # symmetric quote with nothing to close
                stack.append((ch, i))
            continue
        if ch in pairs:
            stack.append((ch, i))
    delta = [0] * (len(text) + 1)
    for o, c in regions:
        delta[o] += 1
        delta[c] -= 1
    depth, run = [], 0
    for d in delta[:-1]:
        run += d
        depth.append(run)
    return depth


def _opens_sentence(ch: str, rules: SegmenterRules) -> bool:
    if ch in rules.quote_pairs or ch in _BULLET_SYMBOLS:
        return True
    cat = unicodedata.category(ch)
    return cat in ("Lu", "Lt", "Lo", "Nd")


def _line_starts(text: str) -> list[int]:
    starts = [0]
    starts.extend(m.end() for m in re.finditer(r"\n", text))
    return starts


def _segment_paragraph(text: str, offset: int, rules: SegmenterRules, law_mode: bool) -> list[Span]:
    n = len(text)
    depth = _quote_regions(text, rules.quote_pairs)
    url_inside = [False] * n
    for m in _URL.finditer(text):
        end = m.end()
        while end > m.start() and text[end - 1] in ".,;:!?)]}'\"":
            end -= 1
        for p in range(m.start(), end):
            url_inside[p] = True
    protected = [False] * n
    bullet_re = rules._bullet_re

    def protect_bullet_at(pos: int) -> None:
        while pos < n and text[pos] in " \t":
            pos += 1
        m = bullet_re.match(text, pos)
        if m:
            for p in range(m.start(), m.end()):
                protected[p] = True

    line_cuts = []
    for ls in _line_starts(text):
        protect_bullet_at(ls)
        pos = ls
        while pos < n and text[pos] in " \t":
            pos += 1
        if ls > 0 and bullet_re.match(text, pos) and not _continues(text, ls, depth, rules):
            line_cuts.append(ls)

    terminals = rules.terminal_chars
    closers = rules._closers
    cuts = []
    i = 0
    while i < n:
        ch = text[i]
        if ch == ";" and law_mode:
            k = i + 1
            m = k
            while m < n and text[m].isspace():
                m += 1
            if m < n and "\n" in text[k:m]:
                cuts.append(k)
                protect_bullet_at(m)
            i += 1
            continue
        if ch not in terminals:
            i += 1
            continue
        j = i
        while j < n and text[j] in terminals:
            j += 1
        k = j
        while k < n and text[k] in closers:
            k += 1
        m = k
        while m < n and text[m].isspace():
            m += 1
        if m == k or m == n:
            i = j
            continue
        run = text[i:j]
        if _is_boundary(text, i, j, k, m, run, depth, url_inside, protected, rules):
            cuts.append(k)
            protect_bullet_at(m)
        i = j

    spans = []
    prev = 0
    for cut in sorted(set(cuts + line_cuts)) + [n]:
        piece = text[prev:cut]
        lead = len(piece) - len(piece.lstrip())
        body = piece.strip()
        if body:
            s = offset + prev + lead
            spans.append(Span(s, s + len(body), body))
        prev = cut
    return spans


def _continues(text: str, line_start: int, depth: list[int], rules: SegmenterRules) -> bool:
    """True when the line before ``line_start`` must not end a sentence."""
    before = text[:line_start].rstrip()
    if not before:
        return True
    if depth[len(before) - 1] > 0:
        return True
    return before.split()[-1] in rules.abbreviations


def _is_boundary(text, i, j, k, m, run, depth, url_inside, protected, rules) -> bool:
    # (d) URL / e-mail
    if any(url_inside[p] for p in range(i, j)):
        return False
    # (b) decimal point
    if run == "." and i > 0 and text[i - 1].isdigit() and j < len(text) and text[j].isdigit():
        return False
    # enumerator at line/sentence start
    if any(protected[p] for p in range(i, j)):
        return False
    # (a) non-breaking token
    if run == ".":
        start = i
        while start > 0 and not text[start - 1].isspace():
            start -= 1
        token = text[start:j].lstrip("".join(rules.quote_pairs))
        if token in rules.abbreviations:
            return False
    # (c) still inside a quote/bracket region after the closers
    if depth[k - 1] > 0:
        return False
    if DANDA in run:
        return True
    return _opens_sentence(text[m], rules)


def segment(text: str, rules: SegmenterRules | None = None, law_mode: bool = False) -> list[Span]:
    """Split ``text`` into sentence spans.

    ``law_mode`` additionally ends a sentence at a ``;`` that closes a line,
    which is right for bullet-structured legal text and wrong elsewhere.
    """
    rules = rules or default_rules()
    spans: list[Span] = []
    prev = 0
    for m in list(_PARAGRAPH_BREAK.finditer(text)) + [None]:
        end = m.start() if m else len(text)
        spans.extend(_segment_paragraph(text[prev:end], prev, rules, law_mode))
        if m:
            prev = m.end()
    return spans


def segment_sentences(text: str, rules: SegmenterRules | None = None, law_mode: bool = False) -> list[str]:
    """Segment and flatten each sentence onto one line."""
    return [" ".join(s.text.split()) for s in segment(text, rules, law_mode)]
