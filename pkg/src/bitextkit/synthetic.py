"""Constructed corpora with known answers, used by tests and demos."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import AlignmentLink, SentencePair, write_embeddings, write_pairs, write_sentences
from .aligners.length import Bead


@dataclass
class EmbeddedCorpus:
    pairs: list[SentencePair]
    src: np.ndarray
    tgt: np.ndarray
    good: np.ndarray
    groups: list[str] | None = None

    @property
    def gold_pairs(self) -> list[SentencePair]:
        return [p for p, g in zip(self.pairs, self.good) if g]


def _text_pairs(n: int, prefix: str = "") -> list[SentencePair]:
    return [SentencePair(f"{prefix}src {i}", f"{prefix}tgt {i}") for i in range(n)]


def planted_corpus(n_matched: int = 100, n_mismatched: int = 10) -> EmbeddedCorpus:
    """Orthogonal construction with exactly computable margin scores.

    Matched pairs share a common direction C (weight 0.2 in squared norm) and
    have partner cosine 0.95, so any two non-partners have cosine 0.2.
    Mismatched pairs share a hub H (weight 0.4) and have partner cosine 0.1,
    so they look 0.4-similar to each other but barely match their partners.
    """
    dim = 2 + 2 * (n_matched + n_mismatched)
    c_axis, h_axis = 0, 1
    n = n_matched + n_mismatched
    src, tgt = np.zeros((n, dim)), np.zeros((n, dim))
    # matched: x = a C + b u, y = a C + b (r u + s v), with <x,y> = a^2 + b^2 r
    a, b = math.sqrt(0.2), math.sqrt(0.8)
    r = (0.95 - 0.2) / 0.8
    s = math.sqrt(1 - r * r)
    for i in range(n_matched):
        u, v = 2 + 2 * i, 3 + 2 * i
        src[i, c_axis], src[i, u] = a, b
        tgt[i, c_axis], tgt[i, u], tgt[i, v] = a, b * r, b * s
    a, b = math.sqrt(0.4), math.sqrt(0.6)
    r = (0.1 - 0.4) / 0.6
    s = math.sqrt(1 - r * r)
    for j in range(n_mismatched):
        i = n_matched + j
        u, v = 2 + 2 * i, 3 + 2 * i
        src[i, h_axis], src[i, u] = a, b
        tgt[i, h_axis], tgt[i, u], tgt[i, v] = a, b * r, b * s
    good = np.array([True] * n_matched + [False] * n_mismatched)
    return EmbeddedCorpus(_text_pairs(n), src, tgt, good)


def _unit_rows(m: np.ndarray) -> np.ndarray:
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def _noisy_pairs(rng: np.random.Generator, rho: np.ndarray, dim: int, shared: float) -> tuple[np.ndarray, np.ndarray]:
    """Row pairs whose private parts correlate with coefficient ``rho``.

    Every row also carries a common direction of squared weight ``shared``.
    """
    n = len(rho)
    g = _unit_rows(rng.standard_normal((n, dim)))
    h = _unit_rows(rng.standard_normal((n, dim)))
    a, b = math.sqrt(shared), math.sqrt(1 - shared)
    x = np.hstack([b * g, np.full((n, 1), a)])
    mixed = rho[:, None] * g + np.sqrt(1 - rho**2)[:, None] * h
    y = np.hstack([b * _unit_rows(mixed), np.full((n, 1), a)])
    return x, y


def sweep_corpus(
    n_good: int = 240, n_noise: int = 200, n_missing: int = 20, dim: int = 64, seed: int = 9
) -> tuple[EmbeddedCorpus, list[SentencePair]]:
    """Candidate pairs whose margin scores straddle 0.90-1.10.

    Correct pairs get higher partner correlation than noise pairs, with
    overlapping ranges, so precision rises and recall falls across the sweep.
    Also returns the gold set, which holds every correct candidate plus
    ``n_missing`` pairs no candidate covers.
    """
    rng = np.random.default_rng(seed)
    rho = np.concatenate([rng.uniform(0.35, 0.9, n_good), rng.uniform(0.1, 0.4, n_noise)])
    order = rng.permutation(n_good + n_noise)
    rho = rho[order]
    good = order < n_good
    x, y = _noisy_pairs(rng, rho, dim, shared=0.3)
    pairs = _text_pairs(len(rho))
    corpus = EmbeddedCorpus(pairs, x, y, good)
    gold = corpus.gold_pairs + _text_pairs(n_missing, prefix="missing ")
    return corpus, gold


def neighbourhood_corpus(
    n_docs: int = 10, per_doc: int = 300, noise_frac: float = 0.05, dim: int = 48, seed: int = 11
) -> EmbeddedCorpus:
    """Multi-document corpus for comparing neighbourhood choices.

    Each document holds mostly clean pairs plus a share of noisy ones. Rows
    are random, so a larger search pool finds closer neighbours by chance and
    scores drop, which makes wider neighbourhoods filter more.
    """
    rng = np.random.default_rng(seed)
    n = n_docs * per_doc
    noise = rng.random(n) < noise_frac
    rho = np.where(noise, rng.uniform(0.0, 0.3, n), rng.uniform(0.5, 0.95, n))
    x, y = _noisy_pairs(rng, rho, dim, shared=0.3)
    groups = [f"doc{d:02d}" for d in range(n_docs) for _ in range(per_doc)]
    return EmbeddedCorpus(_text_pairs(n), x, y, ~noise, groups)


# --- length-aligned documents --------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _sentence(rng: random.Random, length: int) -> str:
    chars = [rng.choice(_LETTERS) for _ in range(length)]
    for pos in range(rng.randint(3, 7), length - 2, rng.randint(4, 9)):
        chars[pos] = " "
    return "".join(chars).strip().ljust(length, "x")


def bead_document(
    n_beads: int,
    rng: random.Random,
    bead_weights: dict[Bead, float] | None = None,
    jitter: int = 2,
) -> tuple[list[str], list[str], list[AlignmentLink]]:
    """Source/target sentences generated from a known bead sequence.

    Each bead's target side has the same total length as its source side, up
    to ``jitter`` characters, so the length model's optimum is the generator.
    Null beads can be requested but have no length match by construction.
    """
    bead_weights = bead_weights or {(1, 1): 0.8, (2, 1): 0.1, (1, 2): 0.1}
    beads, weights = zip(*bead_weights.items())
    src, tgt, links = [], [], []
    for _ in range(n_beads):
        ns, nt = rng.choices(beads, weights)[0]
        s_lens = [rng.randint(20, 160) for _ in range(ns)]
        total = sum(s_lens)
        if nt == 0:
            t_lens = []
        elif nt == 1:
            t_lens = [total + rng.randint(-jitter, jitter)] if ns else [rng.randint(20, 160)]
        else:
            if ns == 0:
                t_lens = [rng.randint(20, 160) for _ in range(nt)]
            else:
                cut = rng.randint(total // 3, 2 * total // 3)
                t_lens = [cut, total - cut + rng.randint(-jitter, jitter)]
        links.append(
            AlignmentLink(tuple(range(len(src), len(src) + ns)), tuple(range(len(tgt), len(tgt) + nt)))
        )
        src += [_sentence(rng, n) for n in s_lens]
        tgt += [_sentence(rng, max(n, 5)) for n in t_lens]
    return src, tgt, links


# --- end-to-end fixture --------------------------------------------------------

_CIPHER = dict(zip(_LETTERS, "অআইঈউঊঋএঐওঔকখগঘঙচছজঝঞটঠডঢ"))
_SPECIAL = {"dr.": "ডা.", "a.": "এ.", "k.": "কে.", "fazlul": "ফজলুল", "haque": "হক", "rahman": "রহমান"}
_VOCAB = (
    "river market school village farmer teacher water bridge morning evening city road "
    "festival harvest rain winter summer garden library hospital doctor student family "
    "government report money price train station museum history language music dance "
    "children mother father brother sister friend neighbour street house window light "
    "paper letter story book writer poet painter song poem country border ocean island "
    "mountain forest animal bird fish tiger elephant boat fisherman season flood storm "
    "wind cloud river bank office worker factory cotton rice wheat tea garden coffee "
    "election voter minister parliament court judge law policy budget project network "
    "computer phone message signal engine machine energy power sunlight heat cold"
).split()
_VERBS = "built visited opened closed praised watched carried found wrote sold bought reached crossed".split()


def _cipher_word(word: str) -> str:
    low = word.lower()
    if low in _SPECIAL:
        return _SPECIAL[low]
    return "".join(_CIPHER.get(ch, ch) for ch in low)


def _word_vector(word: str, dim: int) -> np.ndarray:
    seed = int.from_bytes(word.encode("utf-8"), "little") % (2**32)
    return np.random.default_rng(seed).standard_normal(dim)


@dataclass
class _Bead:
    bn: list[list[str]]
    en: list[list[str]]
    bn_extra: dict[int, str] | None = None


def _sentence_words(rng: random.Random, lo: int = 6, hi: int = 12) -> list[str]:
    words = [rng.choice(_VOCAB) for _ in range(rng.randint(lo, hi))]
    words.insert(rng.randint(1, len(words) - 1), rng.choice(_VERBS))
    return words


def _en_text(words: list[str]) -> str:
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def _bn_text(words: list[str]) -> str:
    return " ".join(_cipher_word(w) for w in words) + "।"


def make_fixture(out_dir: str | Path, seed: int = 2020, dim: int = 32) -> dict:
    """Write a five-document bilingual fixture with gold, lexicon and eval set.

    The source side is a letter cipher of the English side in Bengali script,
    so lengths and dictionary overlap behave as in real parallel text. Returns
    the expected counts that a correct pipeline run must reproduce.
    """
    out = Path(out_dir)
    (out / "docs").mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    noise = np.random.default_rng(seed)
    gold: list[SentencePair] = []
    manifest, expected_docs = [], {}
    leak_candidates = []
    plans = {
        "doc0": ["initials", "title"],
        "doc1": ["quotes"],
        "doc2": ["year"],
        "doc3": ["foreign", "shared"],
        "doc4": ["shared", "extra_en", "extra_bn"],
    }
    shared_words = _sentence_words(random.Random(seed + 1))
    for doc_id, features in plans.items():
        beads: list[tuple[list[str], list[str], list[str]]] = []  # bn sentences, en sentences, mt lines
        for b in range(rng.randint(11, 14)):
            kind = rng.choices(["11", "21", "12"], [0.8, 0.1, 0.1])[0]
            if kind == "11":
                w = _sentence_words(rng)
                beads.append(([_bn_text(w)], [_en_text(w)], [w]))
            elif kind == "21":
                w1, w2 = _sentence_words(rng, 4, 7), _sentence_words(rng, 4, 7)
                beads.append(([_bn_text(w1), _bn_text(w2)], [_en_text(w1 + ["and"] + w2)], [w1, w2]))
            else:
                w1, w2 = _sentence_words(rng, 4, 7), _sentence_words(rng, 4, 7)
                beads.append(([_bn_text(w1 + ["and"] + w2)], [_en_text(w1), _en_text(w2)], [w1 + ["and"] + w2]))
        specials = []
        if "initials" in features:
            w = ["A.", "K.", "Fazlul", "Haque"] + _sentence_words(rng, 5, 8)
            specials.append((["এ. কে. ফজলুল হক " + _bn_text(w[4:])], [_en_text(w)], [w]))
        if "title" in features:
            w = ["Dr.", "Rahman"] + _sentence_words(rng, 5, 8)
            specials.append((["ডা. রহমান " + _bn_text(w[2:])], [_en_text(w)], [w]))
        if "quotes" in features:
            w1, w2 = _sentence_words(rng, 4, 6), _sentence_words(rng, 4, 6)
            bn = "“" + " ".join(map(_cipher_word, w1)) + "” " + _bn_text(w2)
            en = "“" + _en_text(w1)[:-1] + "” " + " ".join(w2) + "."
            specials.append(([bn], [en], [w1 + w2]))
        if "year" in features:
            w = _sentence_words(rng, 5, 8)
            w.insert(2, "1971")
            specials.append(([_bn_text(w)], [_en_text(w)], [w]))
        if "foreign" in features:
            w = _sentence_words(rng, 5, 8)
            bn = " ".join(map(_cipher_word, w)) + " Привет, мир!।"
            specials.append(([bn], [_en_text(w)[:-1] + " Привет, мир!"], [w + ["привет", "мир"]]))
        if "shared" in features:
            specials.append(([_bn_text(shared_words)], [_en_text(shared_words)], [shared_words]))
        for sp in specials:
            beads.insert(rng.randint(1, len(beads) - 1), sp)
        if "extra_en" in features:
            w = _sentence_words(rng)
            beads.insert(rng.randint(2, len(beads) - 2), ([], [_en_text(w)], []))
        if "extra_bn" in features:
            w = _sentence_words(rng)
            beads.insert(rng.randint(2, len(beads) - 2), ([_bn_text(w)], [], [w]))

        bn_sents, en_sents, mt = [], [], []
        for bn, en, words in beads:
            bn_sents += bn
            en_sents += en
            for ws in words:
                mt.append(" ".join(w if rng.random() > 0.15 else rng.choice(_VOCAB) for w in ws).lower())
            if bn and en:
                pair = SentencePair(" ".join(bn), " ".join(en))
                gold.append(pair)
                if doc_id in ("doc0", "doc1") and len(leak_candidates) < 3 and len(bn) == 1 and len(en) == 1:
                    leak_candidates.append(pair)

        def paragraphs(sents: list[str]) -> str:
            chunks = [sents[i : i + 5] for i in range(0, len(sents), 5)]
            return "\n\n".join(" ".join(c) for c in chunks) + "\n"

        (out / "docs" / f"{doc_id}.bn.txt").write_text(paragraphs(bn_sents), encoding="utf-8")
        (out / "docs" / f"{doc_id}.en.txt").write_text(paragraphs(en_sents), encoding="utf-8")
        write_sentences(out / "docs" / f"{doc_id}.bn.mt.txt", mt)
        for lang, sents in (("bn", bn_sents), ("en", en_sents)):
            rows = []
            for s in sents:
                toks = [t.strip(".,“”!।").lower() for t in s.split()]
                vec = sum(_word_vector(_english_of(t), dim) for t in toks if t)
                vec = vec / np.linalg.norm(vec) + noise.normal(0, 0.15, dim)
                rows.append(np.round(vec, 6))
            write_embeddings(out / "docs" / f"{doc_id}.{lang}.emb", np.array(rows))
        manifest.append(
            {
                "id": doc_id,
                "source": "news" if doc_id in ("doc0", "doc1", "doc2") else "wiki",
                "src": f"docs/{doc_id}.bn.txt",
                "tgt": f"docs/{doc_id}.en.txt",
                "translation": f"docs/{doc_id}.bn.mt.txt",
                "src_emb": f"docs/{doc_id}.bn.emb",
                "tgt_emb": f"docs/{doc_id}.en.emb",
            }
        )
        expected_docs[doc_id] = {"src_sentences": len(bn_sents), "tgt_sentences": len(en_sents)}

    lexicon = sorted({(_cipher_word(w), w) for w in _VOCAB + _VERBS + ["and"]})
    (out / "lexicon.tsv").write_text("".join(f"{a}\t{b}\n" for a, b in lexicon), encoding="utf-8")
    write_pairs(out / "gold.tsv", gold)
    unrelated = [SentencePair(_bn_text(w), _en_text(w)) for w in (_sentence_words(rng) for _ in range(2))]
    write_pairs(out / "eval.tsv", leak_candidates + unrelated)
    config = {
        "manifest": manifest,
        "src_lang": "bn",
        "tgt_lang": "en",
        "segmenter": {"abbreviations": None, "law_mode": False},
        "aligners": {
            "bleu": {"method": "bleu", "params": {"max_ngram": 2, "anchor_threshold": 0.1}},
            "length": {"method": "length", "dictionary": "lexicon.tsv", "params": {"dict_weight": 0.35}},
        },
        "ensemble": ["bleu", "length"],
        "filter": {"margin": 0.96, "k": 4, "mode": "document", "batch_size": 1000},
        "preprocess": {"steps": ["normalize", "foreign", "translit", "dedup"], "bn_side": "src"},
        "eval_sets": ["eval.tsv"],
        "leakage_mode": "both-sides",
        "output_dir": "run",
        "seed": 42,
    }
    (out / "config.json").write_text(json.dumps(config, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    expected = {
        "documents": expected_docs,
        "gold_pairs": len(gold),
        "planted_leakage": [list(p.key) for p in leak_candidates],
    }
    (out / "expected.json").write_text(json.dumps(expected, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return expected


_DECIPHER = {v: k for k, v in _CIPHER.items()}
_SPECIAL_BACK = {v.rstrip("."): k.rstrip(".") for k, v in _SPECIAL.items()}


def _english_of(token: str) -> str:
    if token in _SPECIAL_BACK:
        return _SPECIAL_BACK[token]
    if any(ch in _DECIPHER for ch in token):
        return "".join(_DECIPHER.get(ch, ch) for ch in token)
    return token


def bundled_fixture() -> Path:
    """Directory of the fixture shipped with the package (``make_fixture`` output)."""
    return Path(str(resources.files("bitextkit.data").joinpath("fixture")))
