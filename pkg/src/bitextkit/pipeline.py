"""End-to-end runs from one JSON config, margin sweeps and section matching.

Config keys (paths are relative to the config file)::

    manifest        list of {id, src, tgt, source?, translation?, src_emb?, tgt_emb?, law?}
    src_lang/tgt_lang
    segmenter       {abbreviations: path|null, law_mode: bool}
    aligners        {name: {method: length|bleu|bullets, params: {...}, dictionary?: path}}
    ensemble        list of aligner names
    filter          {margin, k, mode, batch_size} or null to skip filtering
    embedder        optional "module:callable" used when a document has no embedding files
    preprocess      {steps: [...], table?: path, bn_side: src|tgt, min_foreign_len?: int}
    eval_sets       list of pair TSVs removed from the output
    leakage_mode    both-sides | either-side
    output_dir, seed, workers
"""

from __future__ import annotations

import csv
import hashlib
import importlib
import json
import logging
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .aligners.bleu import BleuAlignParams, align_bleu
from .aligners.bullets import align_bullets
from .aligners.length import BilingualLexicon, LengthAlignParams, align_length
from .corpus import (
    AlignmentLink,
    Document,
    DocumentPair,
    SentencePair,
    expand_links,
    read_embeddings,
    read_pairs,
    read_sentences,
    read_text,
    write_links,
    write_pairs,
    write_sentences,
)
from .ensemble import EnsembleInput, ensemble_union, name_ensemble
from .margin import EmbeddingMatrix, FilterParams, keep_mask, margin_scores
from .metrics import BleuParams, GoldSet, corpus_bleu, precision_recall_f1, tokenize_13a
from .preprocess import STEPS, NormalizationTable, normalize_pair, remove_leakage, remove_shared_foreign, run_steps, transliterate_pair
from .segmenter import load_rules, segment_sentences

log = logging.getLogger(__name__)

METHODS = ("length", "bleu", "bullets")
INCOMPLETE = "INCOMPLETE"


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, doc_id: str | None, cause: BaseException | str):
        self.stage, self.doc_id, self.cause = stage, doc_id, cause
        where = f" (document {doc_id})" if doc_id else ""
        super().__init__(f"stage {stage}{where}: {cause}")


@dataclass(frozen=True)
class DocEntry:
    id: str
    src: Path
    tgt: Path
    source: str = "default"
    translation: Path | None = None
    src_emb: Path | None = None
    tgt_emb: Path | None = None
    law: bool = False


@dataclass(frozen=True)
class AlignerSpec:
    name: str
    method: str
    params: dict = field(default_factory=dict)
    dictionary: Path | None = None


@dataclass
class PipelineConfig:
    manifest: list[DocEntry]
    aligners: list[AlignerSpec]
    ensemble: list[str]
    output_dir: Path
    src_lang: str = "bn"
    tgt_lang: str = "en"
    abbreviations: Path | None = None
    law_mode: bool = False
    filter: FilterParams | None = None
    embedder: str | None = None
    preprocess_steps: list[str] = field(default_factory=list)
    table: Path | None = None
    bn_side: str = "src"
    min_foreign_len: int = 10
    eval_sets: list[Path] = field(default_factory=list)
    leakage_mode: str = "both-sides"
    seed: int = 42
    workers: int = 1
    config_hash: str = ""

    @classmethod
    def from_dict(cls, raw: dict, base_dir: str | Path = ".", output_dir: str | Path | None = None) -> PipelineConfig:
        base = Path(base_dir)

        def path(value):
            return None if value is None else base / value

        try:
            manifest = [
                DocEntry(
                    id=str(d["id"]),
                    src=base / d["src"],
                    tgt=base / d["tgt"],
                    source=str(d.get("source", "default")),
                    translation=path(d.get("translation")),
                    src_emb=path(d.get("src_emb")),
                    tgt_emb=path(d.get("tgt_emb")),
                    law=bool(d.get("law", False)),
                )
                for d in raw["manifest"]
            ]
            aligners = [
                AlignerSpec(name, spec["method"], dict(spec.get("params", {})), path(spec.get("dictionary")))
                for name, spec in raw["aligners"].items()
            ]
            seg = raw.get("segmenter", {}) or {}
            pre = raw.get("preprocess", {}) or {}
            seed = int(raw.get("seed", 42))
            filt = raw.get("filter")
            filter_params = FilterParams(**{**filt, "seed": seed}) if filt else None
            out = Path(output_dir) if output_dir is not None else base / raw.get("output_dir", "run")
            cfg = cls(
                manifest=manifest,
                aligners=aligners,
                ensemble=list(raw["ensemble"]),
                output_dir=out,
                src_lang=raw.get("src_lang", "bn"),
                tgt_lang=raw.get("tgt_lang", "en"),
                abbreviations=path(seg.get("abbreviations")),
                law_mode=bool(seg.get("law_mode", False)),
                filter=filter_params,
                embedder=raw.get("embedder"),
                preprocess_steps=list(pre.get("steps", [])),
                table=path(pre.get("table")),
                bn_side=pre.get("bn_side", "src"),
                min_foreign_len=int(pre.get("min_foreign_len", 10)),
                eval_sets=[base / p for p in raw.get("eval_sets", [])],
                leakage_mode=raw.get("leakage_mode", "both-sides"),
                seed=seed,
                workers=int(raw.get("workers", 1)),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.config_hash = hashlib.sha256(json.dumps(raw, sort_keys=True, ensure_ascii=False).encode("utf-8")).hexdigest()
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path, output_dir: str | Path | None = None) -> PipelineConfig:
        path = Path(path)
        try:
            raw = json.loads(read_text(path))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(raw, path.parent, output_dir)

    def validate(self) -> None:
        if not self.manifest:
            raise ConfigError("manifest is empty")
        ids = [d.id for d in self.manifest]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate document ids in manifest")
        names = [a.name for a in self.aligners]
        for spec in self.aligners:
            if spec.method not in METHODS:
                raise ConfigError(f"aligner {spec.name!r}: unknown method {spec.method!r}")
        if not self.ensemble:
            raise ConfigError("ensemble has no members")
        unknown = sorted(set(self.ensemble) - set(names))
        if unknown:
            raise ConfigError(f"ensemble members {unknown} are not configured aligners {names}")
        unknown = [s for s in self.preprocess_steps if s not in STEPS]
        if unknown:
            raise ConfigError(f"unknown preprocess steps {unknown}")
        if self.bn_side not in ("src", "tgt"):
            raise ConfigError("bn_side must be src or tgt")
        if self.leakage_mode not in ("both-sides", "either-side"):
            raise ConfigError(f"unknown leakage mode {self.leakage_mode!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        required = [d.src for d in self.manifest] + [d.tgt for d in self.manifest] + list(self.eval_sets)
        required += [p for p in (self.abbreviations, self.table) if p]
        required += [a.dictionary for a in self.aligners if a.dictionary]
        uses_bleu = any(a.method == "bleu" for a in self.aligners)
        for d in self.manifest:
            if uses_bleu:
                if d.translation is None:
                    raise ConfigError(f"document {d.id}: bleu aligner needs a translation file")
                required.append(d.translation)
            if self.filter is not None and self.embedder is None:
                if d.src_emb is None or d.tgt_emb is None:
                    raise ConfigError(f"document {d.id}: filtering needs embedding files or an embedder")
            required += [p for p in (d.src_emb, d.tgt_emb) if p]
        missing = [str(p) for p in required if not Path(p).is_file()]
        if missing:
            raise ConfigError(f"missing input files: {missing}")


@dataclass
class RunReport:
    config_hash: str
    seed: int
    stages: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def stage(self, name: str) -> dict:
        for s in self.stages:
            if s["stage"] == name:
                return s
        raise KeyError(name)

    def check_telescoping(self) -> None:
        flow = [s for s in self.stages if "n_in" in s]
        for prev, nxt in zip(flow, flow[1:]):
            if prev["n_out"] != nxt["n_in"]:
                raise StageError(nxt["stage"], None, f"{prev['stage']} emitted {prev['n_out']} pairs, {nxt['stage']} received {nxt['n_in']}")

    def as_dict(self) -> dict:
        return {"config_hash": self.config_hash, "seed": self.seed, "stages": self.stages}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- per-document work (top level so process pools can pickle it) -------------


def _segment_doc(entry: DocEntry, abbreviations: Path | None, law_mode: bool) -> tuple[list[str], list[str]]:
    if entry.law:
        result = align_bullets(read_text(entry.src), read_text(entry.tgt))
        return result.src_units, result.tgt_units
    rules = load_rules(abbreviations)
    return (
        segment_sentences(read_text(entry.src), rules, law_mode),
        segment_sentences(read_text(entry.tgt), rules, law_mode),
    )


def _align_doc(spec: AlignerSpec, entry: DocEntry, src: list[str], tgt: list[str]) -> list[AlignmentLink]:
    if not src or not tgt:
        return []
    if spec.method == "length":
        lexicon = BilingualLexicon.load(spec.dictionary) if spec.dictionary else None
        return align_length(src, tgt, LengthAlignParams(dictionary=lexicon, **spec.params))
    if spec.method == "bleu":
        return align_bleu(read_sentences(entry.translation), tgt, BleuAlignParams(**spec.params), src=src)
    if not entry.law:
        return []
    return align_bullets(read_text(entry.src), read_text(entry.tgt)).links


def _parallel_map(fn: Callable, args: list[tuple], workers: int) -> list:
    if workers == 1 or len(args) < 2:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*args)))


def _load_embedder(spec: str) -> Callable[[list[str], str], np.ndarray]:
    module, _, attr = spec.partition(":")
    if not attr:
        raise ConfigError(f"embedder must look like 'module:callable', got {spec!r}")
    return getattr(importlib.import_module(module), attr)


def bead_vectors(links: Sequence[AlignmentLink], rows: np.ndarray, side: str) -> np.ndarray:
    """One vector per link: the mean of the link's L2-normalised sentence rows."""
    unit = EmbeddingMatrix(rows).unit()
    out = np.empty((len(links), rows.shape[1]))
    for n, link in enumerate(links):
        idx = list(link.src_idx if side == "src" else link.tgt_idx)
        out[n] = unit[idx].mean(axis=0)
    return out


@dataclass
class Candidates:
    """Ensembled pairs with everything the filter needs."""

    pairs: list[SentencePair]
    groups: list[str]
    sources: list[str]
    src_emb: np.ndarray | None = None
    tgt_emb: np.ndarray | None = None


class _Run:
    def __init__(self, config: PipelineConfig, write: bool = True):
        self.cfg = config
        self.out = config.output_dir if write else None
        self.report = RunReport(config.config_hash, config.seed)
        self.sentences: dict[str, tuple[list[str], list[str]]] = {}

    def _timed(self, name: str, fn: Callable, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, getattr(exc, "doc_id", None), exc) from exc
        finally:
            self.report.timings[name] = round(time.perf_counter() - t0, 6)

    def _path(self, *parts: str) -> Path:
        p = self.out.joinpath(*parts)
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def segment(self) -> None:
        args = [(d, self.cfg.abbreviations, self.cfg.law_mode) for d in self.cfg.manifest]
        results = _parallel_map(_segment_doc, args, self.cfg.workers)
        n_src = n_tgt = 0
        for entry, (src, tgt) in zip(self.cfg.manifest, results):
            self.sentences[entry.id] = (src, tgt)
            n_src, n_tgt = n_src + len(src), n_tgt + len(tgt)
            if self.out:
                write_sentences(self._path("segmented", f"{entry.id}.{self.cfg.src_lang}.txt"), src)
                write_sentences(self._path("segmented", f"{entry.id}.{self.cfg.tgt_lang}.txt"), tgt)
        self.report.stages.append(
            {"stage": "segment", "documents": len(results), "src_sentences": n_src, "tgt_sentences": n_tgt}
        )

    def _pair(self, entry: DocEntry) -> DocumentPair:
        src, tgt = self.sentences[entry.id]
        return DocumentPair(
            Document(self.cfg.src_lang, tuple(src), f"{entry.id}.{self.cfg.src_lang}"),
            Document(self.cfg.tgt_lang, tuple(tgt), f"{entry.id}.{self.cfg.tgt_lang}"),
            entry.id,
        )

    def align(self) -> dict[str, dict[str, list[SentencePair]]]:
        per_aligner: dict[str, dict[str, list[SentencePair]]] = {}
        summary = {}
        for spec in self.cfg.aligners:
            args = [(spec, d, *self.sentences[d.id]) for d in self.cfg.manifest]
            try:
                all_links = _parallel_map(_align_doc, args, self.cfg.workers)
            except Exception as exc:
                raise StageError("align", None, f"aligner {spec.name}: {exc}") from exc
            docs, n_links, n_null, n_pairs = {}, 0, 0, 0
            for entry, links in zip(self.cfg.manifest, all_links):
                try:
                    pairs = expand_links(links, self._pair(entry))
                except Exception as exc:
                    raise StageError("align", entry.id, exc) from exc
                docs[entry.id] = pairs
                n_links += len(links)
                n_null += sum(link.is_null for link in links)
                n_pairs += len(pairs)
                if self.out:
                    write_links(self._path("links", spec.name, f"{entry.id}.links"), links)
                    write_pairs(self._path("pairs", spec.name, f"{entry.id}.tsv"), pairs)
            per_aligner[spec.name] = docs
            summary[spec.name] = {"method": spec.method, "links": n_links, "null_links": n_null, "pairs": n_pairs}
        self.report.stages.append({"stage": "align", "aligners": summary})
        return per_aligner

    def ensemble(self, per_aligner) -> Candidates:
        members = sorted(set(self.cfg.ensemble))
        union = ensemble_union(EnsembleInput(per_aligner), members)
        pairs, groups, sources = [], [], []
        for entry in self.cfg.manifest:
            doc_pairs = union[entry.id]
            pairs += doc_pairs
            groups += [entry.id] * len(doc_pairs)
            sources += [entry.source] * len(doc_pairs)
        n_in = sum(len(p) for m in members for p in per_aligner[m].values())
        self.report.stages.append(
            {"stage": "ensemble", "name": name_ensemble(members), "members": members, "n_in": n_in, "n_out": len(pairs)}
        )
        if self.out:
            write_pairs(self._path("pairs", "ensemble.tsv"), pairs)
        return Candidates(pairs, groups, sources)

    def embed(self, cand: Candidates) -> None:
        embedder = _load_embedder(self.cfg.embedder) if self.cfg.embedder else None
        rows: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for entry in self.cfg.manifest:
            src, tgt = self.sentences[entry.id]
            try:
                if entry.src_emb is not None and entry.tgt_emb is not None:
                    e_src, e_tgt = read_embeddings(entry.src_emb), read_embeddings(entry.tgt_emb)
                else:
                    e_src = np.asarray(embedder(src, self.cfg.src_lang), dtype=np.float64)
                    e_tgt = np.asarray(embedder(tgt, self.cfg.tgt_lang), dtype=np.float64)
            except Exception as exc:
                raise StageError("filter", entry.id, exc) from exc
            if len(e_src) != len(src) or len(e_tgt) != len(tgt):
                raise StageError(
                    "filter", entry.id,
                    f"embeddings have {len(e_src)}/{len(e_tgt)} rows for {len(src)}/{len(tgt)} sentences",
                )
            rows[entry.id] = (e_src, e_tgt)
        links = [p.origin[1] for p in cand.pairs]
        src_vecs, tgt_vecs = [], []
        for doc in dict.fromkeys(cand.groups):
            doc_links = [l for l, g in zip(links, cand.groups) if g == doc]
            src_vecs.append(bead_vectors(doc_links, rows[doc][0], "src"))
            tgt_vecs.append(bead_vectors(doc_links, rows[doc][1], "tgt"))
        dim = next(iter(rows.values()))[0].shape[1] if rows else 1
        cand.src_emb = np.vstack(src_vecs) if src_vecs else np.zeros((0, dim))
        cand.tgt_emb = np.vstack(tgt_vecs) if tgt_vecs else np.zeros((0, dim))

    def filter(self, cand: Candidates) -> list[SentencePair]:
        params = self.cfg.filter
        if params is None:
            self.report.stages.append({"stage": "filter", "skipped": True, "n_in": len(cand.pairs), "n_out": len(cand.pairs)})
            return cand.pairs
        self.embed(cand)
        scores, units, degenerate = margin_scores(
            EmbeddingMatrix(cand.src_emb), EmbeddingMatrix(cand.tgt_emb), params, cand.groups
        )
        keep = keep_mask(scores, params.margin)
        kept = [p for p, k in zip(cand.pairs, keep) if k]
        per_source = {}
        for src in sorted(set(cand.sources)):
            mask = np.array([s == src for s in cand.sources])
            n_in, n_kept = int(mask.sum()), int((mask & keep).sum())
            per_source[src] = {"n_in": n_in, "n_kept": n_kept, "pct_filtered": round(100 * (n_in - n_kept) / n_in, 4)}
        n = len(cand.pairs)
        entry = {
            "stage": "filter",
            "mode": params.mode,
            "margin": params.margin,
            "k": params.k,
            "n_in": n,
            "n_out": len(kept),
            "pct_filtered": round(100 * (n - len(kept)) / n, 4) if n else 0.0,
            "n_degenerate": degenerate,
            "n_undefined_score": int(np.isnan(scores).sum()),
            "per_source": per_source,
        }
        self.report.stages.append(entry)
        if self.out:
            write_pairs(self._path("pairs", "filtered.tsv"), kept)
            units_out = [{"unit": name, "n_in": int(len(idx)), "n_kept": int(keep[idx].sum())} for name, idx in units]
            self._path("filter_report.json").write_text(
                json.dumps({**entry, "units": units_out}, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        return kept

    def _table(self) -> NormalizationTable:
        return NormalizationTable.load(self.cfg.table) if self.cfg.table else NormalizationTable.default()

    def preprocess(self, pairs: list[SentencePair]) -> list[SentencePair]:
        result = run_steps(
            pairs, self.cfg.preprocess_steps, self._table(), self.cfg.bn_side, self.cfg.min_foreign_len
        )
        self.report.stages.append(
            {
                "stage": "preprocess",
                "n_in": len(pairs),
                "n_out": len(result.pairs),
                "steps": [{"step": s, "n_in": a, "n_out": b} for s, a, b in result.counts],
            }
        )
        if self.out:
            write_pairs(self._path("pairs", "preprocessed.tsv"), result.pairs)
        return result.pairs

    def _prepare_eval(self, pairs: list[SentencePair]) -> list[SentencePair]:
        table = self._table()
        out = []
        for p in pairs:
            q = p
            for step in self.cfg.preprocess_steps:
                if q is None:
                    break
                if step == "normalize":
                    q = normalize_pair(q, table)
                elif step == "foreign":
                    q = remove_shared_foreign(q, self.cfg.min_foreign_len)
                elif step == "translit":
                    q = transliterate_pair(q, self.cfg.bn_side)
            if q is not None:
                out.append(q)
        return out

    def leakage(self, pairs: list[SentencePair]) -> list[SentencePair]:
        eval_sets = [self._prepare_eval(read_pairs(p)) for p in self.cfg.eval_sets]
        kept = remove_leakage(pairs, eval_sets, self.cfg.leakage_mode)
        self.report.stages.append(
            {
                "stage": "leakage",
                "mode": self.cfg.leakage_mode,
                "eval_pairs": sum(len(e) for e in eval_sets),
                "n_in": len(pairs),
                "n_out": len(kept),
                "dropped": len(pairs) - len(kept),
            }
        )
        return kept

    def candidates(self) -> Candidates:
        self._timed("segment", self.segment)
        per_aligner = self._timed("align", self.align)
        return self._timed("ensemble", self.ensemble, per_aligner)


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Run every stage and write outputs under ``config.output_dir``.

    Outputs: ``pairs.tsv``, ``segmented/``, ``links/<aligner>/``,
    ``pairs/<aligner>/``, intermediate pair files, ``filter_report.json``,
    ``run_report.json`` (deterministic) and ``timings.json``. On failure an
    ``INCOMPLETE`` marker is left and ``pairs.tsv`` is removed.
    """
    out = config.output_dir
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)
    marker = out / INCOMPLETE
    marker.write_text("run in progress\n", encoding="utf-8")
    run = _Run(config)
    try:
        cand = run.candidates()
        kept = run._timed("filter", run.filter, cand)
        cleaned = run._timed("preprocess", run.preprocess, kept)
        final = run._timed("leakage", run.leakage, cleaned)
        run.report.check_telescoping()
        write_pairs(out / "pairs.tsv", final)
        (out / "run_report.json").write_text(run.report.to_json(), encoding="utf-8")
        (out / "timings.json").write_text(json.dumps(run.report.timings, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except Exception as exc:
        (out / "pairs.tsv").unlink(missing_ok=True)
        marker.write_text(f"{exc}\n", encoding="utf-8")
        raise
    marker.unlink()
    return run.report


# --- margin sweep ----------------------------------------------------------------


def default_margins() -> list[float]:
    return [round(0.90 + 0.01 * i, 2) for i in range(21)]


@dataclass(frozen=True)
class SweepRow:
    margin: float | None
    precision: float
    recall: float
    f1: float
    n_kept: int


def sweep_margin(
    pairs: Sequence[SentencePair],
    src_emb: EmbeddingMatrix,
    tgt_emb: EmbeddingMatrix,
    gold: GoldSet,
    params: FilterParams = FilterParams(),
    margins: Sequence[float] | None = None,
    groups: Sequence[str] | None = None,
) -> list[SweepRow]:
    """P/R/F1 of the kept set at each margin; the first row (margin None) is unfiltered.

    Scores are computed once and thresholded per margin.
    """
    margins = default_margins() if margins is None else list(margins)
    scores, _, _ = margin_scores(src_emb, tgt_emb, params, groups)
    base = precision_recall_f1(pairs, gold)
    rows = [SweepRow(None, base.precision, base.recall, base.f1, len(pairs))]
    for m in margins:
        kept = [p for p, k in zip(pairs, keep_mask(scores, m)) if k]
        r = precision_recall_f1(kept, gold)
        rows.append(SweepRow(m, r.precision, r.recall, r.f1, len(kept)))
    return rows


def sweep_from_config(config: PipelineConfig, gold: GoldSet, margins: Sequence[float] | None = None) -> list[SweepRow]:
    """Sweep the ensembled candidates of a pipeline config without writing outputs."""
    if config.filter is None:
        raise ConfigError("sweeping needs filter settings in the config")
    run = _Run(config, write=False)
    cand = run.candidates()
    run.embed(cand)
    return sweep_margin(
        cand.pairs, EmbeddingMatrix(cand.src_emb), EmbeddingMatrix(cand.tgt_emb), gold, config.filter, margins, cand.groups
    )


def write_sweep_csv(path: str | Path, rows: Sequence[SweepRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["margin", "precision", "recall", "f1", "n_kept"])
        for r in rows:
            margin = "none" if r.margin is None else f"{r.margin:.2f}"
            w.writerow([margin, f"{r.precision:.6f}", f"{r.recall:.6f}", f"{r.f1:.6f}", r.n_kept])


# --- section matching ------------------------------------------------------------


def section_scores(
    src_sections_translated: Sequence[Sequence[str]],
    tgt_sections: Sequence[Sequence[str]],
    case_fold: bool = True,
) -> np.ndarray:
    """BLEU (0-100) of every translated source section against every target section.

    Each section is scored as a single segment made of its joined sentences.
    """
    params = BleuParams(case_fold=case_fold)
    hyps = [tokenize_13a(" ".join(s)) for s in src_sections_translated]
    refs = [tokenize_13a(" ".join(s)) for s in tgt_sections]
    scores = np.zeros((len(hyps), len(refs)))
    for i, h in enumerate(hyps):
        for j, r in enumerate(refs):
            scores[i, j] = corpus_bleu([h], [[r]], params) if h and r else 0.0
    return scores


def greedy_section_matching(scores: np.ndarray, threshold: float = 20.0) -> list[tuple[int, int]]:
    """One-to-one matching taking the highest remaining score first; only scores above threshold."""
    cells = sorted(
        ((float(scores[i, j]), i, j) for i in range(scores.shape[0]) for j in range(scores.shape[1])),
        key=lambda c: (-c[0], c[1], c[2]),
    )
    used_src, used_tgt, matches = set(), set(), []
    for score, i, j in cells:
        if score <= threshold:
            break
        if i in used_src or j in used_tgt:
            continue
        used_src.add(i)
        used_tgt.add(j)
        matches.append((i, j))
    return sorted(matches)


def match_wiki_sections(
    src_sections_translated: Sequence[Sequence[str]],
    tgt_sections: Sequence[Sequence[str]],
    threshold: float = 20.0,
    case_fold: bool = True,
) -> list[tuple[int, int]]:
    if not src_sections_translated or not tgt_sections:
        return []
    return greedy_section_matching(section_scores(src_sections_translated, tgt_sections, case_fold), threshold)


def read_sections(path: str | Path) -> list[list[str]]:
    """Sections are blocks of one-sentence-per-line text separated by blank lines."""
    sections, current = [], []
    for line in read_text(path).replace("\r\n", "\n").split("\n"):
        if line.strip():
            current.append(line.strip())
        elif current:
            sections.append(current)
            current = []
    if current:
        sections.append(current)
    return sections
