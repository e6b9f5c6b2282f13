"""Command-line entry point: ``bitextkit <command> ...``.

Exit codes: 0 success, 1 invalid input or configuration, 2 failure while running.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus
from .aligners.bleu import BleuAlignParams, align_bleu
from .aligners.bullets import align_bullets
from .aligners.length import BilingualLexicon, LengthAlignParams, align_length
from .ensemble import EnsembleConfigError, EnsembleInput, ensemble_union
from .margin import EmbeddingMatrix, FilterParams, filter_pool
from .metrics import BleuParams, GoldSet, corpus_bleu, precision_recall_f1, tokenize_13a
from .pipeline import (
    ConfigError,
    PipelineConfig,
    StageError,
    match_wiki_sections,
    read_sections,
    run_pipeline,
    sweep_from_config,
    sweep_margin,
    write_sweep_csv,
)
from .preprocess import (
    EvalFilterRules,
    NormalizationTable,
    TableError,
    quality_filter_eval,
    read_token_set,
    remove_leakage,
    run_steps,
)
from .segmenter import RulesError, load_rules, segment_sentences

log = logging.getLogger("bitextkit")


class UsageError(ValueError):
    pass


def _write_json(path: str | None, data: dict) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_segment(args) -> None:
    rules = load_rules(args.rules)
    sentences = segment_sentences(corpus.read_text(args.input), rules, law_mode=args.law_mode)
    corpus.write_sentences(args.out, sentences)
    log.info("%d sentences", len(sentences))


def cmd_align(args) -> None:
    if args.method == "bullets":
        result = align_bullets(corpus.read_text(args.src), corpus.read_text(args.tgt))
        for msg in result.diagnostics:
            print(msg, file=sys.stderr)
        links, src, tgt = result.links, result.src_units, result.tgt_units
    else:
        src, tgt = corpus.read_sentences(args.src), corpus.read_sentences(args.tgt)
        if args.method == "length":
            if not src or not tgt:
                raise UsageError("length alignment needs non-empty documents")
            lexicon = BilingualLexicon.load(args.dict) if args.dict else None
            links = align_length(src, tgt, LengthAlignParams(dictionary=lexicon))
        else:
            if not args.translation:
                raise UsageError("--translation is required for --method bleu")
            links = align_bleu(corpus.read_sentences(args.translation), tgt, BleuAlignParams(), src=src)
    corpus.write_links(args.out, links)
    if args.pairs_out:
        pair = corpus.DocumentPair(
            corpus.Document("src", tuple(src), Path(args.src).name + ":src"),
            corpus.Document("tgt", tuple(tgt), Path(args.tgt).name + ":tgt"),
            Path(args.src).stem,
        )
        corpus.write_pairs(args.pairs_out, corpus.expand_links(links, pair))


def cmd_ensemble(args) -> None:
    root = Path(args.input)
    members = [m.strip() for m in args.members.split(",") if m.strip()]
    per_aligner = {}
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        per_aligner[sub.name] = {f.stem: corpus.read_pairs(f) for f in sorted(sub.glob("*.tsv"))}
    union = ensemble_union(EnsembleInput(per_aligner), members)
    corpus.write_pairs(args.out, [p for doc in sorted(union) for p in union[doc]])


def _doc_ids(path: str | None, n: int) -> list[str] | None:
    if path is None:
        return None
    ids = corpus.read_sentences(path)
    if len(ids) != n:
        raise UsageError(f"--doc-ids has {len(ids)} lines for {n} pairs")
    return ids


def cmd_filter(args) -> None:
    pairs = corpus.read_pairs(args.pairs)
    params = FilterParams(args.margin, args.k, args.mode, args.batch_size, args.seed)
    groups = _doc_ids(args.doc_ids, len(pairs))
    if params.mode == "document" and groups is None:
        raise UsageError("--mode document needs --doc-ids (one document id per pair)")
    src = EmbeddingMatrix(corpus.read_embeddings(args.src_emb))
    tgt = EmbeddingMatrix(corpus.read_embeddings(args.tgt_emb))
    kept, report = filter_pool(pairs, src, tgt, params, groups)
    corpus.write_pairs(args.out, kept)
    _write_json(args.report, report.as_dict())


def cmd_eval(args) -> None:
    gold = GoldSet.from_pairs(corpus.read_pairs(args.gold), case_fold=args.lc)
    report = precision_recall_f1(corpus.read_pairs(args.pred), gold)
    _write_json(args.out, report.as_dict())


def cmd_bleu(args) -> None:
    hyps = corpus.read_sentences(args.hyp)
    ref_files = [corpus.read_sentences(f) for f in args.ref.split(",")]
    for f, refs in zip(args.ref.split(","), ref_files):
        if len(refs) != len(hyps):
            raise UsageError(f"{f} has {len(refs)} lines, hypothesis has {len(hyps)}")
    params = BleuParams(max_ngram=args.max_ngram, case_fold=args.lc)
    score = corpus_bleu(
        [tokenize_13a(h) for h in hyps],
        [[tokenize_13a(r[i]) for r in ref_files] for i in range(len(hyps))],
        params,
    )
    print(f"BLEU = {score:.2f}")


def cmd_preprocess(args) -> None:
    table = NormalizationTable.load(args.table) if args.table else NormalizationTable.default()
    steps = [s.strip() for s in args.steps.split(",") if s.strip()]
    result = run_steps(corpus.read_pairs(args.input), steps, table, args.bn_side, args.min_foreign_len)
    corpus.write_pairs(args.out, result.pairs)
    for step, n_in, n_out in result.counts:
        print(f"{step}\t{n_in}\t{n_out}", file=sys.stderr)


def cmd_leak(args) -> None:
    mode = {"both": "both-sides", "either": "either-side"}.get(args.mode, args.mode)
    train = corpus.read_pairs(args.train)
    kept = remove_leakage(train, [corpus.read_pairs(f) for f in args.eval], mode)
    corpus.write_pairs(args.out, kept)
    print(f"dropped {len(train) - len(kept)} of {len(train)} pairs", file=sys.stderr)


def cmd_evalfilter(args) -> None:
    raw = json.loads(corpus.read_text(args.rules)) if args.rules else {}
    vocab = read_token_set(args.vocab) if args.vocab else frozenset()
    translit = read_token_set(args.translit) if args.translit else frozenset()
    rules = EvalFilterRules(vocab=vocab, translit_lexicon=translit, **raw)
    kept, rejected = quality_filter_eval(corpus.read_pairs(args.input), rules)
    corpus.write_pairs(args.out, kept)
    if args.rejected:
        with open(args.rejected, "w", encoding="utf-8", newline="\n") as fh:
            for r in rejected:
                fh.write(f"{r.rule}\t{r.reason}\t{r.pair.src_text}\t{r.pair.tgt_text}\n")
    print(f"kept {len(kept)}, rejected {len(rejected)}", file=sys.stderr)


def cmd_sweep(args) -> None:
    gold = GoldSet.from_pairs(corpus.read_pairs(args.gold), case_fold=args.lc)
    if args.config:
        rows = sweep_from_config(PipelineConfig.load(args.config), gold)
    else:
        if not (args.pairs and args.src_emb and args.tgt_emb):
            raise UsageError("give --config, or --pairs with --src-emb and --tgt-emb")
        pairs = corpus.read_pairs(args.pairs)
        groups = _doc_ids(args.doc_ids, len(pairs))
        if args.mode == "document" and groups is None:
            raise UsageError("--mode document needs --doc-ids")
        params = FilterParams(k=args.k, mode=args.mode, batch_size=args.batch_size, seed=args.seed)
        rows = sweep_margin(
            pairs,
            EmbeddingMatrix(corpus.read_embeddings(args.src_emb)),
            EmbeddingMatrix(corpus.read_embeddings(args.tgt_emb)),
            gold,
            params,
            groups=groups,
        )
    write_sweep_csv(args.out, rows)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(rows, args.plot)


def cmd_wiki_match(args) -> None:
    matches = match_wiki_sections(
        read_sections(args.src_translated), read_sections(args.tgt), args.threshold, case_fold=not args.cased
    )
    lines = "".join(f"{i}\t{j}\n" for i, j in matches)
    if args.out:
        Path(args.out).write_text(lines, encoding="utf-8")
    else:
        sys.stdout.write(lines)


def cmd_pipeline(args) -> None:
    cfg = PipelineConfig.load(args.config, output_dir=args.out)
    if args.workers:
        cfg.workers = args.workers
        cfg.validate()
    report = run_pipeline(cfg)
    final = report.stages[-1]
    print(f"{final['n_out']} pairs written to {cfg.output_dir / 'pairs.tsv'}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bitextkit", description="Build filtered sentence-aligned parallel corpora.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="split a raw document into one sentence per line")
    p.add_argument("--rules", help="extra abbreviation file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--law-mode", action="store_true", help="also split at line-final ';'")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("align", help="align one document pair")
    p.add_argument("--method", choices=("length", "bleu", "bullets"), required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--dict")
    p.add_argument("--translation")
    p.add_argument("--out", required=True, help="link file")
    p.add_argument("--pairs-out", help="also write the expanded sentence pairs")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("ensemble", help="union of per-aligner pair files")
    p.add_argument("--members", required=True, help="comma-separated aligner names")
    p.add_argument("--in", dest="input", required=True, help="directory with <aligner>/<doc>.tsv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("filter", help="margin filtering with precomputed embeddings")
    p.add_argument("--mode", choices=("document", "batch", "global"), default="document")
    p.add_argument("--margin", type=float, default=0.96)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--pairs", required=True)
    p.add_argument("--src-emb", required=True)
    p.add_argument("--tgt-emb", required=True)
    p.add_argument("--doc-ids", help="one document id per pair (document mode)")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("eval", help="precision/recall/F1 against gold pairs")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out")
    p.add_argument("--lc", action="store_true", help="case-insensitive comparison")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bleu", help="corpus BLEU with 13a tokenization")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True, help="comma-separated reference files")
    p.add_argument("--lc", action="store_true")
    p.add_argument("--max-ngram", type=int, default=4)
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("preprocess", help="normalize, strip shared foreign text, transliterate, dedup")
    p.add_argument("--table")
    p.add_argument("--steps", default="normalize,foreign,translit,dedup")
    p.add_argument("--bn-side", choices=("src", "tgt"), default="src")
    p.add_argument("--min-foreign-len", type=int, default=10)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("leak", help="remove evaluation pairs from training pairs")
    p.add_argument("--train", required=True)
    p.add_argument("--eval", nargs="+", required=True)
    p.add_argument("--mode", choices=("both", "either", "both-sides", "either-side"), default="both")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_leak)

    p = sub.add_parser("evalfilter", help="length/transliteration/OOV filters for evaluation sets")
    p.add_argument("--rules", help="JSON overriding min_chars, max_chars, ... thresholds")
    p.add_argument("--vocab")
    p.add_argument("--translit", help="tokens counted as transliterations")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rejected", help="TSV of rule, reason, src, tgt")
    p.set_defaults(func=cmd_evalfilter)

    p = sub.add_parser("sweep", help="P/R/F1 across filter margins 0.90-1.10")
    p.add_argument("--config")
    p.add_argument("--pairs")
    p.add_argument("--src-emb")
    p.add_argument("--tgt-emb")
    p.add_argument("--doc-ids")
    p.add_argument("--mode", choices=("document", "batch", "global"), default="global")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--gold", required=True)
    p.add_argument("--lc", action="store_true")
    p.add_argument("--out", required=True, help="CSV output")
    p.add_argument("--plot", help="PNG output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wiki-match", help="match article sections by BLEU")
    p.add_argument("--src-translated", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--threshold", type=float, default=20.0)
    p.add_argument("--cased", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_wiki_match)

    p = sub.add_parser("pipeline", help="run the full pipeline from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override output_dir")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_pipeline)
    return parser


_VALIDATION_ERRORS = (
    ConfigError,
    UsageError,
    EnsembleConfigError,
    RulesError,
    TableError,
    FileNotFoundError,
    corpus.CorpusFormatError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
