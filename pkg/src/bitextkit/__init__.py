"""Build filtered sentence-aligned parallel corpora from document-aligned text."""

from .aligners import BleuAlignParams, LengthAlignParams, align_bleu, align_bullets, align_length, gale_church_cost
from .corpus import AlignmentLink, AlignReport, Document, DocumentPair, SentencePair, expand_links, parse_link_line, serialize_link
from .ensemble import ensemble_union, name_ensemble
from .margin import EmbeddingMatrix, FilterParams, FilterReport, batch_filter, filter_pool, margin_score
from .metrics import BleuParams, GoldSet, corpus_bleu, precision_recall_f1, sentence_bleu, tokenize_13a
from .pipeline import PipelineConfig, RunReport, match_wiki_sections, run_pipeline, sweep_margin
from .preprocess import EvalFilterRules, NormalizationTable, dedup, normalize_text, quality_filter_eval, remove_leakage
from .segmenter import SegmenterRules, Span, load_rules, segment

__version__ = "0.1.0"

__all__ = [
    "AlignReport",
    "AlignmentLink",
    "BleuAlignParams",
    "BleuParams",
    "Document",
    "DocumentPair",
    "EmbeddingMatrix",
    "EvalFilterRules",
    "FilterParams",
    "FilterReport",
    "GoldSet",
    "LengthAlignParams",
    "NormalizationTable",
    "PipelineConfig",
    "RunReport",
    "SegmenterRules",
    "SentencePair",
    "Span",
    "align_bleu",
    "align_bullets",
    "align_length",
    "batch_filter",
    "corpus_bleu",
    "dedup",
    "ensemble_union",
    "expand_links",
    "filter_pool",
    "gale_church_cost",
    "load_rules",
    "margin_score",
    "match_wiki_sections",
    "name_ensemble",
    "normalize_text",
    "parse_link_line",
    "precision_recall_f1",
    "quality_filter_eval",
    "remove_leakage",
    "run_pipeline",
    "segment",
    "sentence_bleu",
    "serialize_link",
    "sweep_margin",
    "tokenize_13a",
]
