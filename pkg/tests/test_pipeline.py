import json

import numpy as np
import pytest

from bitextkit.corpus import read_pairs
from bitextkit.margin import FilterParams, EmbeddingMatrix, filter_pool
from bitextkit.metrics import GoldSet
from bitextkit.pipeline import (
    INCOMPLETE,
    ConfigError,
    PipelineConfig,
    StageError,
    bead_vectors,
    default_margins,
    greedy_section_matching,
    match_wiki_sections,
    read_sections,
    run_pipeline,
    sweep_from_config,
    sweep_margin,
    write_sweep_csv,
)
from bitextkit.corpus import AlignmentLink
from bitextkit import synthetic

from helpers import copy_fixture


@pytest.fixture
def fixture_config(tmp_path):
    return copy_fixture(tmp_path / "fx")


def edit_config(path, **changes):
    raw = json.loads(path.read_text(encoding="utf-8"))
    raw.update(changes)
    path.write_text(json.dumps(raw), encoding="utf-8")
    return raw


def test_unknown_ensemble_member_fails_before_work(fixture_config):
    edit_config(fixture_config, ensemble=["bleu", "gargantua"])
    with pytest.raises(ConfigError, match="gargantua"):
        PipelineConfig.load(fixture_config)
    assert not (fixture_config.parent / "run").exists()


@pytest.mark.parametrize(
    "change, message",
    [
        ({"manifest": []}, "manifest is empty"),
        ({"preprocess": {"steps": ["stem"]}}, "unknown preprocess steps"),
        ({"leakage_mode": "fuzzy"}, "leakage mode"),
        ({"eval_sets": ["missing.tsv"]}, "missing input files"),
        ({"filter": {"margin": 0.96, "mode": "corpus"}}, "mode"),
        ({"aligners": {"x": {"method": "gargantua"}}, "ensemble": ["x"]}, "unknown method"),
    ],
)
def test_config_validation(fixture_config, change, message):
    edit_config(fixture_config, **change)
    with pytest.raises(ConfigError, match=message):
        PipelineConfig.load(fixture_config)


def test_config_missing_key_and_bad_json(tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        PipelineConfig.load(bad)
    bad.write_text("{}")
    with pytest.raises(ConfigError, match="missing config key"):
        PipelineConfig.load(bad)


def test_run_outputs_and_report(fixture_config, tmp_path):
    cfg = PipelineConfig.load(fixture_config, output_dir=tmp_path / "out")
    report = run_pipeline(cfg)
    out = tmp_path / "out"
    for rel in [
        "pairs.tsv", "run_report.json", "timings.json", "filter_report.json",
        "links/bleu/doc0.links", "links/length/doc4.links", "pairs/ensemble.tsv",
        "pairs/filtered.tsv", "pairs/preprocessed.tsv", "segmented/doc0.bn.txt",
    ]:
        assert (out / rel).is_file(), rel
    assert not (out / INCOMPLETE).exists()
    stored = json.loads((out / "run_report.json").read_text())
    assert stored == json.loads(report.to_json())
    assert stored["config_hash"] == cfg.config_hash and stored["seed"] == 42
    assert "timings" not in stored
    names = [s["stage"] for s in stored["stages"]]
    assert names == ["segment", "align", "ensemble", "filter", "preprocess", "leakage"]
    filt = report.stage("filter")
    assert set(filt["per_source"]) == {"news", "wiki"}
    assert len(read_pairs(out / "pairs.tsv")) == report.stage("leakage")["n_out"] > 0


def test_workers_do_not_change_output(fixture_config, tmp_path):
    run_pipeline(PipelineConfig.load(fixture_config, output_dir=tmp_path / "a"))
    cfg = PipelineConfig.load(fixture_config, output_dir=tmp_path / "b")
    cfg.workers = 2
    run_pipeline(cfg)
    for name in ("pairs.tsv", "run_report.json", "pairs/ensemble.tsv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_failure_leaves_incomplete_marker(fixture_config, tmp_path):
    emb = fixture_config.parent / "docs" / "doc2.bn.emb"
    lines = emb.read_text().splitlines()
    emb.write_text("\n".join(lines[:-1]) + "\n")
    cfg = PipelineConfig.load(fixture_config, output_dir=tmp_path / "out")
    with pytest.raises(StageError) as exc:
        run_pipeline(cfg)
    assert exc.value.stage == "filter" and exc.value.doc_id == "doc2"
    assert (tmp_path / "out" / INCOMPLETE).is_file()
    assert not (tmp_path / "out" / "pairs.tsv").exists()


def test_plugin_embedder_and_no_filter(fixture_config, tmp_path):
    raw = json.loads(fixture_config.read_text())
    for d in raw["manifest"]:
        d.pop("src_emb")
        d.pop("tgt_emb")
    raw["embedder"] = "helpers:hashed_embedder"
    fixture_config.write_text(json.dumps(raw))
    report = run_pipeline(PipelineConfig.load(fixture_config, output_dir=tmp_path / "emb"))
    assert report.stage("filter")["n_in"] == report.stage("ensemble")["n_out"]
    raw["filter"] = None
    fixture_config.write_text(json.dumps(raw))
    report = run_pipeline(PipelineConfig.load(fixture_config, output_dir=tmp_path / "nofilter"))
    assert report.stage("filter")["skipped"]
    assert report.stage("filter")["n_out"] == report.stage("ensemble")["n_out"]


def test_law_documents(tmp_path):
    (tmp_path / "law.bn.txt").write_text("(ক) প্রথম ধারা;\n(খ) দ্বিতীয় ধারা;\n(গ) তৃতীয় ধারা।\n", encoding="utf-8")
    (tmp_path / "law.en.txt").write_text("(a) first clause;\n(b) second clause;\n(c) third clause.\n", encoding="utf-8")
    raw = {
        "manifest": [{"id": "law", "src": "law.bn.txt", "tgt": "law.en.txt", "law": True}],
        "aligners": {"bullets": {"method": "bullets"}, "length": {"method": "length"}},
        "ensemble": ["bullets"],
        "filter": None,
    }
    (tmp_path / "c.json").write_text(json.dumps(raw), encoding="utf-8")
    report = run_pipeline(PipelineConfig.load(tmp_path / "c.json"))
    pairs = read_pairs(tmp_path / "run" / "pairs.tsv")
    assert [p.src_text for p in pairs] == sorted(["(ক) প্রথম ধারা;", "(খ) দ্বিতীয় ধারা;", "(গ) তৃতীয় ধারা।"])
    assert report.stage("segment")["src_sentences"] == 3


def test_bead_vectors_average_unit_rows():
    rows = np.array([[3.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    vecs = bead_vectors([AlignmentLink((0, 1), (2,))], rows, "src")
    assert np.allclose(vecs, [[0.5, 0.5]])


# --- sweep ------------------------------------------------------------------------


def test_default_margins():
    m = default_margins()
    assert len(m) == 21 and m[0] == 0.90 and m[-1] == 1.10


def test_sweep_rows_equal_standalone_runs():
    corpus, gold = synthetic.sweep_corpus()
    src, tgt = EmbeddingMatrix(corpus.src), EmbeddingMatrix(corpus.tgt)
    params = FilterParams(mode="global")
    rows = sweep_margin(corpus.pairs, src, tgt, GoldSet.from_pairs(gold), params)
    assert rows[0].margin is None and rows[0].n_kept == len(corpus.pairs)
    for row in rows[1::5]:
        kept, _ = filter_pool(corpus.pairs, src, tgt, FilterParams(margin=row.margin, mode="global"))
        assert row.n_kept == len(kept)
    recalls = [r.recall for r in rows[1:]]
    assert all(a >= b for a, b in zip(recalls, recalls[1:]))
    best = max(rows[1:], key=lambda r: r.f1)
    assert 0.90 < best.margin < 1.10


def test_sweep_from_fixture_config_and_csv(fixture_config, tmp_path):
    cfg = PipelineConfig.load(fixture_config)
    gold = GoldSet.from_pairs(read_pairs(fixture_config.parent / "gold.tsv"))
    rows = sweep_from_config(cfg, gold)
    assert len(rows) == 22
    assert not (fixture_config.parent / "run").exists()
    path = tmp_path / "sweep.csv"
    write_sweep_csv(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0] == "margin,precision,recall,f1,n_kept"
    assert lines[1].startswith("none,") and lines[2].startswith("0.90,")


# --- section matching ----------------------------------------------------------------

SECTIONS = [
    ["The river floods every monsoon season.", "Farmers plant rice after the water recedes."],
    ["The city has three large universities.", "Students come from many districts."],
    ["Cricket is the most popular sport.", "The national team plays at home often."],
]


def test_identical_sections_all_match():
    assert match_wiki_sections(SECTIONS, SECTIONS) == [(0, 0), (1, 1), (2, 2)]


def test_unrelated_sections_do_not_match():
    other = [["zebra quantum violet"], ["marble oxygen tundra"]]
    assert match_wiki_sections(SECTIONS, other) == []
    assert match_wiki_sections([], SECTIONS) == []


def test_greedy_matching_on_score_matrix():
    scores = np.array([[5.0, 1.0, 0.0], [2.0, 35.0, 4.0], [0.0, 3.0, 5.0]])
    assert greedy_section_matching(scores) == [(1, 1)]
    contested = np.array([[90.0, 80.0], [85.0, 30.0]])
    matches = greedy_section_matching(contested)
    assert matches == [(0, 0), (1, 1)]
    assert len({i for i, _ in matches}) == len({j for _, j in matches}) == len(matches)


def test_threshold_is_strict():
    assert greedy_section_matching(np.array([[20.0]])) == []
    assert greedy_section_matching(np.array([[20.01]])) == [(0, 0)]


def test_case_folding_in_section_scores():
    upper = [[s.upper() for s in sec] for sec in SECTIONS]
    assert match_wiki_sections(upper, SECTIONS) == [(0, 0), (1, 1), (2, 2)]
    assert match_wiki_sections(upper, SECTIONS, case_fold=False) == []


def test_read_sections(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("a\nb\n\n\nc\n", encoding="utf-8")
    assert read_sections(path) == [["a", "b"], ["c"]]
