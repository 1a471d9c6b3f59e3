import csv
import io
import json
import subprocess
import sys

import pytest

from deckscore.cli import main
from deckscore.pipeline import CSV_HEADER, round6


@pytest.fixture
def index_file(tmp_path, paper_md):
    out = tmp_path / "paper.idx"
    assert main(["index", str(paper_md), "-o", str(out)]) == 0
    return out


@pytest.fixture
def report_file(tmp_path, index_file, deck_json):
    out = tmp_path / "report.json"
    assert main(["score", str(index_file), str(deck_json), "-o", str(out)]) == 0
    return out


def records(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


def test_index_markdown(index_file):
    recs = records(index_file)
    assert recs[0]["format"] == "deckscore-index/1"
    assert recs[0]["nodes"] == 24
    assert sum(r["record"] == "node" for r in recs) == 24


def test_index_latex_project_node_count(tmp_path, latex_main):
    out = tmp_path / "tex.idx"
    assert main(["index", str(latex_main), "-o", str(out)]) == 0
    # hand count: Overview, text, Method, text, equation, text, Results, table, text
    nodes = [r for r in records(out) if r["record"] == "node"]
    assert [n["type"] for n in nodes] == [
        "heading", "text", "heading", "text", "equation", "text", "heading", "table", "text"
    ]


def test_index_missing_file_exit_2(tmp_path, capsys):
    missing = tmp_path / "absent.md"
    assert main(["index", str(missing), "-o", str(tmp_path / "x.idx")]) == 2
    assert "absent.md" in capsys.readouterr().err


def test_index_unsupported_exit_1(tmp_path):
    src = tmp_path / "a.pdf"
    src.write_text("x")
    assert main(["index", str(src), "-o", str(tmp_path / "x.idx")]) == 1


def test_index_writes_slices_and_outline(tmp_path, paper_md, capsys):
    sl = tmp_path / "slices.jsonl"
    assert main(["index", str(paper_md), "-o", str(tmp_path / "i"), "--slices", str(sl), "--outline", "1"]) == 0
    assert len(sl.read_text().splitlines()) == 24
    assert capsys.readouterr().out.splitlines() == ["Introduction", "Method", "Experiments", "Conclusion"]


def test_query_output_format(index_file, capsys):
    assert main(["query", str(index_file), "ablation child promotion recall", "--k", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert 1 <= len(lines) <= 3
    node_id, score, title = lines[0].split("\t")
    assert int(node_id) >= 0 and len(score.split(".")[1]) == 6


def test_query_flags_override(index_file, capsys):
    main(["query", str(index_file), "tree", "--alpha", "0", "--beta", "0", "--gamma", "0", "--delta", "0", "--m0", "0"])
    flat = capsys.readouterr().out
    main(["query", str(index_file), "tree"])
    assert flat != capsys.readouterr().out


def test_query_bad_param_exit_1(index_file):
    assert main(["query", str(index_file), "tree", "--k", "0"]) == 1


def test_score_report(report_file):
    rep = json.loads(report_file.read_text())
    assert 0 <= rep["artifact"]["S_A"] <= 1 and 0 <= rep["delivery"]["S_D"] <= 1
    assert rep["config"]["retrieval"]["top_k"] == 5
    assert set(rep["config"]["delivery"]["omega"]) == {"R", "N", "C", "T_temporal", "T_attention", "R_prime"}
    assert len(rep["slides"]) == 6
    assert rep["artifact"]["penalties"] == [0, 0, 0, 1, 0, 0]


def test_score_report_rounded(report_file):
    def walk(x):
        if isinstance(x, float):
            assert x == round6(x)
        elif isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    walk(json.loads(report_file.read_text()))


def test_score_is_byte_identical(tmp_path, index_file, deck_json, report_file):
    again = tmp_path / "again.json"
    assert main(["score", str(index_file), str(deck_json), "-o", str(again)]) == 0
    assert again.read_bytes() == report_file.read_bytes()


def test_score_malformed_package_exit_1(tmp_path, index_file, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"requirements": {"duration_minutes": 1}, "slides": [{"min_font_size": "x"}],
                               "scripts": [{"text": ""}]}))
    assert main(["score", str(index_file), str(bad)]) == 1
    assert "slides[0].min_font_size" in capsys.readouterr().err


def test_score_with_weights_file(tmp_path, index_file, deck_json, report_file):
    w = tmp_path / "w.ini"
    w.write_text("[artifact]\nalpha_stab = 1\nalpha_fid = 0\nalpha_read = 0\n")
    out = tmp_path / "w.json"
    assert main(["score", str(index_file), str(deck_json), "--weights", str(w), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["artifact"]["S_A"] == rep["artifact"]["P"] == 0.8


def test_bad_config_exit_1(index_file, deck_json, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[retrieval]\nbogus = 1\n")
    assert main(["--config", str(cfg), "score", str(index_file), str(deck_json)]) == 1
    assert main(["score", str(index_file), str(deck_json), "--config", str(cfg)]) == 1


def test_report_csv(report_file, capsys):
    assert main(["report", str(report_file), "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 7


def test_report_text(report_file, capsys):
    assert main(["report", str(report_file)]) == 0
    out = capsys.readouterr().out
    blocks = out.split("Slide ")[1:]
    assert len(blocks) == 6
    for b in blocks:
        tips = b.split("Tips:")[1].split("Likely questions:")[0]
        assert 3 <= tips.count("    - ") <= 6


def test_report_empty_path_exit_2():
    assert main(["report", ""]) == 2


def test_report_not_json_exit_1(tmp_path):
    p = tmp_path / "r.json"
    p.write_text("{oops")
    assert main(["report", str(p)]) == 1


def test_pace_simulate_default(deck_json, capsys):
    assert main(["pace-simulate", str(deck_json)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("node\tslide") and len(lines) == 7


def test_pace_simulate_budgets(tmp_path, deck_json, capsys):
    b = tmp_path / "b.json"
    b.write_text(json.dumps([{"node": "intro", "budget_seconds": 10, "slides": [1, 2]}]))
    assert main(["pace-simulate", str(deck_json), "--budgets", str(b)]) == 0
    last = capsys.readouterr().out.splitlines()[-1]
    assert last.endswith("TERMINATE")


def test_pace_simulate_bad_slide(tmp_path, deck_json):
    b = tmp_path / "b.json"
    b.write_text(json.dumps([{"node": "x", "budget_seconds": 10, "slides": [9]}]))
    assert main(["pace-simulate", str(deck_json), "--budgets", str(b)]) == 1


def test_augment_plan(deck_json, capsys):
    assert main(["augment-plan", str(deck_json)]) == 0
    doc = json.loads(capsys.readouterr().out)
    primaries = [s["primary_effect"] for s in doc["slides"]]
    assert primaries == [None, "ImageFocus", None, "DataVisualization", None, "ImageFocus"]
    assert doc["issues"] == []


def test_augment_plan_without_structural_recognition(deck_json, capsys):
    assert main(["augment-plan", str(deck_json), "--disable", "StructuralRecognition"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(s["primary_effect"] is None for s in doc["slides"])


def test_augment_plan_unknown_effect(deck_json):
    assert main(["augment-plan", str(deck_json), "--enable", "Sparkles"]) == 1


def test_ablate(index_file, deck_json, capsys):
    assert main(["ablate", str(index_file), str(deck_json)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split("\t") == ["param", "value", "S_A", "S_D", "F_t", "F_v"]
    assert len(lines) == 7


def test_module_entry_point(index_file):
    proc = subprocess.run(
        [sys.executable, "-m", "deckscore", "query", str(index_file), "tree"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout
