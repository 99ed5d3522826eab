from __future__ import annotations

import json

import pytest

from lexnet.cli import main
from lexnet.fixtures import data_path

QMDH = str(data_path("judgments_qmdh.jsonl"))
RAW = str(data_path("judgments_raw.jsonl"))


@pytest.fixture
def staged(tmp_path):
    out = tmp_path / "out"
    assert main(["ingest", "--input", QMDH, "--out", str(out)]) == 0
    return out


def test_ingest_reports_duplicate(tmp_path, capsys):
    assert main(["ingest", "--input", RAW, "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "48 kept, 1 duplicate removed, 0 rejected" in out
    assert len((tmp_path / "corpus.jsonl").read_text().splitlines()) == 48
    assert (tmp_path / "catalog.json").is_file()


def test_ingest_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert main(["ingest", "--input", str(empty), "--out", str(tmp_path / "o")]) == 0
    assert "0 kept" in capsys.readouterr().out


def test_ingest_malformed_line(tmp_path, capsys):
    src = tmp_path / "in.jsonl"
    lines = open(RAW, encoding="utf-8").read().splitlines()[:3] + ["{broken"]
    src.write_text("\n".join(lines) + "\n", encoding="utf-8")
    assert main(["ingest", "--input", str(src), "--out", str(tmp_path / "o")]) == 0
    cap = capsys.readouterr()
    assert "rejected: record 4" in cap.out
    assert "1 record(s) rejected" in cap.err


def test_ingest_unreadable_input(tmp_path, capsys):
    assert main(["ingest", "--input", str(tmp_path / "missing.jsonl"), "--out", str(tmp_path)]) == 1
    assert "no such file" in capsys.readouterr().err


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("LEXNET_OUT", str(tmp_path / "envout"))
    assert main(["ingest", "--input", RAW]) == 0
    assert (tmp_path / "envout" / "corpus.jsonl").is_file()


def test_analyze_auto(staged, capsys):
    assert main(["analyze", "--out", str(staged)]) == 0
    summary = json.loads((staged / "analysis.json").read_text())
    assert summary["post"]["nodes"] == 18
    assert summary["pre"] == {"nodes": 22, "components": 2}
    assert summary["excluded"] == ["(2023) Jing 0113 Min Chu No. 4242"]
    overall = (staged / "overall.csv").read_text().splitlines()
    assert overall[1].startswith("pre,49,22,")
    assert overall[2] == "post,48,18,92,46,0.301,dense,1"
    for name in ("metrics.csv", "metrics.txt", "outliers.csv", "components.txt", "affiliation.csv"):
        assert (staged / name).is_file()


def test_analyze_off(staged, capsys):
    assert main(["analyze", "--out", str(staged), "--exclude", "off"]) == 0
    summary = json.loads((staged / "analysis.json").read_text())
    assert summary["post"]["nodes"] == 22 and summary["post"]["components"] == 2


def test_analyze_no_outliers_pre_equals_post(tmp_path):
    assert main(["ingest", "--input", RAW, "--out", str(tmp_path)]) == 0
    assert main(["analyze", "--out", str(tmp_path)]) == 0
    pre, post = (tmp_path / "overall.csv").read_text().splitlines()[1:]
    assert pre.split(",")[1:] == post.split(",")[1:]
    assert (tmp_path / "metrics.csv").read_bytes() == (tmp_path / "metrics_pre.csv").read_bytes()


def test_analyze_manual_list_and_unknown_id(staged, capsys):
    assert main(["analyze", "--out", str(staged), "--exclude", "(2023) Jing 0113 Min Chu No. 4242"]) == 0
    assert main(["analyze", "--out", str(staged), "--exclude", "bogus-id"]) == 2
    assert "bogus-id" in capsys.readouterr().err


def test_analyze_empty_corpus(tmp_path, capsys):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    assert main(["analyze", "--input", str(empty), "--out", str(tmp_path)]) == 2
    assert "nothing to analyze" in capsys.readouterr().err


def test_analyze_format_selection(staged):
    assert main(["analyze", "--out", str(staged / "t"), "--input", str(staged / "corpus.jsonl"),
                 "--catalog", str(staged / "catalog.json"), "--format", "text"]) == 0
    assert (staged / "t" / "metrics.txt").is_file()
    assert not (staged / "t" / "metrics.csv").exists()
    assert main(["analyze", "--out", str(staged), "--format", "xlsx"]) == 1


def test_query_case(staged, capsys):
    main(["analyze", "--out", str(staged)])
    capsys.readouterr()
    cid = json.loads((staged / "corpus.jsonl").read_text().splitlines()[0])["case_id"]
    assert main(["query", "--out", str(staged), "--case", cid, "-k", "5", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 5
    scores = [float(r.split(",")[0]) for r in rows]
    assert scores == sorted(scores, reverse=True)


def test_query_provisions_in_type(staged, capsys):
    main(["analyze", "--out", str(staged)])
    capsys.readouterr()
    assert main(["query", "--out", str(staged), "--provisions", "Civil Code:6,Civil Code:1034"]) == 0
    assert "verdict: in_type" in capsys.readouterr().out


def test_query_outlier_verdict(staged, capsys):
    main(["analyze", "--out", str(staged)])
    capsys.readouterr()
    query = ("Measures for the Supervision and Administration of the Credit Card Business of Commercial Banks:70,"
             "Bank Card Measures:7,Civil Code:498,Civil Code:1038")
    assert main(["query", "--out", str(staged), "--provisions", query]) == 0
    assert "verdict: outlier" in capsys.readouterr().out


def test_query_unknown_provision_exit_code(staged, capsys):
    assert main(["query", "--out", str(staged), "--provisions", "Civil Code:9999"]) == 2
    assert "Civil Code, Art.9999" in capsys.readouterr().err
    assert main(["query", "--out", str(staged), "--case", "missing"]) == 2


def test_query_uses_short_codes(staged, capsys):
    assert main(["query", "--out", str(staged), "--provisions", "A,C,G", "-k", "1"]) == 0
    assert "in_type (overlap 1.0000)" in capsys.readouterr().out


def test_export_all_formats(staged, capsys):
    assert main(["export", "--out", str(staged)]) == 0
    for ext in ("graphml", "dot", "csv"):
        assert (staged / f"graph.{ext}").is_file()
    assert main(["export", "--out", str(staged), "--format", "gexf"]) == 1


def test_export_pre_stage_keeps_outlier_component(staged):
    assert main(["export", "--out", str(staged), "--stage", "pre", "--format", "dot"]) == 0
    assert '"Q\'"' in (staged / "graph.dot").read_text()


def test_stats(staged, capsys):
    assert main(["stats", "--out", str(staged)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("total: 49")


def test_reliability(tmp_path, capsys):
    src = tmp_path / "items.csv"
    src.write_text("BA,PC\n1,1\n2,3\n3,2\n4,5\n5,4\n")
    assert main(["reliability", "--input", str(src)]) == 0
    out = capsys.readouterr().out
    assert "Standardized Cronbach's alpha: 0.889" in out
    src.write_text("BA,PC\n1,1\n1,3\n")
    assert main(["reliability", "--input", str(src)]) == 2


@pytest.mark.parametrize("argv", [["analyze", "--nope"], [], ["query", "--case", "x", "--provisions", "A"]])
def test_usage_errors_exit_one(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_negative_k_is_usage_error(staged, capsys):
    assert main(["query", "--out", str(staged), "--provisions", "A", "-k", "-1"]) == 1
