import json
import logging
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nlgkit.cli import main
from nlgkit.config import ConfigError, RunConfig
from nlgkit.dataset import dump_jsonl, load_dataset
from nlgkit.errors import DuplicateId, Malformed
from nlgkit.report import dumps

from oracles import spearman_by_hand

GOLDEN = Path(__file__).resolve().parent / "golden"
LEXICON = str(Path(__file__).resolve().parent / "fixtures" / "wrestlers_lexicon.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


# -- datasets ------------------------------------------------------------------

def test_csv_minimal(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text('mr,ref\n"inform(name[Aromi])","Aromi is nice."\n', encoding="utf-8")
    (rec,) = load_dataset(p)
    assert rec.references == ["Aromi is nice."] and rec.mr == "inform(name[Aromi])"


def test_jsonl_missing_references_warns(tmp_path, caplog):
    p = write_jsonl(tmp_path / "d.jsonl", [{"id": "x", "mr": "inform()"}])
    with caplog.at_level(logging.WARNING):
        (rec,) = load_dataset(p)
    assert rec.references == [] and "references" in caplog.text


def test_format_sniffing_without_extension(tmp_path):
    p = write_jsonl(tmp_path / "data", [{"id": "a", "references": ["x"]}])
    assert load_dataset(p)[0].id == "a"
    q = tmp_path / "data2"
    q.write_text("mr,ref\ninform(),hello\n", encoding="utf-8")
    assert load_dataset(q)[0].references == ["hello"]


def test_dataset_errors(tmp_path):
    with pytest.raises(DuplicateId):
        load_dataset(write_jsonl(tmp_path / "d.jsonl", [{"id": "a"}, {"id": "a"}]))
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a"}\n{oops\n', encoding="utf-8")
    with pytest.raises(Malformed) as info:
        load_dataset(bad)
    assert info.value.line == 2


def test_csv_fixture_round_trip(fixtures, tmp_path):
    records = load_dataset(fixtures / "e2e_style_100.csv")
    assert len(records) == 100 and all(len(r.references) == 1 for r in records)
    text = dump_jsonl(records)
    p = tmp_path / "out.jsonl"
    p.write_text(text, encoding="utf-8")
    again = load_dataset(p)
    assert again == records
    assert dump_jsonl(again) == text


def test_export_command(fixtures, tmp_path, capsys):
    code, out, _ = run(capsys, "export", fixtures / "e2e_style_100.csv")
    assert code == 0
    assert out == dump_jsonl(load_dataset(fixtures / "e2e_style_100.csv"))


# -- config ----------------------------------------------------------------------

def test_config_file_and_overrides(tmp_path):
    p = tmp_path / "run.conf"
    p.write_text("# comment\nbleu.max_n = 2\nseed = 7\n", encoding="utf-8")
    cfg = RunConfig.load(p, {"seed": "9"})
    assert cfg["bleu.max_n"] == 2 and cfg["seed"] == 9
    assert "jobs" not in cfg.embedded() and "format" not in cfg.embedded()


@pytest.mark.parametrize("overrides", [
    {"nope": "1"}, {"bleu.max_n": "x"}, {"metrics": "bleu,meteor"}, {"lexicon": "/no/such/file.json"},
    {"semsim.provider": "embedding"},
])
def test_config_errors(overrides):
    with pytest.raises(ConfigError):
        RunConfig.load(None, overrides)


def test_report_float_formatting():
    assert dumps({"b": 1 / 3, "a": float("nan"), "c": -0.0}) == \
        '{\n  "a": null,\n  "b": 0.333333,\n  "c": 0.000000\n}\n'


# -- score -----------------------------------------------------------------------

def test_identity_outputs_score_one(tmp_path, capsys):
    rows = [{"id": str(i), "references": [t], "outputs": {"sys": t}}
            for i, t in enumerate(["The pub is cheap.", "Aromi serves Italian food in the city centre."])]
    code, out, _ = run(capsys, "score", write_jsonl(tmp_path / "d.jsonl", rows), "--set", "metrics=bleu,ter,rouge_l")
    assert code == 0
    report = json.loads(out)
    assert [it["scores"]["bleu"] for it in report["items"]] == [1.0, 1.0]
    assert [it["scores"]["ter"] for it in report["items"]] == [0.0, 0.0]


def test_empty_output_scores_zero_with_flag(tmp_path, capsys):
    rows = [{"id": "1", "references": ["The pub is cheap."], "outputs": {"sys": ""}}]
    code, out, _ = run(capsys, "score", write_jsonl(tmp_path / "d.jsonl", rows))
    item = json.loads(out)["items"][0]
    assert code == 0
    assert item["scores"]["bleu"] == 0.0
    assert "empty_candidate" in item["flags"]["bleu"]
    assert item["scores"]["gbm.readability"] is None


def test_score_golden(fixtures, capsys):
    code, out, _ = run(capsys, "score", fixtures / "rated_systems.jsonl", "--seed", "42")
    assert code == 0
    golden = GOLDEN / "score_rated_systems.json"
    if os.environ.get("NLGKIT_UPDATE_GOLDEN"):
        golden.write_text(out, encoding="utf-8")
    assert out == golden.read_text(encoding="utf-8")


def test_score_table(fixtures, capsys):
    code, out, _ = run(capsys, "score", fixtures / "rated_systems.jsonl", "--format", "table",
                       "--set", "metrics=bleu,rouge_l")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].split() == ["system", "bleu", "rouge_l"]
    assert [ln.split()[0] for ln in lines[2:]] == ["bad", "good", "mid"]


def test_score_without_references_is_usage_error(tmp_path, capsys):
    rows = [{"id": "1", "outputs": {"s": "x"}}]
    code, _, err = run(capsys, "score", write_jsonl(tmp_path / "d.jsonl", rows))
    assert code == 2 and "no references" in err


# -- correlate -------------------------------------------------------------------

def test_correlate_from_saved_report(fixtures, tmp_path, capsys):
    report = tmp_path / "scores.json"
    assert run(capsys, "score", fixtures / "rated_systems.jsonl", "--out", report)[0] == 0
    code, out, _ = run(capsys, "correlate", fixtures / "rated_systems.jsonl", "--report", report,
                       "--set", "bootstrap.n_resamples=200")
    assert code == 0
    rows = json.loads(out)["rows"]
    rhos = [abs(r["rho"]) for r in rows if r["rho"] is not None]
    assert rhos == sorted(rhos, reverse=True)
    for r in rows:
        if r["rho"] is not None:
            assert r["ci_low"] <= r["rho"] <= r["ci_high"]
    code2, out2, _ = run(capsys, "correlate", fixtures / "rated_systems.jsonl", "--set", "bootstrap.n_resamples=200")
    assert code2 == 0 and json.loads(out2)["rows"] == rows


def test_correlate_ratings_equal_metric(tmp_path, capsys):
    rows = []
    for i, (good, bad) in enumerate([(0.9, 0.1), (0.7, 0.3), (0.8, 0.2), (0.6, 0.4)]):
        rows.append({"id": str(i), "references": ["x"], "outputs": {"a": "x", "b": "y"},
                     "ratings": {"a": {"q": 1 + 5 * good}, "b": {"q": 1 + 5 * bad}}})
    data = write_jsonl(tmp_path / "d.jsonl", rows)
    code, out, _ = run(capsys, "correlate", data, "--set", "metrics=bleu", "--set", "bootstrap.n_resamples=100")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    bleu = [1.0, 0.0] * 4
    ratings = [q for r in rows for q in (r["ratings"]["a"]["q"], r["ratings"]["b"]["q"])]
    assert row["rho"] == pytest.approx(spearman_by_hand(bleu, ratings), abs=1e-6)
    assert row["ranking_accuracy"] == 1.0


def test_correlate_rating_out_of_scale(tmp_path, capsys):
    rows = [{"id": str(i), "references": ["x"], "outputs": {"a": "x"}, "ratings": {"a": {"q": 9}}} for i in range(3)]
    code, _, err = run(capsys, "correlate", write_jsonl(tmp_path / "d.jsonl", rows), "--set", "metrics=bleu")
    assert code == 2 and "outside" in err


# -- corpus-stats ----------------------------------------------------------------

def test_corpus_stats_order_and_table(fixtures, tmp_path, capsys):
    single = write_jsonl(tmp_path / "one.jsonl", [{"id": "1", "mr": "inform(name = Aromi)", "references": ["Aromi is a pub."]}])
    code, out, _ = run(capsys, "corpus-stats", fixtures / "e2e_style_100.csv", single)
    assert code == 0
    report = json.loads(out)
    assert [d["dataset"] for d in report["datasets"]] == [str(fixtures / "e2e_style_100.csv"), str(single)]
    one = report["datasets"][1]["stats"]
    assert one["content_selection_rate"] == 0.0 and one["frac_level01"] == 1.0
    code, out, _ = run(capsys, "corpus-stats", single, "--format", "table")
    assert out.splitlines()[0].split()[:3] == ["Dataset", "LS", "MSTTR"]


# -- validate ----------------------------------------------------------------------

def test_validate_exit_codes(fixtures, capsys):
    assert run(capsys, "validate", fixtures / "validate_all_pass.jsonl", "--set", f"lexicon={LEXICON}")[0] == 0
    assert run(capsys, "validate", fixtures / "validate_all_fail.jsonl", "--set", f"lexicon={LEXICON}")[0] == 1


def test_validate_matches_library(fixtures, capsys):
    from nlgkit.mr import SlotLexicon, parse_mr
    from nlgkit.validate import validate_batch

    code, out, _ = run(capsys, "validate", fixtures / "validate_mixed.jsonl", "--set", f"lexicon={LEXICON}")
    report = json.loads(out)
    records = load_dataset(fixtures / "validate_mixed.jsonl")
    batch = validate_batch([(parse_mr(r.mr), r.references[0]) for r in records],
                           lexicon=SlotLexicon.load(LEXICON))
    assert report["pass_rate"] == round(batch.pass_rate, 6)
    assert report["gate_failures"] == batch.gate_failures
    assert [o["passed"] for o in report["outcomes"]] == [o.passed for o in batch.outcomes]
    assert code == (0 if batch.pass_rate >= 0.5 else 1)


# -- exit codes and usage -----------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["score", "/no/such/file.jsonl"],
    ["score", "{fixtures}/rated_systems.jsonl", "--set", "bleu.max_n=abc"],
    ["validate", "{fixtures}/validate_mixed.jsonl", "--config", "/no/such.conf"],
])
def test_input_errors_exit_2(fixtures, capsys, argv):
    code, _, err = run(capsys, *[a.format(fixtures=fixtures) for a in argv])
    assert code == 2 and err.startswith("nlgkit: error:")


def test_bad_mr_is_input_error(tmp_path, capsys):
    rows = [{"id": "1", "mr": "inform(name = x", "references": ["x y z"]}]
    code, _, err = run(capsys, "validate", write_jsonl(tmp_path / "d.jsonl", rows))
    assert code == 2 and "byte offset" in err


def test_usage_error_exit_2():
    proc = subprocess.run([sys.executable, "-m", "nlgkit", "score"], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "nlgkit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("nlgkit ")
