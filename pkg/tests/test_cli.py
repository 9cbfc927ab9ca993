import json
import subprocess
import sys

import pytest

from conftest import planted_communities
from mixspec import load_zachary
from mixspec.cli import main
from mixspec.datasets import write_labels
from mixspec.graph import write_edge_list


@pytest.fixture
def karate_files(tmp_path):
    g, truth = load_zachary()
    write_edge_list(g, tmp_path / "k.edges")
    write_labels(tmp_path / "k.truth", g, truth.labels)
    return tmp_path / "k.edges", tmp_path / "k.truth"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_triangles_json_and_csv(capsys, karate_files, tmp_path):
    edges, _ = karate_files
    code, out, _ = run(capsys, "triangles", edges, "--cache", tmp_path / "cache")
    d = json.loads(out)
    assert code == 0 and (d["nodes"], d["edges"], d["triangles"]) == (34, 78, 45)
    code, out, _ = run(capsys, "triangles", edges, "--out", "csv", "--cache", tmp_path / "cache")
    lines = out.splitlines()
    assert lines[0] == "a,b,c" and len(lines) == 46


def test_cluster_fixed_lambda(capsys, karate_files):
    edges, truth = karate_files
    code, out, _ = run(capsys, "cluster", "--graph", edges, "--truth", truth, "--method", "gl", "--lambda", "0.5",
                       "--criterion", "con3")
    d = json.loads(out)
    assert code == 0 and d["criterion"] == "con3" and d["lambda"] == 0.5
    assert d["eval"]["eps_n"] == 1 and len(d["labels"]) == 34


def test_cluster_named_dataset_all_criteria_csv(capsys):
    code, out, _ = run(capsys, "cluster", "--graph", "zachary", "--method", "rw", "--out", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("node,con2,") and lines[0].endswith(",km") and len(lines) == 35


def test_cluster_auto_and_oracle(capsys):
    code, out, _ = run(capsys, "cluster", "--graph", "zachary", "--method", "gl", "--lambda", "auto",
                       "--criterion", "con2,km")
    res = json.loads(out)
    assert code == 0 and [r["criterion"] for r in res] == ["con2", "km"]
    assert all("selection" in r for r in res)
    assert res[1]["selection"]["mode"] == "triangle-density"
    code, out, _ = run(capsys, "cluster", "--graph", "zachary", "--method", "rw", "--lambda", "oracle",
                       "--criterion", "con2", "--metric", "t", "--grid", "0.2,0.5,0.8")
    d = json.loads(out)
    assert code == 0 and d["lambda"] in (0.2, 0.5, 0.8) and d["selection"]["mode"] == "oracle"


def test_cluster_multiway(capsys):
    code, out, _ = run(capsys, "cluster", "--graph", "zachary", "--method", "ng", "--k", "3")
    d = json.loads(out)
    assert code == 0 and d["criterion"] == "km" and len(set(d["labels"])) == 3


def test_sweep_and_curve(capsys, karate_files):
    edges, _ = karate_files
    code, out, _ = run(capsys, "sweep", "--graph", edges, "--method", "rw", "--criterion", "ncut3")
    d = json.loads(out)
    assert code == 0 and 1 <= d["best_u"] <= 33 and len(d["prefix"]) == d["best_u"]
    code, out, _ = run(capsys, "sweep", "--graph", edges, "--method", "shi", "--criterion", "con2", "--emit-curve")
    assert code == 0 and len(out.splitlines()) == 34


def test_eval(capsys, karate_files, tmp_path):
    edges, truth = karate_files
    code, out, _ = run(capsys, "eval", "--graph", edges, "--truth", truth, "--labels", truth)
    assert code == 0 and json.loads(out) == {"eps_n": 0, "eps_e": 0, "eps_t": 0, "nmi": 1.0}
    text = truth.read_text().splitlines()
    node, lab = text[-1].split()
    (tmp_path / "cand").write_text("\n".join(text[:-1] + [f"{node} {1 - int(lab)}"]) + "\n")
    code, out, _ = run(capsys, "eval", "--graph", edges, "--truth", truth, "--labels", tmp_path / "cand", "--out", "csv")
    assert code == 0 and out.splitlines()[1].startswith("1,")


def test_ocut(capsys):
    code, out, _ = run(capsys, "ocut", "--graph", "zachary", "--method", "gl", "--metric", "n", "--emit-curve")
    d = json.loads(out)
    assert code == 0 and d["value"] <= 1 and len(d["curve"]) == 33
    code, out, _ = run(capsys, "ocut", "--graph", "zachary", "--metric", "t", "--out", "csv")
    assert code == 0 and out.splitlines()[0] == "metric,best_u,value"


def test_extract_pairs(capsys, tmp_path):
    g, comms = planted_communities(n=200, size=25, seed=3)
    write_edge_list(g, tmp_path / "g.edges")
    (tmp_path / "g.cmty").write_text("\n".join(" ".join(map(str, c)) for c in comms) + "\n")
    code, out, _ = run(capsys, "extract-pairs", "--graph", tmp_path / "g.edges", "--communities", tmp_path / "g.cmty",
                       "--top", 3, "--max-size", 30, "--out-dir", tmp_path / "pairs")
    d = json.loads(out)
    assert code == 0 and d["pairs"] == 3
    assert sorted(p.name for p in (tmp_path / "pairs").iterdir())[:2] == ["pair0000.edges", "pair0000.truth"]


def test_bench(capsys, karate_files, tmp_path):
    edges, truth = karate_files
    cfg = {"networks": [{"graph": str(edges), "truth": str(truth)}], "methods": ["rw"], "lambda_modes": ["0.5"],
           "criteria": ["con2", "km"]}
    (tmp_path / "c.json").write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "bench", "--config", tmp_path / "c.json", "--output-dir", tmp_path / "res")
    d = json.loads(out)
    assert code == 0 and d["rows"] == 2 and d["failures"] == 0
    assert (tmp_path / "res" / "grid.csv").exists()


@pytest.mark.parametrize(
    "argv, error",
    [
        (["cluster", "--graph", "nowhere.edges"], "FileNotFoundError"),
        (["cluster", "--graph", "zachary", "--lambda", "2"], "DomainError"),
        (["cluster", "--graph", "zachary", "--lambda", "much"], "DomainError"),
        (["cluster", "--graph", "zachary", "--criterion", "con7"], "ValueError"),
        (["cluster", "--graph", "zachary", "--method", "msc"], "IsolatedNodeError"),
        (["bench", "--config", "nowhere.json"], None),
    ],
)
def test_failures_exit_one_with_json(capsys, argv, error):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    rec = json.loads(err.strip().splitlines()[-1])
    assert rec["command"] == argv[0] and rec["message"]
    if error:
        assert rec["error"] == error


def test_malformed_edge_list_reports_line(capsys, tmp_path):
    (tmp_path / "bad.edges").write_text("0 1\n1 2\nthree four\n")
    code, _, err = run(capsys, "triangles", tmp_path / "bad.edges")
    rec = json.loads(err)
    assert code == 1 and rec["line"] == 3


def test_eval_without_truth(capsys, karate_files):
    edges, truth = karate_files
    code, _, err = run(capsys, "eval", "--graph", edges, "--labels", truth)
    assert code == 1 and "truth" in json.loads(err)["message"]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "mixspec.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("mixspec ")
