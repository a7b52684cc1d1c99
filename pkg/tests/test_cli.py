from __future__ import annotations

import json
import subprocess
import sys

import pytest

from explorable import config
from explorable.cli import main
from explorable.graph import antipode_of_degree4, build_c, build_d, from_json, to_json


@pytest.fixture(autouse=True)
def restore_config():
    saved = config.get_config()
    yield
    config._config = saved


def write_graph(path, g):
    path.write_text(to_json(g))
    return str(path)


def test_gen_dot(capsys):
    assert main(["gen", "--family", "c", "--i", "1", "--format", "dot"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("graph") and out.count("--") == 4


def test_gen_fstar_json(tmp_path):
    out = tmp_path / "d3.json"
    assert main(["gen", "--family", "fstar:r=2", "--i", "3", "--out", str(out)]) == 0
    assert from_json(out.read_text()).n == 25


def test_gen_unknown_family(capsys):
    assert main(["gen", "--family", "nope", "--i", "1"]) == 1
    assert "unknown family" in capsys.readouterr().err


def test_view_k2(tmp_path, capsys):
    from explorable.graph import PortGraph

    p = write_graph(tmp_path / "k2.json", PortGraph(2, [[(1, 0)], [(0, 0)]]))
    assert main(["view", "--graph", p, "--node", "0", "--k", "1"]) == 0
    assert capsys.readouterr().out.strip() == "(:1 (0:1))"
    assert main(["view", "--graph", p, "--node", "5", "--k", "1"]) == 1


def test_view_eq(tmp_path, capsys):
    c3, d2 = build_c(3), build_d(2)
    a = write_graph(tmp_path / "c3.json", c3)
    b = write_graph(tmp_path / "d2.json", d2)
    args = ["view-eq", "--graph", a, "--node", str(c3.degrees.index(3)), "--graph2", b,
            "--node2", str(antipode_of_degree4(d2))]
    assert main(args + ["--k", "5"]) == 0
    assert capsys.readouterr().out.strip() == "yes"
    assert main(args + ["--k", "6"]) == 0
    assert capsys.readouterr().out.strip() == "no"
    assert main(args + ["--k", "5", "--k2", "4"]) == 1


def test_run_with_trace(tmp_path, capsys):
    p = write_graph(tmp_path / "c5.json", build_c(5))
    tr = tmp_path / "t.jsonl"
    assert main(["run", "--graph", p, "--agent", "a-f", "--start", "2", "--trace", str(tr)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["explored"] and doc["status"] == "stopped"
    lines = tr.read_text().splitlines()
    assert json.loads(lines[-1]) == {"status": "stopped"}


def test_run_limit_inconclusive(tmp_path):
    p = write_graph(tmp_path / "c5.json", build_c(5))
    assert main(["run", "--graph", p, "--agent", "explo:c", "--limit", "3"]) == 2


def test_run_unknown_agent(tmp_path):
    p = write_graph(tmp_path / "c5.json", build_c(5))
    assert main(["run", "--graph", p, "--agent", "bogus"]) == 1


def test_explo_all_starts(capsys):
    assert main(["explo", "--family", "c", "--host-i", "3", "--all-starts"]) == 0
    assert capsys.readouterr().out.count("status=stopped") == 6


def test_explo_universal(capsys):
    assert main(["explo", "--family", "c", "--host-i", "1", "--universal", "--start", "0"]) == 0


def test_uxs_search_and_verify(tmp_path, capsys):
    out = tmp_path / "u4.txt"
    assert main(["--cache-dir", str(tmp_path), "uxs", "search", "--n", "4", "--out", str(out)]) == 0
    assert main(["uxs", "verify", "--file", str(out)]) == 0
    assert "uncovered_pairs=0" in capsys.readouterr().out
    bad = tmp_path / "bad.txt"
    bad.write_text("N 4\n0\n")
    assert main(["uxs", "verify", "--file", str(bad)]) == 1
    assert main(["uxs", "verify", "--file", str(bad), "--n", "9"]) == 2


def test_refute_naive(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    assert main(["refute", "--candidate", "naive:B=5", "--mode", "enum", "--report", str(rep)]) == 0
    doc = json.loads(rep.read_text())
    assert doc["verdict"] == "refuted" and doc["r"] == 5
    assert (tmp_path / "rep.e1.jsonl").exists()


def test_refute_needs_candidate():
    assert main(["refute"]) == 1


def test_reproducible_output(tmp_path):
    cmd = [sys.executable, "-m", "explorable", "gen", "--family", "trees", "--i", "9"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and from_json(a).n == 5
