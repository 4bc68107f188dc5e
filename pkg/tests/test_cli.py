import io
import json
import subprocess
import sys

import pytest

from hornlab import khs
from hornlab.cli import run
from hornlab.core import to_kstructure
from hornlab.generators import complete_hypergraph, cycle_graph, single_edge


@pytest.fixture
def files(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    khs.dump(complete_hypergraph(2, 2), "k2.khs")
    khs.dump(complete_hypergraph(3, 2), "k3.khs")
    khs.dump(single_edge(3), "e3.khs")
    khs.dump(cycle_graph(21), "c21.khs")
    return tmp_path


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_report_shape(files, capsys):
    code, rep = call(capsys, "hom", "k2.khs", "k3.khs")
    assert code == 0 and rep["hom"] is True
    assert rep["schema"] == "hornlab-report-1"
    assert rep["command"] == {"name": "hom", "argv": ["hom", "k2.khs", "k3.khs"], "seed": 0, "budget": None}


def test_hom_no(files, capsys):
    code, rep = call(capsys, "hom", "k3.khs", "k2.khs")
    assert code == 1 and rep["hom"] is False


def test_classify_edge(files, capsys):
    code, rep = call(capsys, "classify", "e3.khs")
    assert code == 0
    assert "SimNonBipartite" in json.dumps(rep)


def test_colour_and_analyze(files, capsys):
    assert call(capsys, "colour", "k3.khs", "-n", "2")[0] == 1
    assert call(capsys, "color", "k3.khs", "-n", "3")[0] == 0
    code, rep = call(capsys, "analyze", "c21.khs")
    assert code == 0 and json.dumps(rep).count("21") >= 1


def test_member(files, capsys, tmp_path):
    code, rep = call(capsys, "member", "k2.khs", "--template", "k3.khs", "--k", "2", "--certificate", "cert.json")
    assert code == 0
    assert json.loads((tmp_path / "cert.json").read_text())["member"] is True


def test_convert_round_trip(files, capsys, tmp_path):
    code, rep = call(capsys, "convert", "--to", "kstructure", "--k", "3", "k2.khs", "--out", "k2_3.khs")
    assert code == 0
    s = khs.load(str(tmp_path / "k2_3.khs"))
    assert s == to_kstructure(complete_hypergraph(2, 2), 3) and len(s.relation) == 6
    assert call(capsys, "convert", "--to", "hypergraph", "k2_3.khs", "--out", "back.khs")[0] == 0
    assert khs.load(str(tmp_path / "back.khs")) == complete_hypergraph(2, 2)


def test_format_error_exits_2(files, capsys, tmp_path):
    (tmp_path / "bad.khs").write_text('{"format":"khs-1","kind":"hypergraph","vertices":["a"],"edges":[["a","b"]]}')
    code, rep = call(capsys, "analyze", "bad.khs")
    assert code == 2 and rep["error"]["type"] == "FormatError"
    assert "bad.khs" in rep["error"]["message"]


def test_usage_error_exits_2(files, capsys):
    assert run(["hom", "k2.khs"]) == 2
    assert run([]) == 2


def test_budget_exhausted_exits_3(files, capsys):
    code, rep = call(capsys, "generate", "sparse", "--k", "3", "--girth-above", "6", "--not-colourable", "3", "--budget", "0")
    assert code == 3 and rep["budget_exhausted"] is True


def test_replay_identity(files, capsys, tmp_path):
    code, rep = call(capsys, "efgame", "--base", "c21.khs", "--k", "2", "--rounds", "2", "--radius", "9",
                     "--spoiler", "random", "--trials", "50", "--seed", "4", "--out", "r.json")
    assert code == 0 and rep["violation_count"] == 0
    code2, rep2 = call(capsys, "--replay", "r.json")
    assert code2 == code and rep2 == rep


def test_efgame_stdin_records_script(files, capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(sys, "stdin", io.StringIO("G S.3\nnonsense\nH B[3]/0.4\n"))
    code, rep = call(capsys, "efgame", "--base", "c21.khs", "--k", "2", "--rounds", "2", "--radius", "9",
                     "--spoiler", "stdin", "--out", "s.json")
    assert code == 0
    assert rep["policy"]["moves"] == [["G", "S.3"], ["H", "B[3]/0.4"]]
    assert "--spoiler" in rep["command"]["argv"] and "stdin" not in rep["command"]["argv"]
    assert call(capsys, "--replay", "s.json")[1] == rep


def test_generate_seeded(files, capsys):
    a = call(capsys, "generate", "forest", "--k", "3", "--edges", "4", "--seed", "9")[1]
    b = call(capsys, "generate", "forest", "--k", "3", "--edges", "4", "--seed", "9")[1]
    assert a["structure"] == b["structure"]


def test_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "hornlab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "hornlab" in proc.stdout
