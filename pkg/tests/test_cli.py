import json
import subprocess
import sys

import pytest

from khlab.cli import ingest_table, main
from khlab.acceptance import data_path

from conftest import TREFOIL_PD


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_s_braid_lee(capsys):
    code, out, _ = run(capsys, "s", "--braid", "2:1,1,1", "--theory", "lee")
    assert code == 0
    assert json.loads(out)["reports"][0]["s"] == 2


def test_verify_theorem_unknot(capsys):
    code, out, _ = run(capsys, "verify-theorem", "--pd", "PD[]", "--panel", "default")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "PASS"
    assert {e["s"] for e in rep["results"]} == {0}
    assert len(rep["results"]) == 6


def test_homology_trefoil_bar_natan(capsys):
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL_PD, "--ring", "fp:2", "--h", "1", "--t", "0")
    assert code == 0
    assert json.loads(out)["theories"][0]["total"] == 2


def test_homology_integral_json_schema(capsys):
    code, out, _ = run(capsys, "homology", "--pd", TREFOIL_PD, "--ring", "z", "--h", "0", "--t", "0")
    degrees = json.loads(out)["theories"][0]["degrees"]
    assert degrees["3"]["torsion"] == [2]
    assert set(degrees["0"]) == {"free_rank", "torsion", "profile"}


def test_table_format(capsys):
    code, out, _ = run(capsys, "s", "--braid", "2:1,1,1", "--theory", "bar-natan", "--format", "table")
    assert code == 0 and "s=2" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["s", "--pd", "PD[X[1,2"], ["s", "--braid", "2:3", "--theory", "lee"],
        ["s", "--braid", "2:1,1", "--theory", "lee"],  # two components
        ["s", "--braid", "2:1,1,1"],  # no theory
        ["s", "--braid", "2:1,1,1", "--ring", "q"],  # incomplete triple
        ["s", "--braid", "2:1,1,1", "--ring", "fp:4", "--h", "1", "--t", "0"],
        ["homology", "--file", "/nonexistent/input.txt", "--theory", "lee"],
        ["table", "--table", "/nonexistent/table.csv"],
        ["verify-twist", "--braid", "2:1,1,1", "--src", "q,0,2", "--dst", "q,0,1"],
        ["verify-torsion", "--braid", "2:1,1,1", "--ring", "z", "--h", "0", "--t", "1", "--prime", "2"],
        ["s", "--theory", "lee"],  # no input
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert len(err.strip().splitlines()) == 1


def test_verify_failure_exit_1(capsys, monkeypatch):
    import khlab.cli as cli

    monkeypatch.setitem(cli.HANDLERS, "verify-theorem", lambda d, cfg: {"status": "FAIL"})
    code, _, _ = run(capsys, "verify-theorem", "--pd", "PD[]")
    assert code == 1


def test_other_verbs(capsys, tmp_path):
    code, out, _ = run(capsys, "canonical", "--braid", "2:1,1", "--theory", "lee")
    assert code == 0 and json.loads(out)["theories"][0]["span_rank"] == 4
    code, out, _ = run(capsys, "verify-twist", "--braid", "2:1,1,1", "--src", "q,0,4", "--dst", "q,0,1")
    assert code == 0 and json.loads(out)["status"] == "PASS"
    code, out, _ = run(capsys, "verify-torsion", "--braid", "2:1,1,1", "--ring", "z", "--h", "1", "--t", "0", "--prime", "2")
    assert code == 0 and json.loads(out)["status"] == "PASS"
    f = tmp_path / "k.txt"
    f.write_text(TREFOIL_PD)
    out_path = tmp_path / "out.json"
    code, out, _ = run(capsys, "s", "--file", str(f), "--theory", "lee", "--out", str(out_path))
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["name"] == "k"


def test_batch_rows_and_warnings(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(f'name,input\n3_1,"{TREFOIL_PD}"\nbad,"PD[X[1,2]"\nhopf,"braid:2:1,1"\n')
    code, out, err = run(capsys, "s", "--table", str(path), "--theory", "lee")
    rep = json.loads(out)
    assert code == 0
    assert [r["name"] for r in rep["results"]] == ["3_1", "hopf"]
    assert rep["results"][1]["error"] == "NOT_A_KNOT"
    assert rep["skipped"][0]["line"] == 3
    assert "line 3" in err


def test_batch_output_is_identical_across_thread_counts(capsys, monkeypatch):
    args = ["verify-theorem", "--table", "knots-upto-9", "--triple", "lee", "--triple", "bar-natan"]
    _, one, _ = run(capsys, *args, "--threads", "1")
    _, three, _ = run(capsys, *args, "--threads", "3")
    monkeypatch.setenv("KHLAB_THREADS", "2")
    _, env, _ = run(capsys, *args)
    assert one == three == env
    names = [r["name"] for r in json.loads(one)["results"]]
    assert names[:3] == ["0_1", "3_1", "4_1"]


def test_ingest_table_examples(tmp_path, capsys):
    with __import__("importlib").resources.as_file(data_path("knots-upto-9.csv")) as p:
        rows = ingest_table(p)
    assert len(rows) >= 49
    empty = tmp_path / "e.csv"
    empty.write_text("name,input\n")
    assert ingest_table(empty) == []
    bad = tmp_path / "b.csv"
    bad.write_text('name,input\nx,"PD[X[1,2]"\n3_1,"' + TREFOIL_PD + '"\n')
    rows = ingest_table(bad)
    assert [n for n, _ in rows] == ["3_1"]
    assert "line 2" in capsys.readouterr().err


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "khlab.cli", "s", "--braid", "2:1,1,1", "--theory", "lee"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["reports"][0]["s"] == 2


def test_reproduce_small(capsys):
    code, out, _ = run(capsys, "reproduce", "--criteria", "4")
    assert code == 0 and out.startswith("[PASS] criterion 4")
