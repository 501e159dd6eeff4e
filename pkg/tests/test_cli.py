import json
import subprocess
import sys

import pytest

from heinzlab.checks import CHECK_IDS
from heinzlab.cli import main


def test_run_to_stdout(capsys):
    code = main(["run", "--checks", "hs_strong_reverse", "--trials", "1", "--dims", "2", "--seed", "42"])
    out, err = capsys.readouterr()
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("check_id,part,dim,trial,seed,nu")
    assert lines[1].startswith("hs_strong_reverse,main,2,0,17135905091939724543,1.2827432211232828,")
    assert "OK" in err


def test_run_json_and_out(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["run", "--checks", "kaur,aujla", "--trials", "2", "--dims", "2,3", "--format", "json",
                 "--out", str(out), "--norms", "hs,op"])
    assert code == 0
    data = json.loads(out.read_text())
    assert set(data["summary"]) == {"kaur", "aujla"}
    assert {r["norm_kind"] for r in data["rows"]} == {"hs", "op"}
    assert capsys.readouterr().out == ""


def test_run_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["run", "--checks", "all", "--trials", "2", "--dims", "1,2", "--seed", "3",
                     "--falsify-trials", "100", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_nu_override(tmp_path, capsys):
    out = tmp_path / "low.csv"
    assert main(["run", "--checks", "hs_strong_reverse", "--trials", "5", "--dims", "3",
                 "--nu", "hs_strong_reverse=-2:0.2;0.3:0.45", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert rows and all(",low_nu," in r for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--checks", "nope"],
        ["run", "--trials", "0"],
        ["run", "--dims", "2,x"],
        ["run", "--dims", "20"],
        ["run", "--tol", "-1"],
        ["run", "--norms", "frobenius"],
        ["run", "--nu", "nege"],
        ["run", "--nu", "nege=a:b"],
        ["explain", "nope"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_io_error_exit_2(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["run", "--checks", "cpr", "--trials", "1", "--dims", "1", "--out", str(blocker / "x.csv")])
    assert code == 2


def test_explain(capsys):
    assert main(["explain", "hs_strong_reverse"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("hs_strong_reverse") and "claim:" in out and "hypotheses:" in out
    assert main(["explain", "all"]) == 0
    out = capsys.readouterr().out
    assert all(cid in out for cid in CHECK_IDS)


def test_replay(tmp_path, capsys):
    d = tmp_path / "w"
    assert main(["run", "--checks", "tensor_hadamard", "--trials", "2", "--dims", "2", "--out",
                 str(tmp_path / "r.csv"), "--dump-witnesses", str(d)]) == 0
    (f,) = d.glob("*.json")
    capsys.readouterr()
    assert main(["replay", str(f)]) == 0
    out = capsys.readouterr().out
    assert "tensor_hadamard/tensor" in out and "holds" in out
    bad = tmp_path / "bad.json"
    bad.write_text("]")
    assert main(["replay", str(bad)]) == 2
    assert main(["replay", str(tmp_path / "missing.json")]) == 2


def test_failure_exit_1(tmp_path, capsys):
    d = tmp_path / "w"
    main(["run", "--checks", "heinz_reverse", "--trials", "1", "--dims", "2", "--out",
          str(tmp_path / "r.csv"), "--dump-witnesses", str(d)])
    (f,) = d.glob("*.json")
    data = json.loads(f.read_text())
    # claim the stored matrices gave a different answer: replay flags the mismatch
    data["cases"][0]["lhs"] += 1.0
    f.write_text(json.dumps(data))
    assert main(["replay", str(f)]) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "heinzlab", "explain", "cpr"], capture_output=True, text=True)
    assert res.returncode == 0 and "Corach-Porta-Recht" in res.stdout
