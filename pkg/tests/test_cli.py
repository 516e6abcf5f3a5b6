import csv
import io
import json
import subprocess
import sys

import pytest

from selfsim.cli import main

from conftest import DATA

CANTOR = str(DATA / "cantor.kss")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kernel_json(capsys):
    code, out, _ = run(capsys, "kernel", CANTOR)
    assert code == 0
    obj = json.loads(out)
    assert len(obj["elements"]) == 4
    assert obj["matrix"] == [[2, 0, 0, 0], [1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 0, 1]]


def test_kernel_bad_digit(capsys):
    code, out, err = run(capsys, "kernel", str(DATA / "bad.kss"))
    assert code == 2 and out == ""
    assert "DigitRangeError" in err and "4:8" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "kernel", str(DATA / "nope.kss"))
    assert code == 2 and "cannot read" in err


def test_builtin_kernel(capsys):
    code, out, _ = run(capsys, "kernel", "--builtin", "full-cube-2-1")
    assert code == 0 and len(json.loads(out)["elements"]) == 1


def test_unknown_builtin(capsys):
    code, _, err = run(capsys, "dim", "--builtin", "koch")
    assert code == 2 and "UnknownSetError" in err


def test_dim(capsys):
    code, out, _ = run(capsys, "dim", CANTOR, "--tol", "1e-12", "--json")
    assert code == 0
    d = json.loads(out)["dimension"]
    assert d["value"].startswith("0.630929753571")
    from fractions import Fraction
    assert Fraction(d["upper"]) - Fraction(d["lower"]) <= Fraction(1, 10**12)
    assert d["precision"] == 15


def test_dim_singleton(capsys):
    code, out, _ = run(capsys, "dim", "--builtin", "singleton")
    assert code == 0 and out.startswith("dimension 0.000000000000000\n")


def test_entropy_table(capsys):
    code, out, _ = run(capsys, "entropy", CANTOR, "--depth", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("entropy 0.6309297535")
    assert len(lines) == 3 + 11
    assert lines[5].split("\t")[:3] == ["2", "8", "8"]


def test_entropy_csv(capsys, tmp_path):
    target = tmp_path / "e.csv"
    code, _, _ = run(capsys, "entropy", CANTOR, "-p", "5", "--csv", str(target))
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert code == 0 and [r["word_count"] for r in rows] == ["1", "3", "8", "18", "38", "78"]


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", CANTOR)
    assert code == 0
    report = json.loads(out)
    assert report["status"] == "PASS"
    assert {c["name"] for c in report["checks"]} >= {"sandwich", "ggdc-axioms", "ggdc-transfer"}


def test_verify_builtin_runs_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--builtin", "sierpinski-carpet")
    report = json.loads(out)
    assert code == 0
    assert any(c["name"] == "oracle-equality" and c["passed"] for c in report["checks"])
    assert report["dimension"]["value"].startswith("1.892789260714")


def test_verify_tampered_kernel(capsys, tmp_path):
    code, out, _ = run(capsys, "kernel", CANTOR)
    obj = json.loads(out)
    obj["matrix"][0][0] = 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, out, err = run(capsys, "verify", str(bad))
    assert code == 5
    assert json.loads(out)["status"] == "FAIL"
    assert "matrix-consistency" in err


def test_verify_untampered_kernel_file(capsys, tmp_path):
    target = tmp_path / "k.json"
    run(capsys, "kernel", CANTOR, "--json", str(target))
    code, _, _ = run(capsys, "verify", str(target))
    assert code == 0


def test_ggdc_dot(capsys, tmp_path):
    target = tmp_path / "g.dot"
    code, _, _ = run(capsys, "ggdc", CANTOR, "--dot", str(target))
    dot = target.read_text()
    assert code == 0 and dot.count("label=") == 7 and dot.count("->") == 12


def test_ggdc_json(capsys):
    code, out, _ = run(capsys, "ggdc", CANTOR)
    obj = json.loads(out)
    assert code == 0 and obj["validation"]["passed"] and len(obj["edges"]) == 12


def test_render_svg(capsys, tmp_path):
    target = tmp_path / "out.svg"
    code, _, _ = run(capsys, "render", CANTOR, "-p", "3", "--svg", str(target))
    assert code == 0 and target.read_text().count("<rect") == 18


def test_render_pgm(capsys, tmp_path):
    target = tmp_path / "out.pgm"
    code, _, _ = run(capsys, "render", "--builtin", "full-cube-2-2", "-p", "2", "--pgm", str(target), "--res", "16")
    data = target.read_bytes()
    assert code == 0 and data.startswith(b"P5\n16 16\n255\n") and set(data[13:]) == {0}


def test_render_errors(capsys, tmp_path):
    code, _, err = run(capsys, "render", "--builtin", "full-cube-2-2", "-p", "2", "--pgm", str(tmp_path / "x"), "--res", "10")
    assert code == 2 and "ResolutionMismatchError" in err
    code, _, _ = run(capsys, "render", CANTOR)
    assert code == 2
    code, _, _ = run(capsys, "render", CANTOR, "--svg", "--element", "9")
    assert code == 2


def test_count_builtin(capsys):
    code, out, _ = run(capsys, "count", "--builtin", "sierpinski-carpet", "-p", "2")
    assert code == 0
    assert out == "p,N_p,word_count\n0,1,1\n1,9,9\n2,80,80\n"


def test_count_json_from_spec(capsys):
    code, out, _ = run(capsys, "count", CANTOR, "-p", "3", "--json")
    obj = json.loads(out)
    assert obj["source"] == "kernel" and [r["N_p"] for r in obj["rows"]] == ["1", "3", "8", "18"]


def test_budget_flag_and_environment(capsys, monkeypatch):
    code, _, err = run(capsys, "kernel", "--builtin", "sierpinski-carpet", "--budget", "3")
    assert code == 3 and "KernelOverflowError" in err
    monkeypatch.setenv("SELFSIM_BUDGET", "3")
    code, _, _ = run(capsys, "kernel", "--builtin", "sierpinski-carpet")
    assert code == 3
    code, _, _ = run(capsys, "kernel", "--builtin", "sierpinski-carpet", "--budget", "100")
    assert code == 0


def test_tolerance_not_reached(capsys):
    code, out, err = run(capsys, "dim", str(DATA / "golden-mean.kss"), "--tol", "1e-30", "--max-iter", "2")
    assert code == 4
    assert json.loads(out)["certified"] is False


def test_bad_tolerance_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["dim", CANTOR, "--tol", "-1"])
    assert info.value.code == 2


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("base 2\ndim 1\nallow (0)\nallow (1)\n"))
    code, out, _ = run(capsys, "dim", "-")
    assert code == 0 and out.startswith("dimension 1.000000000000000")


def test_outputs_are_byte_identical(capsys):
    first = run(capsys, "kernel", "--builtin", "vicsek")[1]
    second = run(capsys, "kernel", "--builtin", "vicsek")[1]
    assert first == second


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "selfsim.cli", "dim", CANTOR], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("dimension 0.630929753571457")
