from __future__ import annotations

import json
import subprocess
import sys

import pytest

from arborpack.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "cycle3": "3 3 directed\n0 1\n1 2\n2 0\n",
        "sharp21": "2 2 directed\n0 1\n1 0\n",
        "k3": "3 6 directed\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n",
        "triangle": "3 3 undirected\n0 1\n1 2\n0 2\n",
        "loop": "2 1 directed\n0 0\n",
        "arc": "2 1 directed\n0 1\n",
    }.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_nu_f(capsys, files):
    code, out, _ = run(capsys, "nu-f", files["cycle3"])
    assert code == 0
    assert out == {"value": "3/2", "witness": [[0], [1], [2]]}


def test_nu_f_undirected_and_gamma(capsys, files):
    assert run(capsys, "nu-f", files["triangle"])[1]["value"] == "3/2"
    code, out, _ = run(capsys, "gamma-f", files["triangle"])
    assert code == 0 and out == {"value": "3/2", "witness": [0, 1, 2]}


def test_loop_file_is_usage_error(capsys, files):
    code, out, err = run(capsys, "nu-f", files["loop"])
    assert code == 2 and out is None
    assert "loop" in err


def test_feasibility(capsys, files):
    assert run(capsys, "feasibility", "--k", "1", files["cycle3"])[0] == 0
    code, out, _ = run(capsys, "feasibility", "--k", "2", files["cycle3"])
    assert code == 1 and out["violation"]["inequality"] == "(2)"
    code, out, _ = run(capsys, "feasibility", "--k", "1", "--c", "1", files["arc"])
    assert code == 1
    assert out["violation"] == {"inequality": "(3)", "parts": [[0], [1]], "I": [1, 2], "lhs": 1, "rhs": 2}
    code, out, _ = run(capsys, "feasibility", "--k", "0", "--c", "2", "--roots", "0,1", files["arc"])
    assert code == 0


def test_feasibility_roots_without_c(capsys, files):
    assert run(capsys, "feasibility", "--k", "1", "--roots", "0", files["arc"])[0] == 2


def test_pack_sharp_fails_hypothesis(capsys, files):
    code, out, _ = run(capsys, "pack", "--k", "2", "--d", "1", files["sharp21"])
    assert code == 1
    assert out["explanation"] == "hypothesis fails: nu_f = 2 = k+(d-1)/d"


def test_pack_then_verify_round_trip(capsys, files, tmp_path):
    for flags in ([], ["--proof-trace"]):
        code, cert, _ = run(capsys, "pack", "--k", "1", "--d", "1", *flags, files["cycle3"])
        assert code == 0
        assert ("trace" in cert) == bool(flags)
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(cert))
        code, report, _ = run(capsys, "verify", "--k", "1", "--d", "1", files["cycle3"], str(path))
        assert code == 0 and report == {"ok": True, "failures": []}


def test_verify_rejects_tampered_certificate(capsys, files, tmp_path):
    _, cert, _ = run(capsys, "pack", "--k", "2", "--d", "2", files["k3"])
    cert["extra"]["arcs"] = cert["trees"][0]["arcs"][:1]
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert))
    code, report, _ = run(capsys, "verify", "--k", "2", "--d", "2", files["k3"], str(path))
    assert code == 1 and not report["ok"]


def test_verify_wrong_k(capsys, files, tmp_path):
    _, cert, _ = run(capsys, "pack", "--k", "1", "--d", "1", files["cycle3"])
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert))
    code, report, _ = run(capsys, "verify", "--k", "0", "--d", "1", files["cycle3"], str(path))
    assert code == 1 and report["failures"][0].startswith("(0)")


def test_sharpness(capsys, tmp_path):
    code, out, _ = run(capsys, "sharpness", "--k", "2", "--d", "1")
    assert code == 0
    assert out["report"]["ok"] and out["report"]["nu_f"] == "2"
    assert out["edge_list"] == "2 2 directed\n0 1\n1 0\n"
    code, out, _ = run(capsys, "sharpness", "--k", "3", "--d", "2", "--out", str(tmp_path / "o"))
    assert code == 0 and len(out["files"]) == 2
    assert (tmp_path / "o" / "sharp_k3_d2.txt").read_text().startswith("3 7 directed")


def test_sharpness_bad_parameters(capsys):
    assert run(capsys, "sharpness", "--k", "1", "--d", "1")[0] == 2


def test_uncross_demo(capsys, files):
    code, out, _ = run(capsys, "uncross-demo", files["cycle3"], "[[0,1]]", "[[1,2]]")
    assert code == 0
    assert out["f3"] == [[0, 1, 2]] and out["f4"] == [[1]]
    assert out["in_degree_totals"] == [2, 1]
    code, out, _ = run(capsys, "uncross-demo", files["cycle3"], "0,1", "1,2")
    assert out["f3"] == [[0, 1, 2]]
    assert run(capsys, "uncross-demo", files["cycle3"], "[[0,1],[1]]", "[[2]]")[0] == 2
    assert run(capsys, "uncross-demo", files["cycle3"], "{oops", "[[2]]")[0] == 2


def test_size_guard_env(capsys, files, monkeypatch):
    monkeypatch.setenv("ARBORPACK_MAX_N", "2")
    code, _, err = run(capsys, "nu-f", files["cycle3"])
    assert code == 2 and "ARBORPACK_MAX_N" in err


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "nu-f", str(tmp_path / "nope.txt"))[0] == 2


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["pack", "--k", "1"])
    assert info.value.code == 2


def test_console_script_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "arborpack.cli", "nu-f", files["cycle3"]],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == "3/2"
