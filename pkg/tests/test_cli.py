from __future__ import annotations

import subprocess
import sys

import pytest

from fzsplit.cli import main

X = "splitting rank=4 shape=segment\nvgroup 0 a,b\nvgroup 1 c,d\nedge 0 1 group=1\n"
Y = "splitting rank=4 shape=segment\nvgroup 0 a,b\nvgroup 1 abABc,d\nedge 0 1 group=1\n"
T = "splitting rank=4 shape=segment\nvgroup 0 a,b\nvgroup 1 c,d,abAB\nedge 0 1 group=abAB attach=abAB,abAB\n"
FAR = "splitting rank=4 shape=segment\nvgroup 0 a,c\nvgroup 1 b,d\nedge 0 1 group=1\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"X": X, "Y": Y, "T": T, "FAR": FAR}.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    rose = tmp_path / "r_beta_n2.txt"
    rose.write_text("beta 2\nv 0\ne 1 0 0 a\ne 2 0 0 b\n")
    out["rose"] = str(rose)
    out["dir"] = tmp_path
    return out


def test_member(capsys):
    assert main(["member", "--subgroup", "a,b", "--word", "abAB", "-n", "4"]) == 0
    assert capsys.readouterr().out == "true\n"
    assert main(["member", "--subgroup", "a,b", "--word", "ac", "-n", "4"]) == 0
    assert capsys.readouterr().out == "false\n"


def test_fold_standard_rose_is_empty(files, capsys):
    assert main(["fold", "--graph", files["rose"]]) == 0
    assert capsys.readouterr().out == ""


def test_fold_with_certificates(files, capsys):
    p = files["dir"] / "g.txt"
    p.write_text("beta 2\nv 0\nv 1\ne 1 0 0 a\ne 2 0 1 a\ne 3 1 0 b\n")
    assert main(["fold", "--graph", str(p), "--certify", "--scheduler", "last"]) == 0
    out = capsys.readouterr()
    assert out.out.startswith("fold ")
    assert "max distance" in out.err


def test_fold_path_command_and_verify(files, capsys):
    cert = str(files["dir"] / "t5.txt")
    assert main(["theorem5", "--x", files["X"], "--y", files["Y"], "--w", "abAB", "-o", cert]) == 0
    assert main(["verify", "--certificate", cert]) == 0
    assert "verified theorem5" in capsys.readouterr().out


def test_adjacent_refine_unfold(files, capsys):
    cert = str(files["dir"] / "adj.txt")
    assert main(["adjacent", "--x", files["X"], "--y", files["Y"], "--w", "abAB", "-o", cert]) == 0
    assert main(["verify", "--certificate", cert]) == 0
    assert main(["refine", "--x", files["X"], "--y", files["Y"]]) == 1
    assert "NOT_FOUND" in capsys.readouterr().out
    assert main(["unfold", "--t", files["T"]]) == 0
    assert "group=1" in capsys.readouterr().out


def test_path_and_distance(files, capsys):
    cert = str(files["dir"] / "p.txt")
    assert main(["path", "--x", files["X"], "--y", files["Y"], "--complex", "FZbar", "-o", cert]) == 0
    assert main(["verify", "--certificate", cert]) == 0
    capsys.readouterr()
    assert main(["distance", "--x", files["X"], "--y", files["Y"], "--complex", "FZ"]) == 0
    assert capsys.readouterr().out == "<=1\n"


def test_unresolved_within_small_radius(files, capsys):
    args = ["distance", "--x", files["X"], "--y", files["FAR"], "--complex", "FS", "--radius", "1", "--word", "2"]
    assert main(args) == 1
    assert capsys.readouterr().out == "UNKNOWN\n"


def test_parse_errors_exit_2(files, capsys):
    bad = files["dir"] / "bad.txt"
    bad.write_text("splitting rank=4\nvgroup 0 a,b\nvgroup 1 c,dq\nedge 0 1 group=1\n")
    assert main(["refine", "--x", str(bad), "--y", files["X"]]) == 2
    assert "line 3, column 13" in capsys.readouterr().err
    assert main(["member", "--subgroup", "a,b", "--word", "az", "-n", "2"]) == 2
    assert main(["fold", "--graph", str(files["dir"] / "missing.txt")]) == 2
    assert main(["bogus"]) == 2


def test_tampered_certificate_exit_2(files):
    cert = files["dir"] / "adj.txt"
    assert main(["adjacent", "--x", files["X"], "--y", files["Y"], "--w", "abAB", "-o", str(cert)]) == 0
    cert.write_text(cert.read_text().replace("abABc,d", "abABcc,d", 1))
    assert main(["verify", "--certificate", str(cert)]) == 2


def test_bounds_from_environment(files, monkeypatch, capsys):
    monkeypatch.setenv("FZSPLIT_BOUNDS", "word=2,radius=1")
    assert main(["distance", "--x", files["X"], "--y", files["FAR"], "--complex", "FS"]) == 1
    monkeypatch.setenv("FZSPLIT_BOUNDS", "depth=3")
    assert main(["distance", "--x", files["X"], "--y", files["Y"]]) == 2


def test_output_is_deterministic(files, capsys):
    runs = []
    for _ in range(2):
        main(["theorem5", "--x", files["X"], "--y", files["Y"], "--w", "abAB"])
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fzsplit.cli", "member", "--subgroup", "a,b", "--word", "abAB", "-n", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "true\n"
