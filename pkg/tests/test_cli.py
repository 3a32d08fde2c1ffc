import json
from pathlib import Path

import pytest

from lei import cli
from lei.presets import PRESETS

GOLDEN = Path(__file__).parent / "golden"


def run(argv):
    lines = []
    code = cli.run(argv, out=lines.append)
    return code, lines


@pytest.mark.parametrize("preset", sorted(PRESETS))
def test_demo_matches_golden(preset):
    code, lines = run(["demo", preset])
    assert code == 0
    text = "\n".join(lines) + "\n"
    assert text == (GOLDEN / f"demo_{preset}.txt").read_text(encoding="utf-8")


def test_demo_unknown_preset(capsys):
    code, _ = run(["demo", "nope"])
    assert code == 2
    assert "unknown preset" in capsys.readouterr().err


def test_prove_exit_codes(tmp_path):
    assert run(["prove", "--sig", "lattice", "p |- p"]) == (0, ["Proved"])
    assert run(["prove", "--sig", "lattice", "p |- q"]) == (1, ["NotProved"])
    goal = r"((p /\ q) /\ r) |- (r /\ (q /\ p))"
    assert run(["prove", "--sig", "lattice", "--depth", "2", goal]) == (3, ["DepthExceeded"])
    out = tmp_path / "d.json"
    assert run(["prove", "--sig", "fundamental", "--emit", str(out), r"(p /\ neg(p)) |- q"])[0] == 0
    doc = json.loads(out.read_text())
    assert doc["sequent"] == r"(p /\ neg(p)) |- q"


def test_usage_errors(capsys):
    assert run(["prove", "--sig", "lattice", "p |-"])[0] == 2
    assert run(["prove", "--sig", "nosuch", "p |- p"])[0] == 2
    assert run(["prove", "--sig", "lattice", "--depth", "0", "p |- p"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run([])[0] == 2
    capsys.readouterr()


def test_depth_default_from_environment(monkeypatch, capsys):
    goal = r"((p /\ q) /\ r) |- (r /\ (q /\ p))"
    monkeypatch.setenv("LEI_DEPTH_DEFAULT", "2")
    assert run(["prove", "--sig", "lattice", goal])[0] == 3
    monkeypatch.setenv("LEI_DEPTH_DEFAULT", "lots")
    assert run(["prove", "--sig", "lattice", goal])[0] == 2
    assert "LEI_DEPTH_DEFAULT" in capsys.readouterr().err
    monkeypatch.delenv("LEI_DEPTH_DEFAULT")
    assert run(["prove", "--sig", "lattice", goal])[0] == 0


@pytest.mark.parametrize("name,text", [
    ("fundamental_contradiction", r"(p /\ neg(p)) |- q"),
    ("fundamental_dia_neg", "dia(neg(p)) |- neg(box(p))"),
])
def test_interpolate_golden(name, text):
    code, lines = run(["interpolate", "--sig", "fundamental", text])
    assert code == 0
    assert "\n".join(lines) + "\n" == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


def test_interpolate_occurrence_and_failures(capsys):
    code, lines = run(["interpolate", "--sig", "lattice", "--occ", "succ", r"(p /\ q) |- (p \/ r)"])
    assert code == 0 and json.loads(lines[0])["simplified"] == "p"
    assert run(["interpolate", "--sig", "lattice", "p |- q"])[0] == 1
    assert run(["interpolate", "--sig", "lattice", "--occ", "ante.1", "p |- p"])[0] == 2
    capsys.readouterr()


def test_verify_exit_codes():
    code, lines = run(["verify", "--sig", "lattice", "--gamma", "p", r"(p /\ q) |- (p \/ r)"])
    assert code == 0 and json.loads("\n".join(lines))["verdict"] == "pass"
    code, lines = run(["verify", "--sig", "lattice", "--gamma", "q", "p |- p"])
    doc = json.loads("\n".join(lines))
    assert code == 1 and doc["polarity"]["pos_ok"] is False


def test_oracle_command():
    code, lines = run(["oracle", "--sig", "lattice", "--depth", "0", r"(p /\ q) |- (p \/ r)"])
    assert (code, lines) == (0, ["p"])
    assert run(["oracle", "--sig", "lattice", "--depth", "-1", "p |- p"])[0] == 2


def test_sig_check(tmp_path, capsys):
    code, lines = run(["sig", "check", "lambek"])
    assert code == 0 and lines[-1] == "ok"
    assert any(line.startswith("over: G 2 (1,∂)") for line in lines)
    bad = tmp_path / "bad.lsig"
    bad.write_text("name bad\nconn F f 2 +\n")
    assert run(["sig", "check", str(bad)])[0] == 2
    capsys.readouterr()


def test_rules_classify():
    code, lines = run(["rules", "classify", "geach"])
    assert code == 0 and lines == ["dia_box: analytic, interpolation-safe"]
    code, lines = run(["rules", "classify", "fundamental"])
    assert lines == ["neg_contradiction: analytic, not-special", "dia_neg: analytic, interpolation-safe"]


def test_extra_rules_flag():
    goal = "dia(box(p)) |- box(dia(p))"
    assert run(["prove", "--sig", "k-tense", goal])[0] == 1
    assert run(["prove", "--sig", "k-tense", "--rules", "geach", goal])[0] == 0
