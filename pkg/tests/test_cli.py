"""The thin CLI: exit codes, file outputs, summary lines."""

from __future__ import annotations

import json
from pathlib import Path

from koszul_lab.cli import main
from koszul_lab.runner import report_to_bytes


def test_run_writes_json_and_dot(tmp_path, capsys):
    script = tmp_path / "demo.ks"
    script.write_text(
        "S = superpythagorean(3)\ncheck pbw(S)\nemit dot(S)\n", encoding="utf-8"
    )
    out = tmp_path / "out" / "report.json"
    dots = tmp_path / "graphs"
    code = main(["run", str(script), "--json", str(out), "--dot", str(dots)])
    assert code == 0
    report = json.loads(out.read_bytes())
    assert report["summary"]["exit_code"] == 0
    files = sorted(p.name for p in dots.iterdir())
    assert files == [f"S-critical-{i}.dot" for i in range(7)]
    captured = capsys.readouterr()
    assert "pbw S" in captured.out


def test_run_exit_one_on_failure(tmp_path):
    script = tmp_path / "fail.ks"
    script.write_text(
        "S = superpythagorean(3)\ncheck strong_koszul_search(S, degree=8)\n",
        encoding="utf-8",
    )
    assert main(["run", str(script), "--quiet"]) == 1


def test_run_exit_two_on_parse_error(tmp_path, capsys):
    script = tmp_path / "broken.ks"
    script.write_text("algebra {", encoding="utf-8")
    assert main(["run", str(script)]) == 2
    assert "error" in capsys.readouterr().out


def test_run_missing_script(capsys):
    assert main(["run", "/nonexistent/nope.ks"]) == 2


def test_run_exit_three_on_budget(tmp_path):
    script = tmp_path / "big.ks"
    script.write_text(
        "A = free(3, 3)\ncheck universal_koszul(A, degree=4)\n", encoding="utf-8"
    )
    assert main(["run", str(script), "--budget", "5", "--quiet"]) == 3


def test_run_deterministic_json_across_invocations(tmp_path):
    script = tmp_path / "det.ks"
    script.write_text(
        "S = superpythagorean(3)\ncheck universal_koszul(S, degree=8)\n",
        encoding="utf-8",
    )
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["run", str(script), "--json", str(out1), "--quiet"]) == 0
    assert main(["run", str(script), "--json", str(out2), "--quiet", "--threads", "8"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_emit_json_hint_used_when_no_flag(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    script = tmp_path / "hint.ks"
    script.write_text(
        'S = superpythagorean(3)\ncheck hilbert(S)\nemit json(path="hinted.json")\n',
        encoding="utf-8",
    )
    assert main(["run", str(script), "--quiet"]) == 0
    assert (tmp_path / "hinted.json").exists()
