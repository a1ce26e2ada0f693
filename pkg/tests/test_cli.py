"""Command-line interface: verdict exit codes, replay, render, extract."""

from pathlib import Path

from moncat.cli import EXIT_EQUAL, EXIT_ERROR, EXIT_NOT_EQUAL, EXIT_UNKNOWN, main

from conftest import GOALS


def test_check_equal(capsys):
    code = main(["check", "--goal", str(GOALS / "interchange.goal")])
    assert code == EXIT_EQUAL
    assert "conclusion: Equal" in capsys.readouterr().out


def test_check_unknown(capsys):
    code = main(["check", "--goal", str(GOALS / "empty-interface.goal")])
    assert code == EXIT_UNKNOWN
    assert "conclusion: Unknown" in capsys.readouterr().out


def test_check_not_equal(tmp_path, capsys):
    goal = tmp_path / "g.goal"
    goal.write_text("f : A ~> A\ng : A ~> A\n===\nf ≡' g\n", encoding="utf-8")
    assert main(["check", "--goal", str(goal)]) == EXIT_NOT_EQUAL


def test_check_parse_error(tmp_path, capsys):
    goal = tmp_path / "g.goal"
    goal.write_text("f : %%\n", encoding="utf-8")
    assert main(["check", "--goal", str(goal)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_replay_ok(capsys):
    code = main(
        [
            "replay",
            "--goal",
            str(GOALS / "composite-monoid.goal"),
            "--script",
            str(GOALS / "composite-monoid.proof"),
        ]
    )
    assert code == EXIT_EQUAL
    assert "Ok" in capsys.readouterr().out


def test_replay_corrupted_script_reports_step(tmp_path, capsys):
    script = (GOALS / "composite-monoid.proof").read_text(encoding="utf-8")
    bad = tmp_path / "bad.proof"
    bad.write_text(script.replace("rewrite mA.", "rewrite nA.", 1), encoding="utf-8")
    code = main(
        [
            "replay",
            "--goal",
            str(GOALS / "composite-monoid.goal"),
            "--script",
            str(bad),
        ]
    )
    assert code == EXIT_NOT_EQUAL
    assert "step" in capsys.readouterr().out


def test_render_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        code = main(
            ["render", "--goal", str(GOALS / "composite-monoid.goal"), "--out", str(out)]
        )
        assert code == EXIT_EQUAL
    files1 = sorted(p.name for p in out1.iterdir())
    assert len(files1) == 10  # 4 hypotheses x 2 sides + conclusion x 2
    for name in files1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_render_identity_goal(tmp_path):
    goal = tmp_path / "id.goal"
    goal.write_text("f : A ~> A\n===\nA ≡ A\n", encoding="utf-8")
    out = tmp_path / "svg"
    assert main(["render", "--goal", str(goal), "--out", str(out)]) == EXIT_EQUAL
    svg = (out / "conclusion-lhs.svg").read_text(encoding="utf-8")
    assert "<polyline" in svg


def test_extract_prints_normal_forms(capsys):
    code = main(["extract", "--goal", str(GOALS / "composite-monoid.goal")])
    assert code == EXIT_EQUAL
    out = capsys.readouterr().out
    assert "lhs: M·x·N·M·N ; M·M·n·M·N ; m·x·N ; m·n" in out
    assert "rhs: M·N·M·x·N ; M·N·m·N·N ; M·x·n ; m·n" in out
