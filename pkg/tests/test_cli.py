"""Command-line interface: subcommands, overrides, exit codes."""

import json

import pytest

from liemux.cli import main


class TestListBuiltins:
    def test_lists_groups_and_members(self, capsys):
        assert main(["list-builtins"]) == 0
        out = capsys.readouterr().out
        for name in ("cross", "spin", "cardinal", "lissajous", "cross-forward"):
            assert name in out


class TestRun:
    def test_builtin_member_writes_artifacts(self, tmp_path, capsys):
        code = main(["run", "cross-forward", "--out-dir", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "cross-forward.csv").exists()
        assert (tmp_path / "cross-forward_summary.json").exists()
        assert "cross-forward" in capsys.readouterr().out

    def test_builtin_group_runs_every_member(self, tmp_path):
        assert main(["run", "cross", "--out-dir", str(tmp_path)]) == 0
        csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
        assert csvs == [
            "cross-back.csv",
            "cross-forward.csv",
            "cross-lateral-minus.csv",
            "cross-lateral-plus.csv",
        ]

    def test_svg_flag(self, tmp_path):
        assert main(["run", "spin", "--out-dir", str(tmp_path), "--svg"]) == 0
        assert (tmp_path / "spin.svg").exists()

    def test_overrides_apply(self, tmp_path):
        assert (
            main(
                [
                    "run",
                    "lissajous",
                    "--out-dir",
                    str(tmp_path),
                    "--t-end",
                    "4",
                    "--method",
                    "euler",
                    "--no-feedforward",
                ]
            )
            == 0
        )
        summary = json.loads((tmp_path / "lissajous_summary.json").read_text())
        assert summary["t_end"] == 4
        assert summary["method"] == "euler"

    def test_scenario_file(self, tmp_path, capsys):
        config = {
            "name": "short-hop",
            "model": "dubins1",
            "controller": "open_loop_command",
            "sim": {"dt": 0.01, "t_end": 2.0},
            "delta": 0.1,
            "x0": [0, 0, 0],
            "command": [0.5, 0, 0],
        }
        path = tmp_path / "hop.json"
        path.write_text(json.dumps(config))
        assert main(["run", str(path), "--out-dir", str(tmp_path)]) == 0
        assert (tmp_path / "short-hop.csv").exists()

    def test_delta_rounding_reported(self, tmp_path, capsys):
        code = main(
            ["run", "cross-forward", "--out-dir", str(tmp_path), "--delta", "0.098"]
        )
        assert code == 0
        assert "rounded" in capsys.readouterr().out


class TestExitCodes:
    def test_unknown_builtin_is_config_error(self, tmp_path, capsys):
        assert main(["run", "warp-drive", "--out-dir", str(tmp_path)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_bad_scenario_file_is_config_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"name": "x", "model": "nope"}))
        assert main(["run", str(path)]) == 2

    def test_divergence_exit_code(self, tmp_path, capsys):
        # An absurd inner gain makes the velocity loop unstable at dt=0.01,
        # overflowing the state within the run.
        config = {
            "name": "blowup",
            "model": "dubins2",
            "controller": "pose2",
            "sim": {"dt": 0.01, "t_end": 2.0},
            "delta": 0.1,
            "x0": [0, 0, 0, 0, 0],
            "gains": {"k_vel": 1e8},
            "reference": {"kind": "constant", "pose": [1.0, 1.0, 0.0]},
        }
        path = tmp_path / "blowup.json"
        path.write_text(json.dumps(config))
        assert main(["run", str(path), "--out-dir", str(tmp_path)]) == 3
        assert "divergence" in capsys.readouterr().err

    def test_unwritable_output_is_io_error(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        code = main(["run", "spin", "--out-dir", str(blocker / "sub")])
        assert code == 4
        assert "i/o error" in capsys.readouterr().err


class TestVerify:
    def test_default_deltas_pass(self, capsys):
        assert main(["verify", "--deltas", "0.2", "0.1", "0.05"]) == 0
        out = capsys.readouterr().out
        assert "slope" in out
        assert "PASS" in out
