# SPDX-License-Identifier: Apache-2.0
"""
Tests for the command-line entry point.
"""

import json

import pytest

from postlb import __version__
from postlb.config import get_config_file
from postlb.main import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE, build_parser, main
from tests.conftest import ALWAYS_ACCEPT, ALWAYS_REJECT, BRANCH_ON_HEAD


@pytest.fixture
def cli(tmp_path, capsys, restore_logging):
    """Run ``main`` with a temp log dir; return (exit code, stdout, stderr)."""

    def invoke(*argv: str) -> tuple[int, str, str]:
        with pytest.raises(SystemExit) as exc_info:
            main(["--log-dir", str(tmp_path / "logs"), "--log-level", "warning", *argv])
        captured = capsys.readouterr()
        return exc_info.value.code, captured.out, captured.err

    return invoke


@pytest.fixture
def reject_program(tmp_path):
    path = tmp_path / "rej.pm"
    path.write_text(ALWAYS_REJECT)
    return str(path)


class TestParser:
    """Tests for argument parsing."""

    def test_version(self, capsys):
        """Test the version flag."""
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_command_required(self, capsys):
        """Test that a subcommand is required."""
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == EXIT_USAGE

    def test_missing_argument(self, cli):
        """Test a subcommand without its required flags."""
        code, _, err = cli("attack", "--n", "1")
        assert code == EXIT_USAGE
        assert "--program" in err

    def test_attack_defaults(self):
        """Test default attack options."""
        args = build_parser().parse_args(["attack", "--program", "p.pm", "--n", "2"])
        assert args.mode == "plain"
        assert args.objective == "sat-and"
        assert args.repr is None
        assert args.allow_large is False

    @pytest.mark.parametrize(
        "argv",
        [
            ("run", "--first", "m", "--second", "b", "--step-cap", "0"),
            ("run", "--first", "m", "--second", "b", "--step-cap", "-5"),
            ("trace", "--first", "m", "--second", "b", "--step-cap", "0"),
            ("attack", "--n", "0"),
            ("attack", "--n", "1", "--step-cap", "0"),
            ("gen-repr", "--n", "-1", "--out-dir", "reprs"),
            ("lemma2", "--trials", "0"),
            ("lemma2", "--step-cap", "0"),
        ],
    )
    def test_non_positive_counts(self, cli, reject_program, argv):
        """Test that zero or negative counts are usage errors."""
        command, *rest = argv
        if command in ("run", "trace", "attack"):
            rest = ["--program", reject_program, *rest]
        code, out, err = cli(command, *rest)
        assert code == EXIT_USAGE
        assert out == ""
        assert "positive integer" in err

    def test_step_cap_one_is_kept(self, cli, tmp_path):
        """Test that an explicit step cap is used rather than the configured one."""
        program = tmp_path / "acc.pm"
        program.write_text(ALWAYS_ACCEPT)
        code, out, _ = cli(
            "run", "--program", str(program), "--first", "m", "--second", "b", "--step-cap", "1"
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["status"] == "step_cap_exceeded"
        assert report["steps"] == 1


class TestRunCommands:
    """Tests for run and trace."""

    def test_run(self, cli, reject_program):
        """Test a run on boxes given as flags."""
        code, out, _ = cli("run", "--program", reject_program, "--first", "m", "--second", "b")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["status"] == "halted"
        assert report["verdict"] == "reject"
        assert report["marked"] == [-1]

    def test_run_input_file(self, cli, tmp_path, reject_program):
        """Test a run on an input file with trace."""
        inp = tmp_path / "in.txt"
        inp.write_text("first: bm\nsecond: bb\n")
        code, out, _ = cli("run", "--program", reject_program, "--input", str(inp), "--with-trace")
        assert code == EXIT_OK
        assert json.loads(out)["trace"] == [1]

    def test_run_convention_file(self, cli, tmp_path, reject_program):
        """Test a run under a convention file."""
        conv = tmp_path / "c.conv"
        conv.write_text("initial_head=15\nsplit=15\nfirst_anchor=14\nsecond_anchor=15\nanswer_box=15\n")
        code, out, _ = cli(
            "run", "--program", reject_program, "--first", "m", "--second", "m", "--convention", str(conv)
        )
        assert code == EXIT_OK
        assert json.loads(out)["marked"] == [14, 15]

    def test_conflicting_inputs(self, cli, tmp_path, reject_program):
        """Test --input together with --first."""
        inp = tmp_path / "in.txt"
        inp.write_text("first: b\nsecond: b\n")
        code, _, _ = cli("run", "--program", reject_program, "--input", str(inp), "--first", "m")
        assert code == EXIT_USAGE

    def test_missing_second(self, cli, reject_program):
        """Test --first without --second."""
        code, _, _ = cli("run", "--program", reject_program, "--first", "m")
        assert code == EXIT_USAGE

    def test_unreadable_program(self, cli, tmp_path):
        """Test a program file that does not exist."""
        code, _, err = cli("run", "--program", str(tmp_path / "nope.pm"), "--first", "b", "--second", "b")
        assert code == EXIT_USAGE
        assert "cannot read" in err

    def test_syntax_error(self, cli, tmp_path):
        """Test that domain errors print a JSON error."""
        bad = tmp_path / "bad.pm"
        bad.write_text("1: JUMP -> 2\n")
        code, out, err = cli("run", "--program", str(bad), "--first", "b", "--second", "b")
        assert code == EXIT_DOMAIN_ERROR
        assert out == ""
        error = json.loads(err)
        assert error["type"] == "error"
        assert error["error"]["type"] == "program_syntax_error"

    def test_bad_convention(self, cli, tmp_path, reject_program):
        """Test a malformed convention file."""
        conv = tmp_path / "c.conv"
        conv.write_text("answer_box\n")
        code, _, err = cli(
            "run", "--program", reject_program, "--first", "b", "--second", "b", "--convention", str(conv)
        )
        assert code == EXIT_DOMAIN_ERROR
        assert json.loads(err)["error"]["type"] == "convention_error"

    def test_trace(self, cli, tmp_path):
        """Test the per-step trace."""
        program = tmp_path / "branch.pm"
        program.write_text(BRANCH_ON_HEAD)
        code, out, _ = cli("trace", "--program", str(program), "--first", "b", "--second", "m")
        assert code == EXIT_OK
        entries = json.loads(out)["entries"]
        assert [e["address"] for e in entries] == [1, 2]
        assert entries[0]["branch_taken"] == "marked"

    def test_output_file(self, cli, tmp_path, reject_program):
        """Test that --output takes the JSON and stdout gets a summary."""
        target = tmp_path / "report.json"
        code, out, _ = cli(
            "run", "--program", reject_program, "--first", "b", "--second", "b", "--output", str(target)
        )
        assert code == EXIT_OK
        assert out.strip() == "halted: reject after 1 steps"
        assert json.loads(target.read_text())["verdict"] == "reject"


class TestAnalysisCommands:
    """Tests for paths, attack, reduce, gen-repr and lemma2."""

    def test_paths(self, cli, tmp_path):
        """Test the Lemma 1 check."""
        program = tmp_path / "branch.pm"
        program.write_text(BRANCH_ON_HEAD)
        code, out, _ = cli("paths", "--program", str(program), "--m-max", "3", "--list")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["holds"] is True
        assert len(report["levels"]) == 4
        assert report["listings"][1]["terminated"] == [[1, 2], [1, 3]]

    def test_paths_negative(self, cli, reject_program):
        """Test a negative budget."""
        code, _, _ = cli("paths", "--program", reject_program, "--m-max", "-1")
        assert code == EXIT_USAGE

    def test_attack(self, cli, reject_program):
        """Test the golden n=1 attack."""
        code, out, _ = cli("attack", "--program", reject_program, "--n", "1")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["kind"] == "crossed_counterexample"
        assert report["function_indices"] == [0, 1]
        assert report["witness_assignment"] == {"x1": True}

    def test_attack_byte_stable(self, cli, reject_program):
        """Test that repeated attacks print identical bytes."""
        first = cli("attack", "--program", reject_program, "--n", "2")[1]
        second = cli("attack", "--program", reject_program, "--n", "2")[1]
        assert first == second

    def test_attack_output(self, cli, tmp_path, reject_program):
        """Test the attack summary line."""
        target = tmp_path / "attack.json"
        code, out, _ = cli("attack", "--program", reject_program, "--n", "1", "--output", str(target))
        assert code == EXIT_OK
        assert out.strip() == "crossed_counterexample on functions [0, 1]"
        assert json.loads(target.read_text())["path_bound"] == 2

    def test_attack_3cnf(self, cli, reject_program):
        """Test 3CNF mode, which defaults to maxterm representatives."""
        code, out, _ = cli("attack", "--program", reject_program, "--n", "2", "--mode", "3cnf")
        assert code == EXIT_OK
        assert json.loads(out)["mode"] == "3cnf"

    def test_attack_falsify(self, cli, reject_program):
        """Test the falsify-or objective."""
        code, out, _ = cli("attack", "--program", reject_program, "--n", "1", "--objective", "falsify-or")
        assert code == EXIT_OK
        assert json.loads(out)["objective"] == "falsify-or"

    def test_attack_too_large(self, cli, reject_program):
        """Test that n=4 needs --allow-large."""
        code, _, err = cli("attack", "--program", reject_program, "--n", "4")
        assert code == EXIT_DOMAIN_ERROR
        assert json.loads(err)["error"]["type"] == "arity_error"

    def test_reduce(self, cli, tmp_path):
        """Test reducing a formula file."""
        formula = tmp_path / "f.txt"
        formula.write_text("(x1|x2|x3|x4)\n")
        code, out, _ = cli("reduce", "--formula", str(formula))
        assert code == EXIT_OK
        assert json.loads(out)["formula"] == "(x1|x2|x5)&(!x5|x3|x4)"

    def test_reduce_not_cnf(self, cli, tmp_path):
        """Test a formula that is not CNF."""
        formula = tmp_path / "f.txt"
        formula.write_text("!(x1&x2)")
        code, _, err = cli("reduce", "--formula", str(formula))
        assert code == EXIT_DOMAIN_ERROR
        assert json.loads(err)["error"]["type"] == "not_cnf_error"

    def test_gen_repr(self, cli, tmp_path):
        """Test writing the n=1 representation."""
        out_dir = tmp_path / "reprs"
        code, out, _ = cli("gen-repr", "--n", "1", "--out-dir", str(out_dir))
        assert code == EXIT_OK
        assert sorted(p.name for p in out_dir.iterdir()) == [
            "f0.txt",
            "f1.txt",
            "f2.txt",
            "f3.txt",
            "index.json",
        ]
        index = json.loads((out_dir / "index.json").read_text())
        assert index["count"] == 4
        assert index["entries"][1]["table"] == "01"
        assert (out_dir / "f1.txt").read_text().strip() == "x1"

    def test_lemma2(self, cli):
        """Test the randomised crossing check."""
        code, out, _ = cli("lemma2", "--trials", "20", "--seed", "3", "--step-cap", "500")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["trials"] == 20
        assert report["seed"] == 3
        assert report["holds"] is True

    def test_lemma2_seed_from_environment(self, cli, monkeypatch):
        """Test that POSTLB_SEED supplies the default seed."""
        monkeypatch.setenv("POSTLB_SEED", "42")
        code, out, _ = cli("lemma2", "--trials", "5", "--step-cap", "100")
        assert code == EXIT_OK
        assert json.loads(out)["seed"] == 42

    def test_reports_log(self, cli, tmp_path, reject_program):
        """Test that reports are copied to the report log."""
        cli("attack", "--program", reject_program, "--n", "1")
        assert "crossed_counterexample" in (tmp_path / "logs" / "reports.log").read_text()


class TestInitConfig:
    """Tests for init-config."""

    def test_init_config(self, capsys):
        """Test creating the config file once."""
        with pytest.raises(SystemExit) as exc_info:
            main(["init-config"])
        assert exc_info.value.code == EXIT_OK
        assert get_config_file().exists()
        assert "Created default config file" in capsys.readouterr().out

        with pytest.raises(SystemExit):
            main(["init-config"])
        assert "already exists" in capsys.readouterr().out
