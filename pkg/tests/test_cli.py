"""Tests for the command-line interface."""

import sys
import os
import json

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import EXIT_FAILURE, EXIT_OK, budget_report, main, nmr_report

CIRCUITS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "circuits")


def run_cli(capsys, *argv):
    """Run main and return (exit code, stdout text, stderr text)."""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRunCommand:
    """Tests for `run`."""

    @pytest.mark.parametrize("name", ["ghz.circ", "dj_f1.circ", "dj_f3.circ"])
    def test_byte_stable(self, capsys, name):
        """Two consecutive runs print identical bytes."""
        path = os.path.join(CIRCUITS_DIR, name)
        first = run_cli(capsys, "run", path)
        second = run_cli(capsys, "run", path)
        assert first[0] == EXIT_OK
        assert first[1] == second[1]

    def test_ghz_report(self, capsys):
        """The GHZ file reports 1/2 on 000 and 111."""
        _, out, _ = run_cli(capsys, "run", os.path.join(CIRCUITS_DIR, "ghz.circ"))
        report = json.loads(out)
        assert {o["bitstring"] for o in report["outcomes"]} == {"000", "111"}

    def test_parse_error(self, capsys, tmp_path):
        """A bad file exits 1 and names the line on stderr."""
        bad = tmp_path / "bad.circ"
        bad.write_text("init 00\nswap 1 2\n", encoding="utf-8")
        code, out, err = run_cli(capsys, "run", str(bad))
        assert code == EXIT_FAILURE
        assert out == ""
        assert "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        """A missing file exits 1."""
        code, out, _ = run_cli(capsys, "run", str(tmp_path / "absent.circ"))
        assert code == EXIT_FAILURE
        assert out == ""

    def test_sample_flag(self, capsys):
        """--sample adds a sampled outcome."""
        _, out, _ = run_cli(capsys, "run", os.path.join(CIRCUITS_DIR, "ghz.circ"), "--sample", "3")
        assert json.loads(out)["sampled"] in ("000", "111")


class TestDjCommand:
    """Tests for `dj`."""

    def test_constant(self, capsys):
        """f2 is constant in one call, classically two."""
        code, out, _ = run_cli(capsys, "dj", "--function", "f2")
        report = json.loads(out)
        assert code == EXIT_OK
        assert report["verdict"] == "constant"
        assert report["oracle_calls"] == 1
        assert report["classical"] == {"verdict": "constant", "oracle_calls": 2}
        assert report["label"] == "f(x) = 1"

    def test_balanced(self, capsys):
        """f4 is balanced."""
        _, out, _ = run_cli(capsys, "dj", "--function", "f4")
        assert json.loads(out)["verdict"] == "balanced"

    def test_unknown_function(self, capsys):
        """argparse rejects unknown oracles with exit 2."""
        with pytest.raises(SystemExit) as info:
            main(["dj", "--function", "f7"])
        assert info.value.code == 2


class TestGhzCommand:
    """Tests for `ghz`."""

    def test_default_three(self, capsys):
        """Default n is 3."""
        _, out, _ = run_cli(capsys, "ghz")
        report = json.loads(out)
        assert report["n_qbits"] == 3
        assert [o["bitstring"] for o in report["outcomes"]] == ["000", "111"]

    def test_too_small(self, capsys):
        """n = 1 is a simulator error, exit 1."""
        code, _, err = run_cli(capsys, "ghz", "--n", "1")
        assert code == EXIT_FAILURE
        assert "at least 2" in err


class TestBudgetCommand:
    """Tests for `budget`."""

    def test_four_bits(self, capsys):
        """4-bit factoring fits the default budget."""
        _, out, _ = run_cli(capsys, "budget", "--tau-dec", "1", "--tau-op", "1e-7", "--bits", "4")
        report = json.loads(out)
        assert report["M"] == 10 ** 7
        assert report["required_ops"] == 10 ** 6
        assert report["feasible"] is True
        assert report["interpolated"] is False

    def test_four_hundred_bits(self):
        """400-bit factoring does not fit."""
        report = budget_report(1.0, 1e-7, 400)
        assert report["required_ops"] == 10 ** 12
        assert report["feasible"] is False

    def test_bad_bits(self, capsys):
        """bits < 2 exits 1."""
        code, _, _ = run_cli(capsys, "budget", "--bits", "1")
        assert code == EXIT_FAILURE

    def test_very_large_size(self, capsys):
        """30000 bits still print a JSON report."""
        code, out, _ = run_cli(capsys, "budget", "--bits", "30000")
        report = json.loads(out)
        assert code == EXIT_OK
        assert report["feasible"] is False
        assert len(str(report["required_ops"])) == 461

    def test_size_above_limit(self, capsys):
        """Sizes past the limit exit 1 with a diagnostic."""
        code, out, err = run_cli(capsys, "budget", "--bits", "100000")
        assert code == EXIT_FAILURE
        assert out == ""
        assert "at most" in err


class TestNmrCommand:
    """Tests for `nmr-sep`."""

    def test_thermal_scale(self, capsys):
        """ε = 1e-5 around Bell is certified and PPT."""
        _, out, _ = run_cli(capsys, "nmr-sep", "--n", "2", "--epsilon", "1e-5", "--pure", "bell")
        report = json.loads(out)
        assert report["certified"] is True
        assert report["ppt"] is True
        assert report["ppt_criterion"] == "necessary-and-sufficient"

    def test_entangled(self):
        """ε = 0.5 around Bell fails both tests."""
        report = nmr_report(2, 0.5, "bell")
        assert report["certified"] is False
        assert report["ppt"] is False
        assert abs(report["threshold_estimate"] - 1 / 9) < 1e-5

    def test_single_qbit(self):
        """One Q-bit has no cut, so PPT is not reported."""
        report = nmr_report(1, 0.2, "basis0")
        assert report["ppt"] is None
        assert report["certified"] is True

    def test_too_many_qbits(self, capsys):
        """Four Q-bits exceed the certificate limit."""
        code, _, _ = run_cli(capsys, "nmr-sep", "--n", "4", "--epsilon", "0.1")
        assert code == EXIT_FAILURE

    def test_verbose_logs_to_stderr(self, capsys):
        """-vv keeps stdout pure JSON."""
        _, out, _ = run_cli(capsys, "-vv", "nmr-sep", "--epsilon", "0.1")
        json.loads(out)
