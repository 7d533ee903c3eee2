"""Tests for circuit parsing, printing and execution."""

import sys
import os
import math

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.algorithms import OracleId
from src.circuit import format_program, parse_circuit, run_program
from src.errors import CircuitParseError
from src.gates import GateKind

CIRCUITS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "circuits")
SQRT_HALF = 1 / math.sqrt(2)


def load(name: str) -> str:
    with open(os.path.join(CIRCUITS_DIR, name), encoding="utf-8") as f:
        return f.read()


class TestParse:
    """Tests for parse_circuit."""

    def test_ghz_file(self):
        """The GHZ circuit has init, three gates and measure."""
        program = parse_circuit(load("ghz.circ"))
        assert program.n_qbits == 3
        assert program.init_bits == "111"
        assert [g.kind for g in program.gates] == [GateKind.ROTATION, GateKind.XOR, GateKind.XOR]
        assert program.statements[-1].keyword == "measure"

    def test_comments_and_blank_lines(self):
        """Comments and blank lines are skipped."""
        program = parse_circuit("# header\n\ninit 01  # two Q-bits\n\nxor 1 2\n")
        assert program.n_qbits == 2
        assert len(program.statements) == 2

    def test_ket_labels(self):
        """init accepts any ket symbols."""
        assert parse_circuit("init |↑↓>\n").init_bits == "01"

    def test_oracle(self):
        """oracle names one of f1..f4."""
        program = parse_circuit("init 00\noracle F3\n")
        assert program.statements[1].oracle is OracleId.F3

    def test_unknown_keyword(self):
        """Unknown keywords report their line."""
        with pytest.raises(CircuitParseError) as info:
            parse_circuit("init 00\nhadamard 1\n")
        assert info.value.line == 2

    def test_missing_init(self):
        """Gates before init are rejected."""
        with pytest.raises(CircuitParseError) as info:
            parse_circuit("rot 1 0.1 0.2\n")
        assert info.value.line == 1

    def test_empty_program(self):
        """An empty file has no init."""
        with pytest.raises(CircuitParseError, match="missing init"):
            parse_circuit("# nothing here\n")

    def test_repeated_init(self):
        """init may appear once."""
        with pytest.raises(CircuitParseError) as info:
            parse_circuit("init 0\ninit 1\n")
        assert info.value.line == 2

    def test_index_out_of_range(self):
        """Q-bit indices must fit the register."""
        with pytest.raises(CircuitParseError, match="outside register"):
            parse_circuit("init 00\nrot 3 0.1 0.0\n")

    def test_xor_same_qbit(self):
        """xor needs two different Q-bits."""
        with pytest.raises(CircuitParseError):
            parse_circuit("init 00\nxor 1 1\n")

    def test_bad_angle(self):
        """Angles must be finite decimals."""
        with pytest.raises(CircuitParseError):
            parse_circuit("init 0\nrot 1 pi 0\n")
        with pytest.raises(CircuitParseError):
            parse_circuit("init 0\nrot 1 inf 0\n")

    def test_wrong_argument_count(self):
        """Each keyword takes a fixed number of arguments."""
        with pytest.raises(CircuitParseError, match="takes 2"):
            parse_circuit("init 000\nxor 1\n")

    def test_oracle_needs_two_qbits(self):
        """oracle only works on 2-Q-bit registers."""
        with pytest.raises(CircuitParseError):
            parse_circuit("init 000\noracle f1\n")

    def test_unknown_oracle(self):
        """Only f1..f4 exist."""
        with pytest.raises(CircuitParseError):
            parse_circuit("init 00\noracle f9\n")

    def test_measure_last(self):
        """Nothing may follow measure."""
        with pytest.raises(CircuitParseError) as info:
            parse_circuit("init 00\nmeasure\nxor 1 2\n")
        assert info.value.line == 3

    def test_error_message_has_line(self):
        """The message starts with the line number."""
        with pytest.raises(CircuitParseError) as info:
            parse_circuit("init 00\n\nbogus\n")
        assert str(info.value).startswith("line 3:")


class TestFormat:
    """Tests for format_program."""

    @pytest.mark.parametrize("name", ["ghz.circ", "dj_f1.circ", "dj_f3.circ"])
    def test_reparses_identically(self, name):
        """Printed programs parse back to the same program."""
        program = parse_circuit(load(name))
        assert parse_circuit(format_program(program)) == program


class TestRun:
    """Tests for run_program."""

    def test_ghz_distribution(self):
        """GHZ gives 1/2 on 000 and 111."""
        report = run_program(parse_circuit(load("ghz.circ")))
        assert [o["bitstring"] for o in report["outcomes"]] == ["000", "111"]
        assert all(abs(o["probability"] - 0.5) < 1e-12 for o in report["outcomes"])

    def test_ghz_amplitudes(self):
        """The final state matches (1/√2, 0, …, 0, 1/√2)."""
        amplitudes = run_program(parse_circuit(load("ghz.circ")))["final_state"]["amplitudes"]
        expected = [SQRT_HALF, 0, 0, 0, 0, 0, 0, SQRT_HALF]
        assert all(abs(re - e) < 1e-12 and abs(im) < 1e-12
                   for (re, im), e in zip(amplitudes, expected))

    def test_dj_constant(self):
        """The f1 circuit ends in |00> after one oracle call."""
        report = run_program(parse_circuit(load("dj_f1.circ")))
        assert report["outcomes"][0]["bitstring"] == "00"
        assert abs(report["outcomes"][0]["probability"] - 1.0) < 1e-10
        assert report["oracle_calls"] == 1
        assert report["qbit_marginals"][0] < 1e-10

    def test_dj_balanced(self):
        """The f3 circuit ends in |10>."""
        report = run_program(parse_circuit(load("dj_f3.circ")))
        assert report["outcomes"][0]["bitstring"] == "10"
        assert abs(report["qbit_marginals"][0] - 1.0) < 1e-10

    def test_no_sampling_by_default(self):
        """Without a seed nothing is sampled."""
        assert "sampled" not in run_program(parse_circuit(load("ghz.circ")))

    def test_seeded_sample(self):
        """A seed adds one reproducible collapse."""
        program = parse_circuit(load("ghz.circ"))
        first = run_program(program, sample_seed=7)["sampled"]
        assert first in ("000", "111")
        assert run_program(program, sample_seed=7)["sampled"] == first

    def test_deterministic(self):
        """Two runs give identical reports."""
        program = parse_circuit(load("dj_f3.circ"))
        assert run_program(program) == run_program(program)
