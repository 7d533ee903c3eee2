"""Circuit module - plain-text circuit programs: parse, print and run.

One statement per line, `#` starts a comment:

    init <bitstring>                  exactly once, first
    rot <target> <theta> <phi>        angles in radians
    xor <target> <control>            flips target when control is |0>
    oracle <f1|f2|f3|f4>              2-Q-bit registers only
    measure                           optional, last
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

try:
    from algorithms import OracleFunction, OracleId, oracle_gate
    from errors import CircuitParseError, SimulatorError
    from gates import GateOp, apply_gate, format_gate, rotation, xor
    from qstate import (MAX_QBITS, basis_state, canonical_bits, marginal_probabilities,
                        measure_all, sample_outcome)
except ImportError:
    from src.algorithms import OracleFunction, OracleId, oracle_gate
    from src.errors import CircuitParseError, SimulatorError
    from src.gates import GateOp, apply_gate, format_gate, rotation, xor
    from src.qstate import (MAX_QBITS, basis_state, canonical_bits, marginal_probabilities,
                            measure_all, sample_outcome)

logger = logging.getLogger(__name__)

KEYWORDS = ("init", "rot", "xor", "oracle", "measure")


@dataclass(frozen=True)
class Statement:
    """One parsed line; `line` is kept for messages but ignored by equality."""

    keyword: str
    bits: Optional[str] = None
    gate: Optional[GateOp] = None
    oracle: Optional[OracleId] = None
    line: int = field(default=0, compare=False)

    def to_text(self) -> str:
        if self.keyword == "init":
            return f"init {self.bits}"
        if self.gate is not None:
            return format_gate(self.gate)
        if self.keyword == "oracle":
            return f"oracle {self.oracle.value}"
        return "measure"


@dataclass(frozen=True)
class CircuitProgram:
    """Validated program: init first, every index inside the register."""

    n_qbits: int
    statements: tuple

    @property
    def init_bits(self) -> str:
        return self.statements[0].bits

    @property
    def gates(self) -> list[GateOp]:
        return [s.gate for s in self.statements if s.gate is not None]


def _qbit_arg(token: str, n_qbits: int, lineno: int) -> int:
    try:
        index = int(token)
    except ValueError:
        raise CircuitParseError(f"Q-bit index {token!r} is not an integer", lineno) from None
    if not 1 <= index <= n_qbits:
        raise CircuitParseError(f"Q-bit index {index} outside register [1, {n_qbits}]", lineno)
    return index


def _angle_arg(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CircuitParseError(f"angle {token!r} is not a decimal number", lineno) from None
    if not math.isfinite(value):
        raise CircuitParseError(f"angle {token!r} is not finite", lineno)
    return value


def _expect_args(keyword: str, args: list[str], count: int, lineno: int) -> None:
    if len(args) != count:
        raise CircuitParseError(f"{keyword} takes {count} argument(s), got {len(args)}", lineno)


def parse_circuit(text: str) -> CircuitProgram:
    """Parse circuit text into a validated program.

    Raises:
        CircuitParseError: On an unknown keyword, a bad argument or index,
            a missing or repeated init, or a statement after measure.
    """
    statements: list[Statement] = []
    n_qbits = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        keyword, *args = content.split()
        keyword = keyword.lower()

        if keyword not in KEYWORDS:
            raise CircuitParseError(f"unknown keyword {keyword!r}", lineno)
        if keyword == "init":
            if statements:
                raise CircuitParseError("init must be the single first statement", lineno)
            _expect_args(keyword, args, 1, lineno)
            try:
                bits = canonical_bits(args[0])
            except SimulatorError as exc:
                raise CircuitParseError(str(exc), lineno) from exc
            if len(bits) > MAX_QBITS:
                raise CircuitParseError(f"{len(bits)} Q-bits exceeds the {MAX_QBITS} Q-bit limit", lineno)
            n_qbits = len(bits)
            statements.append(Statement("init", bits=bits, line=lineno))
            continue
        if not statements:
            raise CircuitParseError(f"missing init before {keyword!r}", lineno)
        if statements[-1].keyword == "measure":
            raise CircuitParseError("measure must be the last statement", lineno)

        if keyword == "rot":
            _expect_args(keyword, args, 3, lineno)
            target = _qbit_arg(args[0], n_qbits, lineno)
            gate = rotation(target, _angle_arg(args[1], lineno), _angle_arg(args[2], lineno))
            statements.append(Statement("rot", gate=gate, line=lineno))
        elif keyword == "xor":
            _expect_args(keyword, args, 2, lineno)
            target = _qbit_arg(args[0], n_qbits, lineno)
            control = _qbit_arg(args[1], n_qbits, lineno)
            if target == control:
                raise CircuitParseError(f"xor target and control are both Q-bit {target}", lineno)
            statements.append(Statement("xor", gate=xor(target, control), line=lineno))
        elif keyword == "oracle":
            _expect_args(keyword, args, 1, lineno)
            if n_qbits != 2:
                raise CircuitParseError(f"oracle needs a 2-Q-bit register, got {n_qbits}", lineno)
            try:
                oracle = OracleId(args[0].lower())
            except ValueError:
                raise CircuitParseError(f"unknown oracle {args[0]!r}, expected f1..f4", lineno) from None
            statements.append(Statement("oracle", oracle=oracle, line=lineno))
        else:
            _expect_args(keyword, args, 0, lineno)
            statements.append(Statement("measure", line=lineno))

    if not statements:
        raise CircuitParseError("missing init", 1)
    return CircuitProgram(n_qbits=n_qbits, statements=tuple(statements))


def format_program(p: CircuitProgram) -> str:
    """Circuit text that parses back to an identical program."""
    return "\n".join(s.to_text() for s in p.statements) + "\n"


def run_program(p: CircuitProgram, sample_seed: Optional[int] = None) -> dict:
    """Run a program and report the final distribution (never sampled).

    Args:
        p: Parsed program.
        sample_seed: When given, the `measure` statement also draws one
            collapse with this seed, reported under "sampled".

    Returns:
        Report with n_qbits, final_state, outcomes, qbit_marginals and
        oracle_calls.
    """
    state = basis_state(p.init_bits)
    oracles: dict[OracleId, OracleFunction] = {}
    sampled = None
    for statement in p.statements[1:]:
        if statement.gate is not None:
            state = apply_gate(statement.gate, state)
        elif statement.keyword == "oracle":
            f = oracles.setdefault(statement.oracle, OracleFunction(statement.oracle))
            state = oracle_gate(f, state)
        elif sample_seed is not None:
            sampled = sample_outcome(state, sample_seed).bitstring

    report = {
        "n_qbits": p.n_qbits,
        "final_state": state.to_dict(),
        "outcomes": [{"bitstring": o.bitstring, "probability": o.probability}
                     for o in measure_all(state)],
        "qbit_marginals": [marginal_probabilities(state, q)[1] for q in range(1, p.n_qbits + 1)],
        "oracle_calls": sum(f.call_count for f in oracles.values()),
    }
    if sampled is not None:
        report["sampled"] = sampled
    logger.info("ran %d statements on %d Q-bits", len(p.statements), p.n_qbits)
    return report
