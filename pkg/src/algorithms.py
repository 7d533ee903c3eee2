"""Algorithms module - Deutsch-Jozsa with oracle-call accounting, GHZ cascade."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

try:
    from errors import DimensionError, ParameterError
    from gates import GateOp, apply_gate, compose, rotation, xor
    from qstate import StateVector, basis_state, marginal_probabilities
except ImportError:
    from src.errors import DimensionError, ParameterError
    from src.gates import GateOp, apply_gate, compose, rotation, xor
    from src.qstate import StateVector, basis_state, marginal_probabilities

logger = logging.getLogger(__name__)

QUARTER_TURN = math.pi / 4


class OracleId(Enum):
    """The four one-bit Boolean functions."""
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"
    F4 = "f4"


# Oracle configurations: table holds (f(0), f(1))
ORACLE_CONFIG = {
    OracleId.F1: {"table": (0, 0), "label": "f(x) = 0", "constant": True},
    OracleId.F2: {"table": (1, 1), "label": "f(x) = 1", "constant": True},
    OracleId.F3: {"table": (0, 1), "label": "f(x) = x", "constant": False},
    OracleId.F4: {"table": (1, 0), "label": "f(x) = NOT x", "constant": False},
}


class Verdict(Enum):
    """Outcome of a constant-or-balanced decision."""
    CONSTANT = "constant"
    BALANCED = "balanced"


class OracleFunction:
    """Black-box f with a call counter; the only mutable state of a run."""

    def __init__(self, oracle_id: OracleId | str):
        """Initialize an oracle.

        Args:
            oracle_id: OracleId or its name ("f1".."f4").

        Raises:
            ParameterError: On an unknown oracle name.
        """
        try:
            self.oracle_id = OracleId(oracle_id)
        except ValueError as exc:
            raise ParameterError(f"unknown oracle {oracle_id!r}, expected f1..f4") from exc
        self._calls = 0

    @property
    def call_count(self) -> int:
        """Number of oracle applications so far."""
        return self._calls

    @property
    def is_constant(self) -> bool:
        return ORACLE_CONFIG[self.oracle_id]["constant"]

    @property
    def label(self) -> str:
        return ORACLE_CONFIG[self.oracle_id]["label"]

    def record_call(self) -> None:
        """Count one oracle application."""
        self._calls += 1

    def value(self, x: int) -> int:
        """f(x) without counting; for building the oracle unitary."""
        return ORACLE_CONFIG[self.oracle_id]["table"][x]

    def evaluate(self, x: int) -> int:
        """Classical call f(x); counts as one oracle call."""
        if x not in (0, 1):
            raise ParameterError(f"oracle input must be 0 or 1, got {x!r}")
        self.record_call()
        return self.value(x)

    def __repr__(self) -> str:
        return f"OracleFunction({self.oracle_id.value}, calls={self._calls})"


@dataclass
class DJResult:
    """Verdict of one constant-or-balanced run."""

    verdict: Verdict
    final_state: Optional[StateVector]
    oracle_calls: int
    stages: list[StateVector] = field(default_factory=list)

    def to_dict(self) -> dict:
        """JSON report {verdict, oracle_calls, final_state}."""
        return {
            "verdict": self.verdict.value,
            "oracle_calls": self.oracle_calls,
            "final_state": self.final_state.to_dict() if self.final_state is not None else None,
        }


def oracle_gate(f: OracleFunction, s: StateVector) -> StateVector:
    """Quantum oracle |x>|y> -> |x>|y ⊕ f(x)>; counts one call.

    Raises:
        DimensionError: If s is not a 2-Q-bit state.
    """
    if s.n_qbits != 2:
        raise DimensionError(f"oracle acts on 2 Q-bits, got {s.n_qbits}")
    out = np.zeros(4, dtype=complex)
    for index, amplitude in enumerate(s.amplitudes):
        x, y = index >> 1, index & 1
        out[(x << 1) | (y ^ f.value(x))] += amplitude
    f.record_call()
    return StateVector._wrap(out, 2)


def preparation_gates() -> list[GateOp]:
    """Step 2 rotations: (|0>+|1>)/√2 on Q-bit 1, (|0>-|1>)/√2 on Q-bit 2."""
    return [rotation(1, QUARTER_TURN, 0.0), rotation(2, QUARTER_TURN, math.pi)]


def deutsch_jozsa(f: OracleFunction) -> DJResult:
    """Decide constant vs balanced with a single oracle call.

    Steps: prepare |0>⊗|0>, rotate both spins, call the oracle once, undo
    the rotations, then read the first Q-bit's distribution (no sampling).
    """
    calls_before = f.call_count
    prepared = basis_state("00")
    gates = preparation_gates()
    rotated = compose(gates, prepared)
    queried = oracle_gate(f, rotated)
    final = compose([g.inverse() for g in reversed(gates)], queried)

    _, p_one = marginal_probabilities(final, 1)
    verdict = Verdict.BALANCED if p_one > 0.5 else Verdict.CONSTANT
    logger.debug("deutsch_jozsa %s: P(first Q-bit = 1) = %.3g -> %s",
                 f.oracle_id.value, p_one, verdict.value)
    return DJResult(
        verdict=verdict,
        final_state=final,
        oracle_calls=f.call_count - calls_before,
        stages=[prepared, rotated, queried, final],
    )


def classical_distinguish(f: OracleFunction) -> DJResult:
    """Classical decision: evaluate f(0) and f(1), two calls."""
    calls_before = f.call_count
    verdict = Verdict.CONSTANT if f.evaluate(0) == f.evaluate(1) else Verdict.BALANCED
    return DJResult(verdict=verdict, final_state=None, oracle_calls=f.call_count - calls_before)


def ghz_sequence(n_qbits: int = 3, root: Optional[int] = None) -> list[GateOp]:
    """Rotation-then-XOR cascade producing (|1…1> + |0…0>)/√2 from |1…1>.

    Args:
        n_qbits: Register size, at least 2.
        root: Q-bit the cascade starts from (default: the last one). The XOR
            chain spreads outwards from it, each step controlled by the
            neighbour nearer the root.

    Raises:
        ParameterError: If n_qbits < 2 or root lies outside the register.
    """
    if n_qbits < 2:
        raise ParameterError(f"GHZ preparation needs at least 2 Q-bits, got {n_qbits}")
    root = n_qbits if root is None else root
    if not 1 <= root <= n_qbits:
        raise ParameterError(f"cascade root {root} outside register [1, {n_qbits}]")

    sequence = [rotation(root, QUARTER_TURN, math.pi)]
    for target in range(root - 1, 0, -1):
        sequence.append(xor(target, target + 1))
    for target in range(root + 1, n_qbits + 1):
        sequence.append(xor(target, target - 1))
    return sequence


def ghz_trajectory(n_qbits: int = 3, root: Optional[int] = None) -> list[StateVector]:
    """Register after each cascade step, starting with |1…1>."""
    states = [basis_state("1" * n_qbits)]
    for g in ghz_sequence(n_qbits, root):
        states.append(apply_gate(g, states[-1]))
    return states


def ghz_prepare(n_qbits: int = 3, root: Optional[int] = None) -> StateVector:
    """Maximally entangled (|1…1> + |0…0>)/√2."""
    return ghz_trajectory(n_qbits, root)[-1]
