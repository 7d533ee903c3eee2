"""Gates module - rotation and XOR, the two universal gates, on N-Q-bit registers."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

try:
    from errors import DimensionError, GateError, ParameterError, QbitIndexError
    from qstate import StateVector, check_qbit
except ImportError:
    from src.errors import DimensionError, GateError, ParameterError, QbitIndexError
    from src.qstate import StateVector, check_qbit

logger = logging.getLogger(__name__)

# Realization settings
FULL_MATRIX_MAX_QBITS = 8
UNITARY_SAMPLE_PAIRS = 20
UNITARY_TOLERANCE = 1e-10
INNER_PRODUCT_TOLERANCE = 1e-9
NORM_DRIFT = 1e-9
UNITARY_SEED = 2012


class GateKind(Enum):
    """Gate families; the value is the circuit-file keyword."""
    ROTATION = "rot"
    XOR = "xor"
    MATRIX = "matrix"


@dataclass(frozen=True)
class RotationParams:
    """Angles of R_{θφ}, in radians."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ParameterError(f"rotation angles must be finite, got {self.theta}, {self.phi}")


def rotation_matrix(p: RotationParams) -> np.ndarray:
    """2x2 matrix of R_{θφ}.

    Columns are the images of |0> and |1>:
    R|0> = cos θ|0> + e^{-iφ} sin θ|1>, R|1> = -e^{iφ} sin θ|0> + cos θ|1>.
    """
    c, s = math.cos(p.theta), math.sin(p.theta)
    return np.array([
        [c, -np.exp(1j * p.phi) * s],
        [np.exp(-1j * p.phi) * s, c],
    ], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """A gate acting on designated Q-bits, identity elsewhere.

    XOR follows the zero-controlled convention C(target, control): the
    target flips iff the control Q-bit is |0>. This is the opposite of the
    textbook CNOT.
    """

    kind: GateKind
    target: int
    control: Optional[int] = None
    params: Optional[RotationParams] = None
    matrix: Optional[tuple] = None  # rows of a 2x2 matrix, MATRIX kind only

    def __post_init__(self):
        if isinstance(self.target, bool) or not isinstance(self.target, int) or self.target < 1:
            raise QbitIndexError(f"target must be a positive Q-bit index, got {self.target!r}")
        if self.kind is GateKind.XOR:
            if isinstance(self.control, bool) or not isinstance(self.control, int) or self.control < 1:
                raise QbitIndexError(f"control must be a positive Q-bit index, got {self.control!r}")
            if self.control == self.target:
                raise GateError(f"xor target and control are both Q-bit {self.target}")
        elif self.kind is GateKind.ROTATION:
            if self.params is None:
                raise GateError("rotation gate needs RotationParams")
        elif self.matrix is None or np.shape(self.matrix) != (2, 2):
            raise GateError("matrix gate needs a 2x2 matrix")

    @property
    def qbits(self) -> tuple[int, ...]:
        """Q-bits the gate touches."""
        if self.kind is GateKind.XOR:
            return (self.target, self.control)
        return (self.target,)

    def local_matrix(self) -> np.ndarray:
        """2x2 matrix of a single-Q-bit gate."""
        if self.kind is GateKind.ROTATION:
            return rotation_matrix(self.params)
        if self.kind is GateKind.MATRIX:
            return np.array(self.matrix, dtype=complex)
        raise GateError("xor has no single-Q-bit matrix")

    def inverse(self) -> "GateOp":
        """Gate undoing this one: R(θ, φ)† = R(−θ, φ), XOR is an involution."""
        if self.kind is GateKind.ROTATION:
            return rotation(self.target, -self.params.theta, self.params.phi)
        if self.kind is GateKind.XOR:
            return self
        return single_qbit_gate(self.target, self.local_matrix().conj().T)


def rotation(target: int, theta: float, phi: float = 0.0) -> GateOp:
    """R_{θφ} on one Q-bit."""
    return GateOp(GateKind.ROTATION, target, params=RotationParams(float(theta), float(phi)))


def xor(target: int, control: int) -> GateOp:
    """C(target, control): flip target when control is |0>."""
    return GateOp(GateKind.XOR, target, control=control)


def single_qbit_gate(target: int, matrix: np.ndarray) -> GateOp:
    """Arbitrary 2x2 matrix on one Q-bit; unitarity is not checked here."""
    rows = tuple(tuple(complex(x) for x in row) for row in np.asarray(matrix))
    return GateOp(GateKind.MATRIX, target, matrix=rows)


def _apply_to_array(g: GateOp, amplitudes: np.ndarray, n_qbits: int) -> np.ndarray:
    """Apply g to a raw amplitude array by updating amplitude pairs."""
    view = amplitudes.reshape([2] * n_qbits)
    target = check_qbit(g.target, n_qbits)

    if g.kind is GateKind.XOR:
        control = check_qbit(g.control, n_qbits)
        flipped = view.copy()
        low = [slice(None)] * n_qbits
        high = [slice(None)] * n_qbits
        low[control] = high[control] = 0
        low[target], high[target] = 0, 1
        flipped[tuple(low)] = view[tuple(high)]
        flipped[tuple(high)] = view[tuple(low)]
        return flipped.reshape(-1)

    out = np.tensordot(g.local_matrix(), view, axes=([1], [target]))
    return np.moveaxis(out, 0, target).reshape(-1)


def apply_gate(g: GateOp, s: StateVector) -> StateVector:
    """Return U|s> for the full-register embedding of g.

    Raises:
        QbitIndexError: If the gate names a Q-bit outside the register.
        GateError: If the result is no longer normalized (non-unitary matrix).
    """
    out = _apply_to_array(g, s.amplitudes, s.n_qbits)
    norm = float(np.linalg.norm(out))
    if abs(norm - 1.0) > NORM_DRIFT:
        raise GateError(f"{g.kind.value} gate on Q-bit {g.target} changed the norm to {norm!r}")
    return StateVector._wrap(out, s.n_qbits)


def compose(gates: Iterable[GateOp], s: StateVector) -> StateVector:
    """Apply gates left to right in sequence order."""
    for g in gates:
        s = apply_gate(g, s)
    return s


def gate_matrix(g: GateOp, n_qbits: int) -> np.ndarray:
    """Full 2^N x 2^N matrix of g, built column by column.

    Raises:
        DimensionError: Above FULL_MATRIX_MAX_QBITS Q-bits.
    """
    if n_qbits > FULL_MATRIX_MAX_QBITS:
        raise DimensionError(f"full matrices are limited to {FULL_MATRIX_MAX_QBITS} Q-bits")
    dim = 2 ** n_qbits
    identity = np.eye(dim, dtype=complex)
    return np.column_stack([_apply_to_array(g, identity[:, k], n_qbits) for k in range(dim)])


def check_unitary(g: GateOp, n_qbits: int) -> bool:
    """True iff g realizes a unitary on an N-Q-bit register.

    Small registers test U†U = 1 on the full matrix; larger ones check that
    inner products of random state pairs survive the gate.
    """
    try:
        if n_qbits <= FULL_MATRIX_MAX_QBITS:
            u = gate_matrix(g, n_qbits)
            return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]),
                                    rtol=0.0, atol=UNITARY_TOLERANCE))

        rng = np.random.default_rng(UNITARY_SEED)
        dim = 2 ** n_qbits
        for _ in range(UNITARY_SAMPLE_PAIRS):
            psi, phi = (rng.normal(size=(2, dim)) + 1j * rng.normal(size=(2, dim)))
            psi /= np.linalg.norm(psi)
            phi /= np.linalg.norm(phi)
            before = np.vdot(psi, phi)
            after = np.vdot(_apply_to_array(g, psi, n_qbits), _apply_to_array(g, phi, n_qbits))
            norm = np.linalg.norm(_apply_to_array(g, psi, n_qbits))
            if abs(after - before) > INNER_PRODUCT_TOLERANCE or abs(norm - 1.0) > INNER_PRODUCT_TOLERANCE:
                return False
        return True
    except QbitIndexError as exc:
        logger.warning("gate does not fit a %d-Q-bit register: %s", n_qbits, exc)
        return False


def format_gate(g: GateOp) -> str:
    """Circuit-file text of a gate: `rot t θ φ` or `xor t c`."""
    if g.kind is GateKind.ROTATION:
        return f"rot {g.target} {g.params.theta!r} {g.params.phi!r}"
    if g.kind is GateKind.XOR:
        return f"xor {g.target} {g.control}"
    raise GateError("matrix gates have no circuit-file syntax")


def random_gate(n_qbits: int, rng: np.random.Generator) -> GateOp:
    """Random rotation or (for N >= 2) random xor."""
    if n_qbits >= 2 and rng.random() < 0.5:
        target, control = rng.choice(n_qbits, size=2, replace=False) + 1
        return xor(int(target), int(control))
    target = int(rng.integers(1, n_qbits + 1))
    theta, phi = rng.uniform(0.0, 2 * math.pi, size=2)
    return rotation(target, theta, phi)


def random_sequence(n_qbits: int, length: int, rng: np.random.Generator) -> Sequence[GateOp]:
    """List of `length` random gates."""
    return [random_gate(n_qbits, rng) for _ in range(length)]
