"""Qstate module - Q-bit registers, density matrices and entanglement tests.

Basis ordering: Q-bit 1 is the most significant bit of the basis index, so
the ket |110> is stored at index 6. Q-bit indices are 1-based everywhere in
the public API.
"""

import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import linalg

try:
    from errors import (DimensionError, InvalidStateError, NormalizationError,
                        ParameterError, QbitIndexError)
except ImportError:
    from src.errors import (DimensionError, InvalidStateError, NormalizationError,
                            ParameterError, QbitIndexError)

logger = logging.getLogger(__name__)

# Numerical settings
TOLERANCE = 1e-10
PURITY_TOLERANCE = 1e-9
ZERO_PROBABILITY = 1e-20  # below this an outcome is not reported
MAX_QBITS = 12

# Every two-level labeling maps onto |0>, |1>
KET_LABELS = {
    "0": 0, "1": 1,
    "↑": 0, "↓": 1,
    "u": 0, "d": 1,
    "+": 0, "-": 1, "−": 1,
    "f": 0, "e": 1,
}


def canonical_bits(label: str) -> str:
    """Translate a ket label into a string of 0/1 characters.

    Args:
        label: Ket label, optionally wrapped in |...>, using any two-level symbols.

    Returns:
        The same label written with 0 and 1 only.

    Raises:
        ParameterError: On an unknown symbol or an empty label.
    """
    body = label.strip().removeprefix("|").removesuffix(">").removesuffix("⟩")
    if not body:
        raise ParameterError("empty ket label")
    bits = []
    for symbol in body:
        if symbol not in KET_LABELS:
            raise ParameterError(f"unknown ket symbol {symbol!r} in {label!r}")
        bits.append(str(KET_LABELS[symbol]))
    return "".join(bits)


def _register_size(dim: int) -> int:
    """Number of Q-bits for a Hilbert space dimension, validated."""
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    if n > MAX_QBITS:
        raise DimensionError(f"{n} Q-bits exceeds the {MAX_QBITS} Q-bit limit")
    return n


def check_qbit(index: int, n_qbits: int) -> int:
    """Validate a 1-based Q-bit index.

    Returns:
        The 0-based axis of that Q-bit in the [2]*N tensor view.
    """
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise QbitIndexError(f"Q-bit index must be an integer, got {index!r}")
    if not 1 <= index <= n_qbits:
        raise QbitIndexError(f"Q-bit {index} outside register [1, {n_qbits}]")
    return int(index) - 1


def check_cut(cut: int, n_qbits: int) -> None:
    """Raise QbitIndexError unless cut is an integer in [1, n_qbits - 1]."""
    if isinstance(cut, bool) or not isinstance(cut, (int, np.integer)) or not 1 <= cut < n_qbits:
        raise QbitIndexError(f"cut {cut!r} must satisfy 1 <= cut < {n_qbits}")


class StateVector:
    """Pure state of an N-Q-bit register, immutable once built."""

    __slots__ = ("_amplitudes", "_n_qbits")

    def __init__(self, amplitudes: Iterable[complex], normalize: bool = False):
        """Build a state from 2^N amplitudes.

        Args:
            amplitudes: Complex amplitudes in basis-index order.
            normalize: Rescale to unit norm instead of rejecting an
                unnormalized input.

        Raises:
            DimensionError: If the length is not a power of two.
            NormalizationError: If the vector is not normalized (or is zero).
        """
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        n_qbits = _register_size(amps.size)
        norm = float(np.linalg.norm(amps))
        if normalize:
            if norm < TOLERANCE:
                raise NormalizationError("cannot normalize the zero vector")
            amps = amps / norm
        elif abs(norm - 1.0) > TOLERANCE:
            raise NormalizationError(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        self._amplitudes = amps
        self._n_qbits = n_qbits

    @classmethod
    def _wrap(cls, amplitudes: np.ndarray, n_qbits: int) -> "StateVector":
        """Wrap an already validated array without copying or checks."""
        state = cls.__new__(cls)
        amplitudes.setflags(write=False)
        state._amplitudes = amplitudes
        state._n_qbits = n_qbits
        return state

    @property
    def n_qbits(self) -> int:
        """Register size N."""
        return self._n_qbits

    @property
    def dim(self) -> int:
        """Hilbert space dimension 2^N."""
        return self._amplitudes.size

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only amplitude array."""
        return self._amplitudes

    @property
    def norm(self) -> float:
        """Euclidean norm of the amplitudes."""
        return float(np.linalg.norm(self._amplitudes))

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, index: int) -> complex:
        return complex(self._amplitudes[index])

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per Q-bit (axis k-1 = Q-bit k)."""
        return self._amplitudes.reshape([2] * self._n_qbits)

    def allclose(self, other: "StateVector", tol: float = TOLERANCE) -> bool:
        """Entrywise comparison within an absolute tolerance."""
        return (self._n_qbits == other.n_qbits
                and bool(np.allclose(self._amplitudes, other.amplitudes, rtol=0.0, atol=tol)))

    def to_dict(self) -> dict:
        """Serializable form {"n": N, "amplitudes": [[re, im], ...]}."""
        return {
            "n": self._n_qbits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self._amplitudes],
        }

    def to_json(self) -> str:
        """JSON text of to_dict(); floats use round-trip exact repr."""
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "StateVector":
        """Rebuild a state from its to_dict() form.

        Raises:
            DimensionError: If the amplitude count disagrees with "n".
        """
        amps = [complex(re, im) for re, im in data["amplitudes"]]
        if len(amps) != 2 ** int(data["n"]):
            raise DimensionError(f"{len(amps)} amplitudes for n = {data['n']}")
        return cls(amps)

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.allclose(other)

    __hash__ = None

    def __repr__(self) -> str:
        terms = []
        for index in np.flatnonzero(np.abs(self._amplitudes) > TOLERANCE):
            amp = self._amplitudes[index]
            terms.append(f"({amp.real:+.4f}{amp.imag:+.4f}j)|{index:0{self._n_qbits}b}>")
        return f"StateVector({' '.join(terms) or '0'})"


def basis_state(label: str) -> StateVector:
    """Basis ket for a label such as "110", "|+->" or "↑↓".

    Args:
        label: Ket label in any two-level symbols.

    Returns:
        The computational basis state with amplitude 1 at that index.
    """
    bits = canonical_bits(label)
    n_qbits = len(bits)
    if n_qbits > MAX_QBITS:
        raise DimensionError(f"{n_qbits} Q-bits exceeds the {MAX_QBITS} Q-bit limit")
    amps = np.zeros(2 ** n_qbits, dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector._wrap(amps, n_qbits)


def superposition(terms: dict[str, complex]) -> StateVector:
    """Normalized superposition of labeled basis kets, e.g. {"00": 1, "11": 1}."""
    if not terms:
        raise ParameterError("superposition needs at least one term")
    sizes = {len(canonical_bits(label)) for label in terms}
    if len(sizes) != 1:
        raise DimensionError(f"ket labels of different lengths: {sorted(terms)}")
    n_qbits = sizes.pop()
    amps = np.zeros(2 ** n_qbits, dtype=complex)
    for label, coefficient in terms.items():
        amps[int(canonical_bits(label), 2)] += coefficient
    return StateVector(amps, normalize=True)


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite 2^N x 2^N matrix."""

    __slots__ = ("_entries", "_n_qbits")

    def __init__(self, entries: np.ndarray, validate: bool = True):
        """Build a density matrix.

        Args:
            entries: Square complex matrix of size 2^N.
            validate: Check Hermiticity, trace and positivity.

        Raises:
            DimensionError: On a non-square or non power-of-two matrix.
            InvalidStateError: If an invariant fails.
        """
        matrix = np.array(entries, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {matrix.shape}")
        n_qbits = _register_size(matrix.shape[0])
        if validate:
            if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=TOLERANCE):
                raise InvalidStateError("density matrix is not Hermitian")
            trace = np.trace(matrix)
            if abs(trace - 1.0) > TOLERANCE:
                raise InvalidStateError(f"density matrix trace {trace!r} differs from 1")
            smallest = float(linalg.eigvalsh(matrix)[0])
            if smallest < -TOLERANCE:
                raise InvalidStateError(f"density matrix has eigenvalue {smallest!r} < 0")
        matrix.setflags(write=False)
        self._entries = matrix
        self._n_qbits = n_qbits

    @property
    def n_qbits(self) -> int:
        return self._n_qbits

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only matrix entries."""
        return self._entries

    def trace(self) -> float:
        return float(np.trace(self._entries).real)

    def purity(self) -> float:
        """Tr(rho^2); 1 for pure states, 1/d for the maximally mixed state."""
        return float(np.real(np.vdot(self._entries.conj().T, self._entries)))

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order."""
        return linalg.eigvalsh(self._entries)

    def allclose(self, other: "DensityMatrix", tol: float = TOLERANCE) -> bool:
        return (self._n_qbits == other.n_qbits
                and bool(np.allclose(self._entries, other.entries, rtol=0.0, atol=tol)))

    def __repr__(self) -> str:
        return f"DensityMatrix(n_qbits={self._n_qbits}, purity={self.purity():.6f})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """One outcome of a full-register measurement."""

    basis_index: int
    probability: float
    post_state: StateVector

    @property
    def bitstring(self) -> str:
        """Outcome written as a ket label, Q-bit 1 first."""
        return format(self.basis_index, f"0{self.post_state.n_qbits}b")


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product |a> ⊗ |b>; a's Q-bits come first."""
    n_qbits = a.n_qbits + b.n_qbits
    if n_qbits > MAX_QBITS:
        raise DimensionError(f"{n_qbits} Q-bits exceeds the {MAX_QBITS} Q-bit limit")
    return StateVector._wrap(np.kron(a.amplitudes, b.amplitudes), n_qbits)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Scalar product <a|b>, antilinear in a.

    Raises:
        DimensionError: If the registers differ in size.
    """
    if a.n_qbits != b.n_qbits:
        raise DimensionError(f"inner product of {a.n_qbits}- and {b.n_qbits}-Q-bit states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = TOLERANCE) -> bool:
    """True when |<a|b>| = 1 within tol, i.e. the states differ by a global phase."""
    return abs(abs(inner_product(a, b)) - 1.0) <= tol


def to_density(s: StateVector) -> DensityMatrix:
    """Projector |s><s| of a pure state."""
    amps = s.amplitudes
    return DensityMatrix(np.outer(amps, amps.conj()), validate=False)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on the kept Q-bits.

    Args:
        rho: Density matrix of the full register.
        keep: 1-based Q-bit indices to keep; they stay in ascending order.

    Raises:
        QbitIndexError: If keep is empty or names a Q-bit outside the register.
    """
    n_qbits = rho.n_qbits
    kept = sorted({check_qbit(q, n_qbits) for q in keep})
    if not kept:
        raise QbitIndexError("partial trace needs at least one Q-bit to keep")
    traced = [axis for axis in range(n_qbits) if axis not in kept]

    reduced = rho.entries.reshape([2] * (2 * n_qbits))
    remaining = n_qbits
    # Highest axes first so lower axis numbers stay valid
    for axis in reversed(traced):
        reduced = np.trace(reduced, axis1=axis, axis2=axis + remaining)
        remaining -= 1
    dim = 2 ** len(kept)
    return DensityMatrix(reduced.reshape(dim, dim), validate=False)


def reduced_purity(s: StateVector, cut: int) -> float:
    """Purity of the reduced state on Q-bits 1..cut."""
    check_cut(cut, s.n_qbits)
    left = s.amplitudes.reshape(2 ** cut, -1)
    rho_left = left @ left.conj().T
    return float(np.real(np.vdot(rho_left.conj().T, rho_left)))


def is_product_state(s: StateVector, cut: int) -> bool:
    """True iff s factorizes as psi_left ⊗ psi_right after Q-bit `cut`.

    Raises:
        QbitIndexError: If cut is not in [1, N-1].
    """
    return reduced_purity(s, cut) >= 1.0 - PURITY_TOLERANCE


def entanglement_entropy(s: StateVector, cut: int) -> float:
    """Von Neumann entropy, in bits, of the reduced state on Q-bits 1..cut."""
    check_cut(cut, s.n_qbits)
    rho_left = partial_trace(to_density(s), range(1, cut + 1))
    weights = rho_left.eigenvalues()
    weights = weights[weights > 1e-15]
    return float(-np.sum(weights * np.log2(weights)))


def measure_all(s: StateVector) -> list[MeasurementOutcome]:
    """Full probability distribution of a computational-basis measurement.

    Returns:
        One outcome per basis state with nonzero probability, in index order.
    """
    probabilities = np.abs(s.amplitudes) ** 2
    outcomes = []
    for index in np.flatnonzero(probabilities > ZERO_PROBABILITY):
        post = np.zeros(s.dim, dtype=complex)
        post[index] = 1.0
        outcomes.append(MeasurementOutcome(
            basis_index=int(index),
            probability=float(probabilities[index]),
            post_state=StateVector._wrap(post, s.n_qbits),
        ))
    return outcomes


def marginal_probabilities(s: StateVector, qbit: int) -> tuple[float, float]:
    """Probabilities of reading 0 and 1 on one Q-bit."""
    axis = check_qbit(qbit, s.n_qbits)
    weights = np.abs(s.tensor_view()) ** 2
    others = tuple(a for a in range(s.n_qbits) if a != axis)
    p0, p1 = weights.sum(axis=others) if others else weights
    return float(p0), float(p1)


def sample_outcome(s: StateVector, seed: Optional[int] = None) -> MeasurementOutcome:
    """Draw one collapse of a full-register measurement.

    Args:
        s: State to measure.
        seed: Seed for numpy's default_rng; the same seed gives the same outcome.
    """
    rng = np.random.default_rng(seed)
    outcomes = measure_all(s)
    weights = np.array([o.probability for o in outcomes])
    choice = rng.choice(len(outcomes), p=weights / weights.sum())
    logger.debug("sampled outcome %s with seed %s", outcomes[choice].bitstring, seed)
    return outcomes[choice]


def random_state(n_qbits: int, rng: np.random.Generator) -> StateVector:
    """Random normalized state with Gaussian amplitudes."""
    dim = 2 ** n_qbits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(amps, normalize=True)


def random_product_state(n_qbits: int, rng: np.random.Generator) -> StateVector:
    """Tensor product of n random single-Q-bit states."""
    state = random_state(1, rng)
    for _ in range(n_qbits - 1):
        state = tensor(state, random_state(1, rng))
    return state


def bell_state() -> StateVector:
    """(|00> + |11>)/√2."""
    return StateVector([1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)])
