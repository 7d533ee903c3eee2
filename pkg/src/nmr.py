"""NMR module - thermal spin populations, pseudo-pure states and separability.

A pseudo-pure state is ρ_ε = (1-ε)/d · 1 + ε ρ_1 with d = 2^N. Its
separability is certified by expanding it over products of single-Q-bit
Pauli eigenprojectors P_w^± = (1 ± σ_w)/2: non-negative coefficients
everywhere make ρ_ε an explicit mixture of product states. The partial
transpose test is the independent check (exact for two Q-bits).
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy import linalg, optimize

try:
    from errors import DimensionError, InvalidStateError, ParameterError
    from qstate import (TOLERANCE, DensityMatrix, StateVector, basis_state, bell_state,
                        canonical_bits, check_cut, superposition, tensor, to_density)
except ImportError:
    from src.errors import DimensionError, InvalidStateError, ParameterError
    from src.qstate import (TOLERANCE, DensityMatrix, StateVector, basis_state, bell_state,
                            canonical_bits, check_cut, superposition, tensor, to_density)

logger = logging.getLogger(__name__)

# Numerical settings
CERTIFICATE_TOLERANCE = 1e-12
BISECTION_TOLERANCE = 1e-6
PAULI_MAX_QBITS = 5
CERTIFICATE_MAX_QBITS = 3
THERMAL_DELTA = 1e-5  # typical E/kT deviation at room temperature

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Rows I, X, Y, Z; columns P_x^+, P_x^-, P_y^+, P_y^-, P_z^+, P_z^-.
# σ_w = P_w^+ - P_w^-, and 1 = (1/3) Σ_w (P_w^+ + P_w^-).
PROJECTOR_EXPANSION = np.array([
    [1 / 3, 1 / 3, 1 / 3, 1 / 3, 1 / 3, 1 / 3],
    [1, -1, 0, 0, 0, 0],
    [0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 1, -1],
])
PROJECTOR_LABELS = ("x+", "x-", "y+", "y-", "z+", "z-")


class PureStateKind(Enum):
    """Pure parts offered by the nmr-sep command."""
    BELL = "bell"
    GHZ = "ghz"
    BASIS0 = "basis0"


# Pure-part configurations
PURE_STATE_CONFIG = {
    PureStateKind.BELL: {"label": "(|00>+|11>)/√2 on Q-bits 1-2, |0> elsewhere", "min_qbits": 2},
    PureStateKind.GHZ: {"label": "(|0…0>+|1…1>)/√2", "min_qbits": 2},
    PureStateKind.BASIS0: {"label": "|0…0>", "min_qbits": 1},
}


@dataclass(frozen=True)
class BoltzmannModel:
    """Energies of every N-spin configuration at temperature kT."""

    energies: dict = field(hash=False)
    kT: float

    def __post_init__(self):
        if not (math.isfinite(self.kT) and self.kT > 0):
            raise ParameterError(f"kT must be positive, got {self.kT!r}")
        energies = {canonical_bits(config): float(e) for config, e in self.energies.items()}
        sizes = {len(config) for config in energies}
        if len(sizes) != 1:
            raise DimensionError("spin configurations of different lengths")
        n_qbits = sizes.pop()
        if len(energies) != 2 ** n_qbits:
            raise DimensionError(f"{len(energies)} energies given for {2 ** n_qbits} configurations")
        object.__setattr__(self, "energies", dict(sorted(energies.items())))

    @property
    def n_qbits(self) -> int:
        return len(next(iter(self.energies)))

    @classmethod
    def zeeman(cls, splittings: list[float], kT: float) -> "BoltzmannModel":
        """Independent spins: spin k contributes -Δ_k/2 in |0> and +Δ_k/2 in |1>."""
        energies = {}
        for config in itertools.product("01", repeat=len(splittings)):
            energies["".join(config)] = sum(
                (0.5 if bit == "1" else -0.5) * delta for bit, delta in zip(config, splittings))
        return cls(energies, kT)


@dataclass(frozen=True)
class PseudoPureState:
    """ρ_ε = (1-ε)/d · 1_d + ε ρ_1."""

    n_qbits: int
    epsilon: float
    pure_part: DensityMatrix

    def __post_init__(self):
        if isinstance(self.epsilon, bool) or not (math.isfinite(self.epsilon) and 0.0 <= self.epsilon <= 1.0):
            raise ParameterError(f"epsilon {self.epsilon!r} outside [0, 1]")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if abs(self.pure_part.trace() - 1.0) > TOLERANCE or abs(self.pure_part.purity() - 1.0) > TOLERANCE:
            raise InvalidStateError("pure part must be a rank-1 projector")
        if self.pure_part.n_qbits != self.n_qbits:
            raise DimensionError(f"pure part has {self.pure_part.n_qbits} Q-bits, expected {self.n_qbits}")

    @property
    def d(self) -> int:
        return 2 ** self.n_qbits

    def matrix(self) -> DensityMatrix:
        """Realized density matrix ρ_ε."""
        mixed = (1.0 - self.epsilon) / self.d * np.eye(self.d)
        return DensityMatrix(mixed + self.epsilon * self.pure_part.entries, validate=False)

    def deviation(self) -> np.ndarray:
        """Traceless part ρ_ε - (1/d) 1."""
        return deviation_matrix(self.matrix())


@dataclass(frozen=True)
class PauliDecomposition:
    """Coefficients t_α = Tr(ρ σ_α) / 2^N over all Pauli strings."""

    n_qbits: int
    coefficients: dict = field(hash=False)

    def coefficient(self, label: str) -> float:
        return self.coefficients.get(label, 0.0)

    def nonzero(self, tol: float = TOLERANCE) -> dict:
        """Coefficients whose magnitude exceeds tol."""
        return {label: t for label, t in self.coefficients.items() if abs(t) > tol}

    def as_tensor(self) -> np.ndarray:
        """Coefficients as an array with one I/X/Y/Z axis per Q-bit."""
        return np.array(list(self.coefficients.values())).reshape([4] * self.n_qbits)

    def reconstruct(self) -> np.ndarray:
        """Σ_α t_α σ_α."""
        d = 2 ** self.n_qbits
        total = np.zeros((d, d), dtype=complex)
        for label, t in self.coefficients.items():
            total += t * pauli_string(label)
        return total


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of the projector-expansion separability test."""

    separable_certified: bool
    min_coefficient: float
    coefficients: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class PPTResult:
    """Outcome of the partial-transpose test."""

    ppt: bool
    min_eigenvalue: float
    criterion: str


def pauli_string(label: str) -> np.ndarray:
    """Tensor product of Pauli matrices, e.g. "XZ" -> σx ⊗ σz."""
    return functools.reduce(np.kron, (PAULI_MATRICES[c] for c in label))


def deviation_matrix(rho: DensityMatrix) -> np.ndarray:
    """ρ - (1/d) 1, the traceless part NMR observes."""
    return rho.entries - np.eye(rho.dim) / rho.dim


def boltzmann_populations(m: BoltzmannModel) -> dict[str, float]:
    """P_c = exp(-E_c/kT) / Z for every configuration, in index order."""
    exponents = -np.array(list(m.energies.values())) / m.kT
    weights = np.exp(exponents - exponents.max())
    populations = weights / weights.sum()
    return {config: float(p) for config, p in zip(m.energies, populations)}


def thermal_density(m: BoltzmannModel) -> DensityMatrix:
    """Diagonal thermal state in the spin-configuration basis."""
    return DensityMatrix(np.diag(list(boltzmann_populations(m).values())))


def make_pseudo_pure(n_qbits: int, epsilon: float, pure_state: StateVector) -> PseudoPureState:
    """Pseudo-pure state with polarization epsilon around |ψ><ψ|.

    Raises:
        ParameterError: If epsilon is outside [0, 1].
        DimensionError: If the pure state is not on n_qbits Q-bits.
    """
    if pure_state.n_qbits != n_qbits:
        raise DimensionError(f"pure state has {pure_state.n_qbits} Q-bits, expected {n_qbits}")
    return PseudoPureState(n_qbits=n_qbits, epsilon=epsilon, pure_part=to_density(pure_state))


def pauli_decompose(rho: DensityMatrix) -> PauliDecomposition:
    """Expand ρ over the 4^N Pauli strings.

    Raises:
        DimensionError: Above PAULI_MAX_QBITS Q-bits.
    """
    n_qbits = rho.n_qbits
    if n_qbits > PAULI_MAX_QBITS:
        raise DimensionError(f"Pauli decomposition is limited to {PAULI_MAX_QBITS} Q-bits")
    coefficients = {}
    for letters in itertools.product("IXYZ", repeat=n_qbits):
        label = "".join(letters)
        # Tr(ρ σ) = Σ_ij ρ_ij σ_ji
        value = np.sum(rho.entries * pauli_string(label).T) / rho.dim
        if abs(value.imag) > TOLERANCE:
            raise InvalidStateError(f"complex Pauli coefficient for {label}: {value!r}")
        coefficients[label] = float(value.real)
    return PauliDecomposition(n_qbits=n_qbits, coefficients=coefficients)


def separability_certificate(p: PseudoPureState) -> CertificateResult:
    """Sufficient separability test over the 6^N product projectors.

    Raises:
        DimensionError: Above CERTIFICATE_MAX_QBITS Q-bits.
    """
    if p.n_qbits > CERTIFICATE_MAX_QBITS:
        raise DimensionError(f"separability certificate is limited to {CERTIFICATE_MAX_QBITS} Q-bits")
    coefficients = pauli_decompose(p.matrix()).as_tensor()
    # Contracting the leading axis each time cycles the axes back into order
    for _ in range(p.n_qbits):
        coefficients = np.tensordot(coefficients, PROJECTOR_EXPANSION, axes=([0], [0]))
    smallest = float(coefficients.min())
    worst = np.unravel_index(np.argmin(coefficients), coefficients.shape)
    logger.debug("smallest coefficient %.3g on %s", smallest,
                 " ".join(PROJECTOR_LABELS[i] for i in worst))
    return CertificateResult(
        separable_certified=smallest >= -CERTIFICATE_TOLERANCE,
        min_coefficient=smallest,
        coefficients=coefficients,
    )


def partial_transpose(rho: DensityMatrix, cut: int) -> np.ndarray:
    """Transpose the Q-bits after `cut` (the second factor of the bipartition)."""
    check_cut(cut, rho.n_qbits)
    d_left, d_right = 2 ** cut, 2 ** (rho.n_qbits - cut)
    blocks = rho.entries.reshape(d_left, d_right, d_left, d_right)
    return blocks.transpose(0, 3, 2, 1).reshape(rho.dim, rho.dim)


def ppt_check(rho: DensityMatrix, cut: int) -> PPTResult:
    """Positivity of the partial transpose across the cut.

    Raises:
        QbitIndexError: If cut is not in [1, N-1].
    """
    smallest = float(linalg.eigvalsh(partial_transpose(rho, cut))[0])
    criterion = "necessary-and-sufficient" if rho.n_qbits == 2 else "necessary-only"
    return PPTResult(ppt=smallest >= -TOLERANCE, min_eigenvalue=smallest, criterion=criterion)


def epsilon_thermal(n_qbits: int, delta: float = THERMAL_DELTA) -> float:
    """Polarization reachable from a thermal state at deviation scale E/kT = delta.

    Order-of-magnitude model: ε = delta, clipped to the formal limit 1.

    Raises:
        ParameterError: If delta <= 0 or n_qbits < 1.
    """
    if n_qbits < 1:
        raise ParameterError(f"n_qbits must be positive, got {n_qbits!r}")
    if not delta > 0:
        raise ParameterError(f"delta must be positive, got {delta!r}")
    return min(float(delta), 1.0)


def _largest_passing_epsilon(margin: Callable[[float], float], tol: float) -> float:
    """Largest ε in [0, 1] with margin(ε) >= 0, for margin decreasing in ε."""
    if margin(1.0) >= 0:
        return 1.0
    return float(optimize.bisect(margin, 0.0, 1.0, xtol=tol))


def certificate_threshold(n_qbits: int, pure_state: StateVector,
                          tol: float = BISECTION_TOLERANCE) -> float:
    """Largest ε for which the pseudo-pure state is still certified separable."""
    def margin(epsilon: float) -> float:
        result = separability_certificate(make_pseudo_pure(n_qbits, epsilon, pure_state))
        return result.min_coefficient + CERTIFICATE_TOLERANCE

    threshold = _largest_passing_epsilon(margin, tol)
    logger.debug("certificate threshold for %d Q-bits: %.7f", n_qbits, threshold)
    return threshold


def ppt_threshold(n_qbits: int, pure_state: StateVector, cut: int = 1,
                  tol: float = BISECTION_TOLERANCE) -> float:
    """Largest ε for which the pseudo-pure state keeps a positive partial transpose."""
    def margin(epsilon: float) -> float:
        rho = make_pseudo_pure(n_qbits, epsilon, pure_state).matrix()
        return ppt_check(rho, cut).min_eigenvalue + TOLERANCE

    threshold = _largest_passing_epsilon(margin, tol)
    logger.debug("PPT threshold for %d Q-bits at cut %d: %.7f", n_qbits, cut, threshold)
    return threshold


def pure_state(kind: PureStateKind | str, n_qbits: int) -> StateVector:
    """Pure part for a named kind.

    Raises:
        ParameterError: On an unknown kind or a register too small for it.
    """
    try:
        kind = PureStateKind(kind)
    except ValueError as exc:
        raise ParameterError(f"unknown pure state {kind!r}, expected bell, ghz or basis0") from exc
    if n_qbits < PURE_STATE_CONFIG[kind]["min_qbits"]:
        raise ParameterError(f"{kind.value} needs at least {PURE_STATE_CONFIG[kind]['min_qbits']} Q-bits")
    if kind is PureStateKind.BELL:
        return bell_state() if n_qbits == 2 else tensor(bell_state(), basis_state("0" * (n_qbits - 2)))
    if kind is PureStateKind.GHZ:
        return superposition({"0" * n_qbits: 1, "1" * n_qbits: 1})
    return basis_state("0" * n_qbits)
