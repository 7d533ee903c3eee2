"""Decoherence module - system/environment coupling and the operation budget.

A register coupled to its environment evolves into Σ_i c_i |φ_i> ⊗ |e_i>.
All branch pairs share one environment overlap <e_i|e_j> = overlap (i ≠ j):
0 is complete decoherence, 1 is noiseless unitary evolution.
"""

import decimal
import logging
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

try:
    from errors import DimensionError, InvalidStateError, ParameterError
    from qstate import MAX_QBITS, TOLERANCE, DensityMatrix, StateVector
except ImportError:
    from src.errors import DimensionError, InvalidStateError, ParameterError
    from src.qstate import MAX_QBITS, TOLERANCE, DensityMatrix, StateVector

logger = logging.getLogger(__name__)

# Budget defaults: τ_dec / τ_op = 10^7
DEFAULT_TAU_DEC = 1.0
DEFAULT_TAU_OP = 1e-7

# Quoted Shor costs as (bits, log10 of operations); interpolated log-linearly
SHOR_OPS_ANCHORS = ((4, 6.0), (400, 12.0))

# Largest size shor_operations accepts; 10^999 operations at the top
MAX_SHOR_BITS = 2 ** 16

# Ratios this close to an integer (relative) count as that integer
RATIO_SNAP_TOLERANCE = 4 * sys.float_info.epsilon

# Quoted register sizes the n/2 rule does not reproduce (it gives 19 for 10^6)
QUOTED_QBIT_COUNTS = {10 ** 6: 20}


@dataclass(frozen=True)
class EnvironmentModel:
    """Branches c_i |φ_i> with a uniform environment overlap."""

    branch_amplitudes: tuple
    branch_states: tuple
    overlap: float

    def __post_init__(self):
        amplitudes = tuple(complex(c) for c in self.branch_amplitudes)
        states = tuple(self.branch_states)
        object.__setattr__(self, "branch_amplitudes", amplitudes)
        object.__setattr__(self, "branch_states", states)

        if not amplitudes or len(amplitudes) != len(states):
            raise InvalidStateError(
                f"{len(amplitudes)} amplitudes for {len(states)} branch states")
        if len({s.n_qbits for s in states}) != 1:
            raise DimensionError("branch states live on different registers")
        weight = sum(abs(c) ** 2 for c in amplitudes)
        if abs(weight - 1.0) > TOLERANCE:
            raise InvalidStateError(f"branch weights sum to {weight!r}, not 1")
        if not 0.0 <= self.overlap <= 1.0:
            raise ParameterError(f"overlap {self.overlap!r} outside [0, 1]")
        gram = self.state_matrix().conj().T @ self.state_matrix()
        if not np.allclose(gram, np.eye(len(states)), rtol=0.0, atol=TOLERANCE):
            raise InvalidStateError("branch states are not orthonormal")

    @property
    def branch_count(self) -> int:
        return len(self.branch_states)

    @property
    def n_qbits(self) -> int:
        """Size of the system register."""
        return self.branch_states[0].n_qbits

    def state_matrix(self) -> np.ndarray:
        """Branch states as the columns of a 2^n x k matrix."""
        return np.column_stack([s.amplitudes for s in self.branch_states])

    def coefficients(self) -> np.ndarray:
        return np.array(self.branch_amplitudes, dtype=complex)

    def with_overlap(self, overlap: float) -> "EnvironmentModel":
        """Same branches, different environment overlap."""
        return EnvironmentModel(self.branch_amplitudes, self.branch_states, overlap)


@dataclass(frozen=True)
class DecoherenceBudget:
    """Decoherence time, gate time and the operations a computation needs."""

    tau_dec: float
    tau_op: float
    required_ops: int = 0

    def __post_init__(self):
        for name in ("tau_dec", "tau_op"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive time, got {value!r}")
        if not math.isfinite(self.tau_dec / self.tau_op):
            raise ParameterError(f"tau_dec / tau_op overflows for {self.tau_dec!r} / {self.tau_op!r}")
        if isinstance(self.required_ops, bool) or not isinstance(self.required_ops, int) \
                or self.required_ops < 0:
            raise ParameterError(f"required_ops must be a non-negative integer, got {self.required_ops!r}")

    @property
    def ratio(self) -> float:
        """M = τ_dec / τ_op before flooring."""
        return self.tau_dec / self.tau_op


@dataclass(frozen=True)
class ShorRequirements:
    """Operations and Q-bits needed to factor a number of a given size."""

    bits: int
    number: int
    ops: int
    qbits: int
    interpolated: bool
    quoted: bool

    def to_dict(self) -> dict:
        return {
            "bits": self.bits,
            "ops": self.ops,
            "qbits": self.qbits,
            "interpolated": self.interpolated,
            "quoted": self.quoted,
        }


def expectation(env: EnvironmentModel, observable: np.ndarray) -> float:
    """Mean value of a system observable after environment coupling.

    Returns Σ_i |c_i|² <φ_i|A|φ_i> + overlap · Σ_{i≠j} c_i* c_j <φ_i|A|φ_j>.

    Raises:
        DimensionError: If the observable does not match the register.
        InvalidStateError: If the observable is not Hermitian.
    """
    a = np.asarray(observable, dtype=complex)
    dim = 2 ** env.n_qbits
    if a.shape != (dim, dim):
        raise DimensionError(f"observable shape {a.shape} does not match dimension {dim}")
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=TOLERANCE):
        raise InvalidStateError("observable is not Hermitian")

    phi = env.state_matrix()
    c = env.coefficients()
    elements = phi.conj().T @ a @ phi
    diagonal = np.sum(np.abs(c) ** 2 * np.diag(elements))
    cross = c.conj() @ elements @ c - diagonal
    return float(np.real(diagonal + env.overlap * cross))


def decohered_density(env: EnvironmentModel) -> DensityMatrix:
    """Reduced state of the system: mixture at overlap 0, pure projector at 1."""
    c = env.coefficients()
    weights = env.overlap * np.outer(c, c.conj()) + (1.0 - env.overlap) * np.diag(np.abs(c) ** 2)
    phi = env.state_matrix()
    return DensityMatrix(phi @ weights @ phi.conj().T, validate=False)


def system_environment_state(env: EnvironmentModel) -> StateVector:
    """Explicit pure state Σ c_i |φ_i> ⊗ |e_i> with <e_i|e_j> = overlap.

    The environment register holds |e_i> = √o |0> + √(1-o) |i+1>; the system
    Q-bits come first, so tracing out Q-bits n+1.. recovers decohered_density.

    Raises:
        DimensionError: If system plus environment exceed MAX_QBITS.
    """
    k = env.branch_count
    env_qbits = max(1, math.ceil(math.log2(k + 1)))
    if env.n_qbits + env_qbits > MAX_QBITS:
        raise DimensionError(f"system of {env.n_qbits} plus environment of {env_qbits} Q-bits "
                             f"exceeds {MAX_QBITS}")
    env_dim = 2 ** env_qbits
    total = np.zeros(2 ** env.n_qbits * env_dim, dtype=complex)
    for i, (c, phi) in enumerate(zip(env.branch_amplitudes, env.branch_states)):
        e = np.zeros(env_dim, dtype=complex)
        e[0] = math.sqrt(env.overlap)
        e[i + 1] = math.sqrt(1.0 - env.overlap)
        total += c * np.kron(phi.amplitudes, e)
    return StateVector(total)


def overlap_at(t: float, tau_dec: float) -> float:
    """Environment overlap exp(-t/τ_dec) after time t.

    Raises:
        ParameterError: If tau_dec <= 0 or t < 0.
    """
    if not tau_dec > 0:
        raise ParameterError(f"tau_dec must be positive, got {tau_dec!r}")
    if t < 0:
        raise ParameterError(f"elapsed time must be non-negative, got {t!r}")
    return math.exp(-t / tau_dec)


def dephase(env: EnvironmentModel, t: float, tau_dec: float) -> EnvironmentModel:
    """Environment model after time t of exponential dephasing."""
    return env.with_overlap(overlap_at(t, tau_dec))


def max_operations(b: DecoherenceBudget) -> int:
    """M = floor(τ_dec / τ_op).

    Ratios within a few ulps of an integer snap to it, so 0.3 s / 0.1 s
    counts as 3 despite binary rounding of the times.
    """
    ratio = b.ratio
    nearest = round(ratio)
    if nearest > 0 and math.isclose(ratio, nearest, rel_tol=RATIO_SNAP_TOLERANCE):
        return int(nearest)
    return math.floor(ratio)


def feasible(b: DecoherenceBudget) -> bool:
    """True iff the required operations fit before decoherence."""
    return b.required_ops <= max_operations(b)


def shor_operations(bits: int) -> int:
    """Operation count to factor a `bits`-bit number.

    Log-linear through the quoted anchors: 10^6 at 4 bits, 10^12 at 400.
    Evaluated in decimal arithmetic with enough digits for an exact integer.

    Raises:
        ParameterError: If bits < 2 or bits > MAX_SHOR_BITS.
    """
    if bits < 2:
        raise ParameterError(f"bits must be at least 2, got {bits!r}")
    if bits > MAX_SHOR_BITS:
        raise ParameterError(f"bits must be at most {MAX_SHOR_BITS}, got {bits!r}")
    (b0, e0), (b1, e1) = SHOR_OPS_ANCHORS
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        exponent = (decimal.Decimal(e0)
                    + decimal.Decimal(e1 - e0) * (bits - b0) / (b1 - b0))
        ctx.prec = int(exponent) + 20
        ops = decimal.Decimal(10) ** exponent
        return int(ops.to_integral_value(rounding=decimal.ROUND_HALF_EVEN))


def shor_qbits(n: int) -> int:
    """Q-bits needed to factor n: enough to hold n/2, i.e. ceil(log2(n/2)).

    Raises:
        ParameterError: If n < 2.
    """
    if n < 2:
        raise ParameterError(f"number to factor must be at least 2, got {n!r}")
    if n in QUOTED_QBIT_COUNTS:
        logger.warning("using quoted register size %d for n = %d instead of the n/2 rule",
                       QUOTED_QBIT_COUNTS[n], n)
        return QUOTED_QBIT_COUNTS[n]
    # 2^q >= n/2  <=>  2^(q+1) >= n
    return (n - 1).bit_length() - 1


def shor_requirements(bits: int, number: Optional[int] = None) -> ShorRequirements:
    """Operations and Q-bits to factor a number.

    Args:
        bits: Size of the number in bits.
        number: The number itself; defaults to the largest `bits`-bit integer.
    """
    ops = shor_operations(bits)
    number = 2 ** bits - 1 if number is None else number
    return ShorRequirements(
        bits=bits,
        number=number,
        ops=ops,
        qbits=shor_qbits(number),
        interpolated=bits not in {anchor for anchor, _ in SHOR_OPS_ANCHORS},
        quoted=number in QUOTED_QBIT_COUNTS,
    )


def random_environment(n_qbits: int, k: int, overlap: float,
                       rng: np.random.Generator) -> EnvironmentModel:
    """Random k-branch environment model on an n-Q-bit system.

    Raises:
        DimensionError: If k orthonormal branches do not fit in 2^n dimensions.
    """
    dim = 2 ** n_qbits
    if not 1 <= k <= dim:
        raise DimensionError(f"{k} orthonormal branches do not fit {n_qbits} Q-bits")
    basis, _ = np.linalg.qr(rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k)))
    c = rng.normal(size=k) + 1j * rng.normal(size=k)
    c /= np.linalg.norm(c)
    states: Sequence[StateVector] = [StateVector(basis[:, i]) for i in range(k)]
    return EnvironmentModel(tuple(c), tuple(states), overlap)
