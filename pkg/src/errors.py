"""Errors module - exception hierarchy shared by every simulator module."""


class SimulatorError(Exception):
    """Base class for all simulator errors."""


class DimensionError(SimulatorError, ValueError):
    """Register sizes or matrix shapes do not match."""


class QbitIndexError(SimulatorError, IndexError):
    """A Q-bit index or bipartition cut lies outside the register."""


class NormalizationError(SimulatorError, ValueError):
    """A state vector is not normalized."""


class InvalidStateError(SimulatorError, ValueError):
    """A density matrix, observable or environment breaks its invariants."""


class GateError(SimulatorError, ValueError):
    """A gate is malformed or does not act unitarily."""


class ParameterError(SimulatorError, ValueError):
    """A scalar parameter is out of its allowed range."""


class CircuitParseError(SimulatorError):
    """A circuit file could not be parsed."""

    def __init__(self, message: str, line: int):
        """Initialize with the offending line.

        Args:
            message: What went wrong.
            line: 1-based line number in the circuit text.
        """
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}")
