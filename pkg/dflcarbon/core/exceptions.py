"""
Exception hierarchy for dflcarbon.

Every error raised by the library derives from DflCarbonError and carries an
optional FieldLocation plus a machine-readable code (see docs/ERROR_CODES.md).
"""

from typing import Optional

from dflcarbon.core.field_location import FieldLocation


class DflCarbonError(Exception):
    """Base exception for all dflcarbon errors."""

    def __init__(
        self,
        message: str,
        location: Optional[FieldLocation] = None,
        error_code: Optional[str] = None
    ):
        """Initialize a dflcarbon error.

        Args:
            message: Human-readable error message
            location: File and field path (or CSV row) the error refers to
            error_code: Machine-readable error code (e.g., "V003")
        """
        super().__init__(message)
        self.message = message
        self.location = location
        self.error_code = error_code

    def __str__(self) -> str:
        """Format error with location if available."""
        if self.location:
            return f"{self.location}: {self.message}"
        return self.message


class ConfigError(DflCarbonError):
    """Base class for scenario and profile configuration errors."""
    pass


class ParseError(ConfigError):
    """Configuration file is not well-formed JSON or CSV."""
    pass


class SchemaError(ConfigError):
    """A required field is missing or has the wrong type."""
    pass


class ValidationError(ConfigError):
    """A value is well-typed but violates an invariant."""
    pass


class UnknownMedium(ConfigError):
    """Communication medium name is not a built-in kind."""
    pass


class DuplicateNode(ConfigError):
    """The same node id appears twice."""
    pass


class MissingColumn(ConfigError):
    """Profile registry CSV lacks a required column."""
    pass


class TopologyError(DflCarbonError):
    """Base class for topology errors."""
    pass


class InvalidSpec(TopologyError):
    """Topology cannot be built from the given spec."""
    pass


class LearningError(DflCarbonError):
    """Base class for dataset, model and training errors."""
    pass


class InvalidArgs(LearningError):
    """Arguments to a learning operation are out of range."""
    pass


class NumericError(LearningError):
    """Training produced a non-finite loss."""
    pass


class CodecError(LearningError):
    """Base class for model wire-format errors."""
    pass


class BadMagic(CodecError):
    """Payload does not start with the model magic bytes."""
    pass


class VersionMismatch(CodecError):
    """Payload was written with an unsupported format version."""
    pass


class LengthMismatch(CodecError):
    """Payload length disagrees with its declared layer shapes."""
    pass


class AggregationError(DflCarbonError):
    """Base class for aggregation errors."""
    pass


class ShapeMismatch(AggregationError):
    """Models being combined have different layer shapes."""
    pass


class TooFewUpdates(AggregationError):
    """Krum needs at least 2f + 3 candidates."""
    pass


class EmptyInput(AggregationError):
    """An operation that needs at least one value received none."""
    pass


class SelectionError(DflCarbonError):
    """Base class for node-selection errors."""
    pass


class MissingReport(SelectionError):
    """A node has no carbon-intensity report."""
    pass


class SimulationError(DflCarbonError):
    """An internal invariant of the simulation was violated."""
    pass


class LedgerError(DflCarbonError):
    """Base class for ledger persistence errors."""
    pass


class LedgerIOError(LedgerError):
    """Ledger could not be read or written."""
    pass
