"""Exception types shared across the package."""

from __future__ import annotations


class ConfmetricsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrixError(ConfmetricsError):
    """A confusion matrix (or weight matrix / label dataset) violates its invariants."""


class FormatError(ConfmetricsError):
    """A text input could not be parsed."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


class MeasureError(ConfmetricsError):
    """A measure cannot be computed on this input (distinct from an undefined value)."""


class GtiError(MeasureError):
    """The ground-truth-index fit cannot be attempted on this input."""


class ConfigError(ConfmetricsError):
    """Contradictory or invalid run configuration."""
