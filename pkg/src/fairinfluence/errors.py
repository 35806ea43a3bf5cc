"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Raised for malformed configs, schemas, or input files."""


class UndefinedMetricError(ValueError):
    """Raised when a group-fairness metric has an empty stratum.

    Callers that emit reports should catch this and record an explicit
    null; the metric value must never silently default to 0.
    """


class NotPositiveSemiDefiniteError(ValueError):
    """Raised when a requested correlation matrix has no real square root."""


class FlatObjectiveError(RuntimeError):
    """Raised when an objective is constant over the search grid."""


class BackendError(RuntimeError):
    """Raised when the requested compute backend is unavailable."""
