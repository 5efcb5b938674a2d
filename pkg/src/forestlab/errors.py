"""Shared exception types."""


class ForestLabError(Exception):
    """Base class for all package errors."""


class GraphSpecError(ForestLabError):
    """Malformed graph construction input (self-loop, dangling vertex, ...)."""


class CapExceededError(ForestLabError):
    """An enumeration exceeded its configured cap."""


class SurgeryError(ForestLabError):
    """Surgery precondition violated. Carries a short machine-readable code."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class ConfigError(ForestLabError):
    """Invalid experiment or CLI configuration."""
