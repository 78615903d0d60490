"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigurationError -> 2 (usage/config),
everything else derived from DetuneError -> 1 (runtime/data failure).
"""


class DetuneError(Exception):
    """Base class for all package errors."""


class ConfigurationError(DetuneError):
    """Invalid configuration: bad bounds, unknown names, degenerate splits."""


class DataError(DetuneError):
    """Malformed or inconsistent input data."""


class SchemaError(DataError):
    """Input file does not match the documented column schema."""


class LeakageError(DetuneError):
    """Attempt to fit statistics on non-training data."""


class EvaluationError(DetuneError):
    """Metric cannot be computed on the given inputs."""
