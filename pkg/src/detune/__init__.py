"""detune: metaheuristic hyperparameter tuning for a from-scratch GRU
short-term load forecaster.

The package splits into the optimizer core (`metaheuristics`), the forecaster
(`grunet`), the data pipeline (`data`), evaluation (`metrics`), and the CLI.
"""

from . import data, grunet, metaheuristics, metrics
from .errors import (
    ConfigurationError,
    DataError,
    DetuneError,
    EvaluationError,
    LeakageError,
    SchemaError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DataError",
    "DetuneError",
    "EvaluationError",
    "LeakageError",
    "SchemaError",
    "data",
    "grunet",
    "metaheuristics",
    "metrics",
]
