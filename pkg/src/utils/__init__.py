"""
Package initialization for the ring-cavity utils module.
"""

from .config import settings, HBAR, SPEED_OF_LIGHT, EXIT_CODES, ANALYTIC_FORMULAS, REGIME_LABELS
from .errors import (
    RingCavityError,
    ConfigError,
    ParameterError,
    NumericalError,
    SingularityError,
    ConvergenceError,
    ResolutionError,
    RefinementBudgetError,
)
from .logging_config import get_logger, setup_logging, SimulationLogger
from .data_validation import ParameterValidator, validate_data_file, verify_manifest, file_digest
from .run_config import RunConfig, PowerSweep, parse_run_config, load_run_config

__all__ = [
    'settings',
    'HBAR',
    'SPEED_OF_LIGHT',
    'EXIT_CODES',
    'ANALYTIC_FORMULAS',
    'REGIME_LABELS',
    'RingCavityError',
    'ConfigError',
    'ParameterError',
    'NumericalError',
    'SingularityError',
    'ConvergenceError',
    'ResolutionError',
    'RefinementBudgetError',
    'get_logger',
    'setup_logging',
    'SimulationLogger',
    'ParameterValidator',
    'validate_data_file',
    'verify_manifest',
    'file_digest',
    'RunConfig',
    'PowerSweep',
    'parse_run_config',
    'load_run_config',
]
