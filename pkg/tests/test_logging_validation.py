"""
Tests for validation helpers, the error hierarchy and logging utilities.
"""

import hashlib
import logging

import pytest

from src.utils.config import EXIT_CODES, settings
from src.utils.data_validation import (
    ParameterValidator,
    file_digest,
    validate_data_file,
    validate_or_raise,
)
from src.utils.errors import (
    ConfigError,
    ConvergenceError,
    NumericalError,
    ParameterError,
    RefinementBudgetError,
    ResolutionError,
    RingCavityError,
    SingularityError,
)
from src.utils.logging_config import ColoredFormatter, SimulationLogger, log_function_call
from src.utils.run_config import RunConfig


@pytest.fixture
def parameter_values():
    return RunConfig().parameter_values()


def test_valid_parameters(parameter_values):
    is_valid, errors = ParameterValidator().validate_parameters(parameter_values)
    assert is_valid
    assert errors == []


def test_every_problem_reported(parameter_values):
    values = dict(parameter_values, kappa=-1.0, gamma_1=float('nan'), theta=4.0)
    del values['mass_2']
    is_valid, errors = ParameterValidator().validate_parameters(values)
    assert not is_valid
    assert {field for field, _ in errors} == {'kappa', 'gamma_1', 'theta', 'mass_2'}

    with pytest.raises(ParameterError) as info:
        validate_or_raise(is_valid, errors)
    assert info.value.field == errors[0][0]


def test_booleans_are_not_numbers(parameter_values):
    is_valid, errors = ParameterValidator().validate_parameters(dict(parameter_values, kappa=True))
    assert not is_valid
    assert errors[0][0] == 'kappa'


def test_power_validation():
    validator = ParameterValidator()
    assert validator.validate_power(0.0) == (True, [])
    assert not validator.validate_power(-1e-3)[0]
    assert not validator.validate_power(float('inf'))[0]


def test_data_file_checks(tmp_path):
    good = tmp_path / "good.csv"
    good.write_text("delta_over_omega_m,nu_p\n0.5,0.1\n0.6,0.2\n")
    report = validate_data_file(good)
    assert report['status'] == 'pass'
    assert report['rows'] == 2

    bad = tmp_path / "bad.csv"
    bad.write_text("delta_over_omega_m,nu_p\n0.5,nan\n0.6,inf\n")
    report = validate_data_file(bad)
    assert report['status'] == 'fail'
    assert any('nu_p' in e for e in report['errors'])

    assert validate_data_file(tmp_path / "absent.csv")['status'] == 'fail'


def test_file_digest(tmp_path):
    path = tmp_path / "data.bin"
    path.write_bytes(b"ring cavity" * 10000)
    assert file_digest(path) == hashlib.sha256(b"ring cavity" * 10000).hexdigest()


def test_exit_codes():
    assert RingCavityError.exit_code == 1
    assert ConfigError("x").exit_code == EXIT_CODES['config'] == 2
    assert SingularityError(1.0, 0.0).exit_code == EXIT_CODES['numerical'] == 3
    assert ResolutionError("x").exit_code == EXIT_CODES['resolution'] == 4
    assert issubclass(ConvergenceError, NumericalError)
    assert issubclass(RefinementBudgetError, ResolutionError)
    assert isinstance(ParameterError('kappa', 'bad'), ValueError)


def test_error_messages():
    assert str(ConfigError("bad unit", line=4, field='kappa')) == "[line 4, field 'kappa'] bad unit"
    error = ConvergenceError("no convergence", [1 + 1j], [1e-3, 2e-2])
    assert "2.000e-02" in str(error)
    assert RefinementBudgetError(12, 10).points == 12


def test_settings_defaults():
    assert settings.DEFAULT_GRID_POINTS == 4001
    assert settings.ROOT_MAX_ITERATIONS == 500
    assert settings.COMPARISON_TOLERANCE == 0.15


def test_log_function_call_preserves_function(caplog):
    @log_function_call
    def double(x):
        return 2 * x

    assert double.__name__ == 'double'
    with caplog.at_level(logging.DEBUG, logger=__name__):
        assert double(3) == 6
    assert any("Completed double" in r.getMessage() for r in caplog.records)


def test_simulation_logger_reports_context(caplog):
    sim_logger = SimulationLogger('spectrum')
    with caplog.at_level(logging.INFO):
        sim_logger.start_run(3, "paper.cfg")
        sim_logger.log_error(SingularityError(0.75, 0.0), context="P = 0.002 W")
    messages = [r.getMessage() for r in caplog.records]
    assert any("3 pump power(s) from paper.cfg" in m for m in messages)
    assert any(m.startswith("Error in spectrum (P = 0.002 W)") for m in messages)


def test_colored_formatter_leaves_record_alone():
    record = logging.LogRecord('x', logging.WARNING, __file__, 1, "careful", None, None)
    text = ColoredFormatter('%(levelname)s %(message)s').format(record)
    assert "careful" in text
    assert record.levelname == 'WARNING'
