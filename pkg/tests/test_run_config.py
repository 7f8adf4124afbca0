"""
Tests for unit parsing and the run configuration format.
"""

import math

import pytest

from src.utils.errors import ConfigError, ParameterError
from src.utils.run_config import RunConfig, load_run_config, parse_power_list, parse_run_config
from src.utils.units import UnitError, format_quantity, parse_angle, parse_quantity

TWOPI = 2 * math.pi


def test_frequencies_become_angular():
    assert parse_quantity("51.8 MHz", 'frequency') == pytest.approx(TWOPI * 51.8e6, rel=1e-15)
    assert parse_quantity("4.1 kHz", 'frequency') == pytest.approx(TWOPI * 4.1e3, rel=1e-15)
    assert parse_quantity("2 rad/s", 'frequency') == 2.0


def test_reference_units():
    omega_m = TWOPI * 51.8e6
    refs = {'omega_m': omega_m}
    assert parse_quantity("1.1 omega_m", 'frequency', refs) == pytest.approx(1.1 * omega_m)
    assert parse_quantity("omega_m", 'frequency', refs) == omega_m


def test_pull_parameter_units():
    value = parse_quantity("12 GHz/nm", 'pull')
    assert value == pytest.approx(TWOPI * 12e9 / 1e-9, rel=1e-15)


@pytest.mark.parametrize("text, expected", [
    ("pi/3", math.pi / 3),
    ("0.5 pi", math.pi / 2),
    ("pi", math.pi),
    ("60 deg", math.pi / 3),
    ("1.5 rad", 1.5),
    ("0.25", 0.25),
])
def test_angles(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text, dimension", [
    ("775", 'length'),
    ("775 furlongs", 'length'),
    ("12 GHz", 'pull'),
    ("", 'mass'),
])
def test_bad_quantities(text, dimension):
    with pytest.raises(UnitError):
        parse_quantity(text, dimension)


def test_format_quantity_reparses():
    value = TWOPI * 51.8e6
    assert parse_quantity(format_quantity(value, 'frequency'), 'frequency') == pytest.approx(value, rel=1e-15)


def test_power_list():
    assert parse_power_list("0 mW, 2 mW, 15mW") == pytest.approx([0.0, 2e-3, 15e-3])


def test_bundled_config_parses(paper_config_text):
    config = parse_run_config(paper_config_text)
    values = config.parameter_values()
    omega_m = TWOPI * 51.8e6
    assert values['omega_1'] == pytest.approx(1.1 * omega_m)
    assert values['omega_2'] == pytest.approx(0.9 * omega_m)
    assert values['effective_detuning'] == pytest.approx(omega_m)
    assert values['theta'] == pytest.approx(math.pi / 3)
    assert config.power_values() == pytest.approx([0.0, 2e-3, 15e-3])
    assert config.grid_points == 4001


def test_equal_frequencies_flag():
    config = parse_run_config("equal_frequencies = true\n")
    values = config.parameter_values()
    assert values['omega_1'] == values['omega_2'] == values['omega_m']


def test_sweep():
    config = parse_run_config(
        "power_start = 1 mW\npower_stop = 100 mW\npower_count = 3\npower_scale = log\n"
    )
    assert config.power_values() == pytest.approx([1e-3, 1e-2, 1e-1])


def test_error_carries_line_and_field():
    text = "omega_m = 51.8 MHz\n\nkappa = 15 parsecs\n"
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    assert info.value.line == 3
    assert info.value.field == 'kappa'
    assert "line 3" in str(info.value)


@pytest.mark.parametrize("text, field", [
    ("kappa = 1 MHz\nkappa = 2 MHz\n", 'kappa'),
    ("colour = blue\n", 'colour'),
    ("power = -2 mW\n", 'powers'),
    ("grid_start = 1.5\ngrid_stop = 0.5\n", None),
    ("power_start = 1 mW\n", 'power_count'),
])
def test_rejected_configs(text, field):
    with pytest.raises(ConfigError) as info:
        parse_run_config(text)
    if field is not None:
        assert info.value.field == field


def test_missing_equals_sign():
    with pytest.raises(ConfigError) as info:
        parse_run_config("# comment\nkappa 15 MHz\n")
    assert info.value.line == 2


def test_snapshot_round_trip(paper_config_text):
    config = parse_run_config(paper_config_text)
    again = parse_run_config(config.snapshot())
    assert again.model_dump() == config.model_dump()

    swept = parse_run_config("power_start = 0 W\npower_stop = 15 mW\npower_count = 4\n")
    assert parse_run_config(swept.snapshot()).model_dump() == swept.model_dump()


def test_overrides():
    config = parse_run_config("power_start = 0 W\npower_stop = 15 mW\npower_count = 4\n")
    updated = config.with_overrides(powers=[2e-3], output_dir="elsewhere")
    assert updated.power_values() == [2e-3]
    assert updated.output_dir == "elsewhere"
    with pytest.raises(ConfigError):
        config.with_overrides(formats=[])


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "absent.cfg")


def test_parameter_errors_are_config_errors():
    assert issubclass(ParameterError, ConfigError)
    assert ParameterError('kappa', 'bad').exit_code == 2
    assert RunConfig().formats == ['csv']
