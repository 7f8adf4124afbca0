"""
Run configuration: the flat ``key = value`` text format and its validated model.

Example::

    omega_m = 51.8 MHz
    omega_1 = 1.1 omega_m
    theta   = pi/3
    power   = 0 mW, 2 mW, 15 mW   # comma separated list
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, field_validator, model_validator

from .config import settings
from .errors import ConfigError
from .units import UnitError, parse_quantity

# parameter key -> dimension, in parse order (references must come first)
PARAMETER_FIELDS: Dict[str, str] = {
    'omega_m': 'frequency',
    'wavelength': 'length',
    'pull_parameter': 'pull',
    'mass_1': 'mass',
    'mass_2': 'mass',
    'omega_1': 'frequency',
    'omega_2': 'frequency',
    'gamma_1': 'frequency',
    'gamma_2': 'frequency',
    'kappa': 'frequency',
    'theta': 'angle',
    'effective_detuning': 'frequency',
}

_BOOLEAN_TEXT = {'true': True, 'yes': True, 'on': True, '1': True,
                 'false': False, 'no': False, 'off': False, '0': False}


class PowerSweep(BaseModel):
    """Pump-power sweep specification."""

    model_config = ConfigDict(frozen=True)

    start: float = Field(ge=0.0)
    stop: float = Field(ge=0.0)
    count: int = Field(ge=1)
    scale: Literal['linear', 'log'] = 'linear'

    @model_validator(mode='after')
    def _check_bounds(self):
        if self.stop < self.start:
            raise ValueError("power_stop must not be below power_start")
        if self.scale == 'log' and self.start <= 0.0:
            raise ValueError("a log power sweep needs power_start > 0")
        return self

    def values(self) -> List[float]:
        if self.count == 1:
            return [self.start]
        if self.scale == 'log':
            return np.geomspace(self.start, self.stop, self.count).tolist()
        return np.linspace(self.start, self.stop, self.count).tolist()


class RunConfig(BaseModel):
    """Validated run configuration for every subcommand."""

    model_config = ConfigDict(frozen=True)

    # SystemParams inputs, kept as unit-suffixed text
    omega_m: str = "51.8 MHz"
    wavelength: str = "775 nm"
    pull_parameter: str = "12 GHz/nm"
    mass_1: str = "20 ng"
    mass_2: str = "20 ng"
    omega_1: str = "1.1 omega_m"
    omega_2: str = "0.9 omega_m"
    gamma_1: str = "4.1 kHz"
    gamma_2: str = "4.1 kHz"
    kappa: str = "15 MHz"
    theta: str = "pi/3"
    effective_detuning: str = "omega_m"
    equal_frequencies: bool = False

    # Drive
    powers: List[float] = Field(default_factory=lambda: [0.0, 2e-3, 15e-3])
    sweep: Optional[PowerSweep] = None

    # Probe-detuning grid in units of omega_m
    grid_start: float = Field(default_factory=lambda: settings.DEFAULT_GRID_START)
    grid_stop: float = Field(default_factory=lambda: settings.DEFAULT_GRID_STOP)
    grid_points: int = Field(default_factory=lambda: settings.DEFAULT_GRID_POINTS, ge=1)
    refine: bool = False

    # Feature extraction
    prominence_floor: float = Field(default_factory=lambda: settings.PROMINENCE_FLOOR, gt=0.0)
    comparison_tolerance: float = Field(default_factory=lambda: settings.COMPARISON_TOLERANCE, gt=0.0)
    refine_tolerance: float = Field(default_factory=lambda: settings.REFINE_TOLERANCE, gt=0.0)
    refine_budget: int = Field(default_factory=lambda: settings.REFINE_BUDGET, ge=2)

    # Output
    output_dir: str = "output"
    formats: List[Literal['csv', 'json']] = Field(default_factory=lambda: ['csv'])

    _lines: Dict[str, int] = PrivateAttr(default_factory=dict)

    @field_validator('powers')
    @classmethod
    def _check_powers(cls, value: List[float]) -> List[float]:
        for power in value:
            if power < 0:
                raise ValueError(f"negative pump power {power} W")
        return value

    @field_validator('formats')
    @classmethod
    def _check_formats(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one output format is required")
        return list(dict.fromkeys(value))

    @model_validator(mode='after')
    def _check_grid(self):
        if not self.grid_stop > self.grid_start:
            raise ValueError("grid_stop must be greater than grid_start")
        return self

    def power_values(self) -> List[float]:
        """Pump powers in W: the sweep when given, otherwise the explicit list."""
        if self.sweep is not None:
            return self.sweep.values()
        return list(self.powers)

    def line_of(self, key: str) -> Optional[int]:
        return self._lines.get(key)

    def parameter_values(self) -> Dict[str, float]:
        """
        Parse the SystemParams inputs into SI values.

        Raises:
            ConfigError: naming the field (and line, when read from a file)
        """
        references: Dict[str, float] = {}
        values: Dict[str, float] = {}
        for key, dimension in PARAMETER_FIELDS.items():
            try:
                values[key] = parse_quantity(getattr(self, key), dimension, references)
            except UnitError as e:
                raise ConfigError(str(e), line=self.line_of(key), field=key) from e
            if dimension == 'frequency':
                references[key] = values[key]
        if self.equal_frequencies:
            values['omega_1'] = values['omega_m']
            values['omega_2'] = values['omega_m']
        return values

    def with_overrides(self, **changes) -> "RunConfig":
        """Return a validated copy with ``changes`` applied (CLI overrides)."""
        data = self.model_dump()
        data.update(changes)
        if 'powers' in changes:
            data['sweep'] = None
        try:
            updated = RunConfig(**data)
        except ValidationError as e:
            raise _config_error_from_validation(e, self._lines) from e
        updated._lines.update(self._lines)
        return updated

    def snapshot(self) -> str:
        """Canonical config text; parsing it yields an equal RunConfig."""
        lines = [f"{key} = {getattr(self, key)}" for key in PARAMETER_FIELDS]
        lines.append(f"equal_frequencies = {str(self.equal_frequencies).lower()}")
        if self.sweep is not None:
            lines.append(f"power_start = {self.sweep.start!r} W")
            lines.append(f"power_stop = {self.sweep.stop!r} W")
            lines.append(f"power_count = {self.sweep.count}")
            lines.append(f"power_scale = {self.sweep.scale}")
        else:
            lines.append("power = " + ", ".join(f"{p!r} W" for p in self.powers))
        lines.extend([
            f"grid_start = {self.grid_start!r}",
            f"grid_stop = {self.grid_stop!r}",
            f"grid_points = {self.grid_points}",
            f"refine = {str(self.refine).lower()}",
            f"prominence_floor = {self.prominence_floor!r}",
            f"comparison_tolerance = {self.comparison_tolerance!r}",
            f"refine_tolerance = {self.refine_tolerance!r}",
            f"refine_budget = {self.refine_budget}",
            f"output_dir = {self.output_dir}",
            "formats = " + ", ".join(self.formats),
        ])
        return "\n".join(lines) + "\n"


_SCALAR_KEYS = {
    'grid_start': float,
    'grid_stop': float,
    'grid_points': int,
    'prominence_floor': float,
    'comparison_tolerance': float,
    'refine_tolerance': float,
    'refine_budget': int,
}
_SWEEP_KEYS = {'power_start', 'power_stop', 'power_count', 'power_scale'}
_BOOLEAN_KEYS = {'equal_frequencies', 'refine'}


def _config_error_from_validation(error: ValidationError, lines: Dict[str, int]) -> ConfigError:
    first = error.errors()[0]
    loc = first.get('loc') or ('',)
    field = str(loc[0]) if loc and loc[0] != '' else None
    if field == 'sweep':
        field = 'power_' + str(loc[1]) if len(loc) > 1 else 'power_start'
    return ConfigError(first.get('msg', str(error)), line=lines.get(field) if field else None, field=field)


def parse_power_list(text: str) -> List[float]:
    """Parse ``'0 mW, 2 mW, 15 mW'`` into watts."""
    items = [item.strip() for item in text.split(',') if item.strip()]
    return [parse_quantity(item, 'power') for item in items]


def parse_run_config(text: str) -> RunConfig:
    """
    Parse config text into a validated RunConfig.

    Args:
        text: Contents of a ``key = value`` config file

    Returns:
        The validated configuration

    Raises:
        ConfigError: with line and field diagnostics
    """
    data: Dict[str, Union[str, float, int, bool, list]] = {}
    sweep: Dict[str, Union[str, float, int]] = {}
    lines: Dict[str, int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("expected 'key = value'", line=number)
        key, value = (part.strip() for part in line.split('=', 1))
        key = key.lower()
        if key in lines and key != 'power':
            raise ConfigError("duplicate key", line=number, field=key)
        lines[key] = number

        try:
            if key in PARAMETER_FIELDS:
                data[key] = value
            elif key == 'power':
                data.setdefault('powers', [])
                data['powers'].extend(parse_power_list(value))
            elif key in _SWEEP_KEYS:
                name = key.split('_', 1)[1]
                if name in ('start', 'stop'):
                    sweep[name] = parse_quantity(value, 'power')
                elif name == 'count':
                    sweep[name] = int(value)
                else:
                    sweep[name] = value.lower()
            elif key in _BOOLEAN_KEYS:
                if value.lower() not in _BOOLEAN_TEXT:
                    raise ValueError(f"expected a boolean, got '{value}'")
                data[key] = _BOOLEAN_TEXT[value.lower()]
            elif key in _SCALAR_KEYS:
                data[key] = _SCALAR_KEYS[key](value)
            elif key == 'output_dir':
                data[key] = value
            elif key == 'formats':
                data[key] = [item.strip().lower() for item in value.split(',') if item.strip()]
            else:
                raise ConfigError("unknown key", line=number, field=key)
        except (UnitError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e), line=number, field=key) from e

    if sweep:
        missing = {'start', 'stop', 'count'} - set(sweep)
        if missing:
            raise ConfigError(f"incomplete power sweep, missing {', '.join(sorted(missing))}",
                              field='power_' + sorted(missing)[0])
        data['sweep'] = sweep
        data.setdefault('powers', [])

    try:
        config = RunConfig(**data)
    except ValidationError as e:
        raise _config_error_from_validation(e, lines) from e
    config._lines.update(lines)

    # Parameter text is checked eagerly so errors point at the offending line
    config.parameter_values()
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read and parse a config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return parse_run_config(text)
