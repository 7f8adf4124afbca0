"""
Unit tables and parsing of unit-suffixed quantities.

Frequencies are read as ordinary frequencies (the "2 pi x" values used in
parameter tables) and converted to angular frequencies once, here.
"""

import math
import re
from typing import Dict, Optional, Tuple

twopi = 2 * math.pi

# dimension -> unit name -> SI multiplier
LENGTH_UNITS: Dict[str, float] = {
    'm': 1.0,
    'mm': 1e-3,
    'um': 1e-6,
    'µm': 1e-6,
    'nm': 1e-9,
}

MASS_UNITS: Dict[str, float] = {
    'kg': 1.0,
    'g': 1e-3,
    'mg': 1e-6,
    'ug': 1e-9,
    'µg': 1e-9,
    'ng': 1e-12,
    'pg': 1e-15,
}

# ordinary frequency -> angular frequency
FREQUENCY_UNITS: Dict[str, float] = {
    'Hz': twopi,
    'kHz': twopi * 1e3,
    'MHz': twopi * 1e6,
    'GHz': twopi * 1e9,
    'THz': twopi * 1e12,
    'rad/s': 1.0,
}

POWER_UNITS: Dict[str, float] = {
    'W': 1.0,
    'mW': 1e-3,
    'uW': 1e-6,
    'µW': 1e-6,
    'nW': 1e-9,
}

ANGLE_UNITS: Dict[str, float] = {
    'rad': 1.0,
    'deg': twopi / 360,
    'pi': math.pi,
}

UNITS_BY_DIMENSION: Dict[str, Dict[str, float]] = {
    'length': LENGTH_UNITS,
    'mass': MASS_UNITS,
    'frequency': FREQUENCY_UNITS,
    'power': POWER_UNITS,
    'angle': ANGLE_UNITS,
}

_NUMBER = r'[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?'
_QUANTITY_RE = re.compile(rf'^\s*(?P<number>{_NUMBER})?\s*\*?\s*(?P<unit>[^\s\d*][^\s]*)?\s*$')
_PI_FRACTION_RE = re.compile(rf'^\s*(?P<number>{_NUMBER})?\s*\*?\s*pi\s*(?:/\s*(?P<den>{_NUMBER}))?\s*$')


class UnitError(ValueError):
    """A quantity string could not be parsed."""


def split_quantity(text: str) -> Tuple[float, Optional[str]]:
    """Split ``'51.8 MHz'`` into ``(51.8, 'MHz')``; a bare unit counts as 1."""
    match = _QUANTITY_RE.match(text)
    if match is None or (match.group('number') is None and match.group('unit') is None):
        raise UnitError(f"cannot parse quantity '{text}'")
    number = float(match.group('number')) if match.group('number') is not None else 1.0
    return number, match.group('unit')


def unit_value(unit: str, dimension: str) -> float:
    """Return the SI multiplier of ``unit``; compound units ``a/b`` are divided out."""
    if dimension == 'pull':
        if '/' not in unit:
            raise UnitError(f"pull parameter needs a '<frequency>/<length>' unit, got '{unit}'")
        numerator, denominator = unit.split('/', 1)
        return unit_value(numerator, 'frequency') / unit_value(denominator, 'length')

    table = UNITS_BY_DIMENSION.get(dimension)
    if table is None:
        raise UnitError(f"unknown dimension '{dimension}'")
    if unit not in table:
        raise UnitError(f"unit '{unit}' is not a {dimension} unit (expected one of {', '.join(table)})")
    return table[unit]


def parse_angle(text: str) -> float:
    """Parse ``pi/3``, ``0.5 pi``, ``60 deg`` or ``1.047 rad`` into radians."""
    match = _PI_FRACTION_RE.match(text)
    if match is not None:
        number = float(match.group('number')) if match.group('number') else 1.0
        denominator = float(match.group('den')) if match.group('den') else 1.0
        if denominator == 0:
            raise UnitError(f"division by zero in angle '{text}'")
        return number * math.pi / denominator
    number, unit = split_quantity(text)
    return number * unit_value(unit or 'rad', 'angle')


def parse_quantity(text: str, dimension: str, references: Optional[Dict[str, float]] = None) -> float:
    """
    Parse a unit-suffixed quantity into SI units (angular frequencies in rad/s).

    Args:
        text: Quantity text such as ``'775 nm'``, ``'12 GHz/nm'`` or ``'1.1 omega_m'``
        dimension: One of ``length``, ``mass``, ``frequency``, ``power``, ``angle``, ``pull``
        references: Already parsed values that may be used as units (e.g. ``omega_m``)

    Returns:
        The value in SI units
    """
    if dimension == 'angle':
        return parse_angle(text)

    number, unit = split_quantity(text)
    if unit is None:
        raise UnitError(f"missing unit in '{text}' ({dimension})")
    if references and unit in references:
        return number * references[unit]
    return number * unit_value(unit, dimension)


def format_quantity(value: float, dimension: str) -> str:
    """Format an SI value back into canonical config text (17 significant digits)."""
    canonical = {
        'length': 'm',
        'mass': 'kg',
        'frequency': 'Hz',
        'power': 'W',
        'angle': 'rad',
        'pull': 'Hz/m',
    }[dimension]
    if dimension == 'pull':
        scale = unit_value('Hz/m', 'pull')
    else:
        scale = unit_value(canonical, dimension)
    return f"{value / scale:.16e} {canonical}"
