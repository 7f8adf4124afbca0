"""
Physical parameters of the ring cavity and its two movable mirrors, and the
pump-only steady state.

All values are SI with angular frequencies in rad/s.
"""

import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, List, Mapping, Tuple

import numpy as np

from ..utils.config import HBAR, REGIME_LABELS, SPEED_OF_LIGHT
from ..utils.data_validation import ParameterValidator, validate_or_raise
from ..utils.errors import ParameterError
from ..utils.logging_config import get_logger, log_function_call

logger = get_logger(__name__)

_validator = ParameterValidator()


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the ring cavity and both mirrors."""
    wavelength: float
    pull_parameter: float
    mass_1: float
    mass_2: float
    omega_1: float
    omega_2: float
    gamma_1: float
    gamma_2: float
    kappa: float
    theta: float
    effective_detuning: float

    def __post_init__(self):
        validate_or_raise(*_validator.validate_parameters(asdict(self)))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "SystemParams":
        """Build from a mapping, ignoring keys that are not fields (e.g. ``omega_m``)."""
        names = cls.__dataclass_fields__.keys()
        missing = [name for name in names if name not in values]
        if missing:
            raise ParameterError(missing[0], "missing required field")
        return cls(**{name: values[name] for name in names})

    @property
    def omega_c(self) -> float:
        """Pump angular frequency 2 pi c / lambda."""
        return 2 * math.pi * SPEED_OF_LIGHT / self.wavelength

    @property
    def omega_m(self) -> float:
        """Reference mechanical frequency, the midpoint of the two resonances."""
        return 0.5 * (self.omega_1 + self.omega_2)

    @property
    def gamma(self) -> float:
        """Mean mechanical damping rate."""
        return 0.5 * (self.gamma_1 + self.gamma_2)

    @property
    def geometry_factor(self) -> float:
        return math.cos(self.theta / 2)

    @property
    def equal_frequencies(self) -> bool:
        return self.omega_1 == self.omega_2

    def replace(self, **changes) -> "SystemParams":
        """Return a validated copy with ``changes`` applied."""
        return replace(self, **changes)

    def with_equal_frequencies(self) -> "SystemParams":
        """Both mirrors at omega_m, as in the equal-frequency comparison."""
        omega_m = self.omega_m
        return replace(self, omega_1=omega_m, omega_2=omega_m)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class DriveState:
    """Pump-only steady state at one pump power."""
    power: float
    epsilon: float
    c0: complex
    G1: float
    G2: float
    Q10: float
    Q20: float
    effective_detuning: float

    @property
    def c0_abs(self) -> float:
        return abs(self.c0)

    @property
    def phase_factor(self) -> complex:
        """c0^2/|c0|^2; zero when the pump is off."""
        if self.c0 == 0:
            return 0j
        return self.c0 ** 2 / abs(self.c0) ** 2

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['c0'] = [self.c0.real, self.c0.imag]
        return data


@dataclass(frozen=True)
class RegimeReport:
    """Derived diagnostics of a parameter set."""
    omega_m: float
    g1: float
    g2: float
    quality_factor_1: float
    quality_factor_2: float
    sideband_ratio: float
    resolved_sideband: bool
    label: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def derive_couplings(params: SystemParams) -> Tuple[float, float]:
    """
    Single-photon optomechanical couplings g_j = pull * sqrt(hbar/(m_j omega_j)).

    Returns:
        (g1, g2) in rad/s
    """
    g1 = params.pull_parameter * math.sqrt(HBAR / (params.mass_1 * params.omega_1))
    g2 = params.pull_parameter * math.sqrt(HBAR / (params.mass_2 * params.omega_2))
    return g1, g2


def drive_amplitude(params: SystemParams, power: float) -> float:
    """Drive amplitude epsilon = sqrt(2 kappa P / (hbar omega_c)), taken real and non-negative."""
    validate_or_raise(*_validator.validate_power(power))
    return math.sqrt(2 * params.kappa * power / (HBAR * params.omega_c))


@log_function_call
def pump_steady_state(params: SystemParams, power: float) -> DriveState:
    """
    Intracavity pump amplitude, effective couplings and static mirror displacements.

    Args:
        params: System parameters; ``effective_detuning`` is used as Delta'
        power: Pump power in W

    Returns:
        DriveState at this power
    """
    epsilon = drive_amplitude(params, power)
    c0 = epsilon / complex(params.kappa, params.effective_detuning)
    c0_abs = abs(c0)

    g1, g2 = derive_couplings(params)
    G1 = g1 * c0_abs * params.geometry_factor
    G2 = g2 * c0_abs * params.geometry_factor

    # radiation pressure pushes the two mirrors in opposite directions
    Q10 = -(G1 / params.omega_1) * c0_abs
    Q20 = (G2 / params.omega_2) * c0_abs

    return DriveState(
        power=float(power),
        epsilon=epsilon,
        c0=c0,
        G1=G1,
        G2=G2,
        Q10=Q10,
        Q20=Q20,
        effective_detuning=params.effective_detuning,
    )


def radiation_pressure_shift(params: SystemParams) -> float:
    """Coefficient S with Delta' = Delta_0 - S |c0|^2, in rad/s."""
    g1, g2 = derive_couplings(params)
    return (g1 ** 2 / params.omega_1 + g2 ** 2 / params.omega_2) * params.geometry_factor ** 2


def fixed_point_residual(params: SystemParams, bare_detuning: float, power: float, detuning: float) -> float:
    """Relative residual of Delta' = Delta_0 - S eps^2/(kappa^2 + Delta'^2)."""
    eps2 = drive_amplitude(params, power) ** 2
    shift = radiation_pressure_shift(params) * eps2 / (params.kappa ** 2 + detuning ** 2)
    scale = max(abs(detuning), abs(bare_detuning), abs(shift), params.kappa)
    return abs(detuning - bare_detuning + shift) / scale


@log_function_call
def self_consistent_detuning(
    params: SystemParams,
    bare_detuning: float,
    power: float,
) -> List[Tuple[float, DriveState]]:
    """
    All real effective detunings consistent with the static radiation-pressure shift.

    Clearing denominators in Delta' = Delta_0 - S eps^2/(kappa^2 + Delta'^2) gives the cubic
    Delta'^3 - Delta_0 Delta'^2 + kappa^2 Delta' - Delta_0 kappa^2 + S eps^2 = 0.

    Args:
        params: System parameters (``effective_detuning`` is ignored)
        bare_detuning: omega_0 - omega_c in rad/s
        power: Pump power in W

    Returns:
        (Delta', DriveState) pairs sorted by Delta'; more than one means bistability
    """
    eps2 = drive_amplitude(params, power) ** 2
    shift = radiation_pressure_shift(params) * eps2

    # nondimensionalize by kappa for conditioning
    scale = params.kappa
    d0 = bare_detuning / scale
    s = shift / scale ** 3
    cubic = np.array([1.0, -d0, 1.0, -d0 + s])

    candidates = []
    for root in np.roots(cubic):
        if abs(root.imag) > 1e-7 * max(1.0, abs(root)):
            continue
        x = root.real
        # Newton polish on the real axis
        for _ in range(20):
            value = ((x - d0) * x + 1.0) * x - d0 + s
            slope = (3 * x - 2 * d0) * x + 1.0
            if slope == 0:
                break
            step = value / slope
            x -= step
            if abs(step) <= 1e-15 * max(1.0, abs(x)):
                break
        candidates.append(x)

    solutions: List[float] = []
    for x in sorted(candidates):
        if not solutions or abs(x - solutions[-1]) > 1e-9 * max(1.0, abs(x)):
            solutions.append(x)

    if len(solutions) > 1:
        logger.warning(
            f"Self-consistent detuning is multivalued at P = {power:.3e} W: "
            f"{len(solutions)} branches, none selected"
        )

    results = []
    for x in solutions:
        detuning = x * scale
        results.append((detuning, pump_steady_state(params.replace(effective_detuning=detuning), power)))
    return results


def regime_report(params: SystemParams) -> RegimeReport:
    """Quality factors, sideband resolution and couplings of a parameter set."""
    g1, g2 = derive_couplings(params)
    resolved = params.kappa < min(params.omega_1, params.omega_2)
    return RegimeReport(
        omega_m=params.omega_m,
        g1=g1,
        g2=g2,
        quality_factor_1=params.omega_1 / params.gamma_1,
        quality_factor_2=params.omega_2 / params.gamma_2,
        sideband_ratio=params.kappa / params.omega_m,
        resolved_sideband=resolved,
        label=REGIME_LABELS['resolved_sideband' if resolved else 'unresolved_sideband'],
    )
