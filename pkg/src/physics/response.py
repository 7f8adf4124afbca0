"""
Linear response of the cavity to a weak probe: the anti-Stokes and Stokes
coefficients c+ and c-, the output fields and the probe quadrature.

Probe detunings are passed in rad/s; spectra also report delta/omega_m.
"""

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..utils.config import settings
from ..utils.errors import ParameterError, SingularityError
from ..utils.logging_config import get_logger, log_analysis_event, log_function_call
from .modes import ScaledSystem, scaled_quantities
from .params import DriveState, SystemParams

logger = get_logger(__name__)

OBSERVABLES = ('nu_p', 'stokes_intensity')


@dataclass(frozen=True)
class ResponsePoint:
    """Response at one probe detuning."""
    delta: float
    c_plus: complex
    c_minus: complex
    eps_out_plus: complex
    eps_out_minus: complex
    nu_p: float
    stokes_intensity: float


@dataclass(frozen=True, eq=False)
class ResponseSpectrum:
    """Response over a strictly increasing grid of probe detunings."""
    grid: np.ndarray
    c_plus: np.ndarray
    c_minus: np.ndarray
    drive: DriveState
    params: SystemParams

    def __len__(self) -> int:
        return len(self.grid)

    @property
    def delta_over_omega_m(self) -> np.ndarray:
        return self.grid / self.params.omega_m

    @property
    def eps_out_plus(self) -> np.ndarray:
        return 2 * self.params.kappa * self.c_plus

    @property
    def eps_out_minus(self) -> np.ndarray:
        return 2 * self.params.kappa * self.c_minus

    @property
    def nu_p(self) -> np.ndarray:
        return self.eps_out_plus.real

    @property
    def stokes_intensity(self) -> np.ndarray:
        return np.abs(self.eps_out_minus) ** 2

    @property
    def points(self) -> List[ResponsePoint]:
        return list(iter(self))

    def __iter__(self) -> Iterator[ResponsePoint]:
        eps_plus, eps_minus = self.eps_out_plus, self.eps_out_minus
        for i, delta in enumerate(self.grid):
            yield ResponsePoint(
                delta=float(delta),
                c_plus=complex(self.c_plus[i]),
                c_minus=complex(self.c_minus[i]),
                eps_out_plus=complex(eps_plus[i]),
                eps_out_minus=complex(eps_minus[i]),
                nu_p=float(eps_plus[i].real),
                stokes_intensity=float(abs(eps_minus[i]) ** 2),
            )

    def observable(self, name: str) -> np.ndarray:
        if name not in OBSERVABLES:
            raise ValueError(f"unknown observable '{name}' (expected one of {', '.join(OBSERVABLES)})")
        return getattr(self, name)

    def to_frame(self) -> pd.DataFrame:
        eps_plus = self.eps_out_plus
        return pd.DataFrame({
            'delta_over_omega_m': self.delta_over_omega_m,
            'nu_p': eps_plus.real,
            're_eps_out_plus': eps_plus.real,
            'im_eps_out_plus': eps_plus.imag,
            'stokes_intensity': self.stokes_intensity,
        })


@dataclass(frozen=True)
class StokesNull:
    """Real detuning where the Stokes bracket loses its real part (rad/s)."""
    delta: float
    omega_m: float

    @property
    def delta_over_omega_m(self) -> float:
        return self.delta / self.omega_m


def detuning_grid(
    params: SystemParams,
    start: Optional[float] = None,
    stop: Optional[float] = None,
    points: Optional[int] = None,
) -> np.ndarray:
    """Uniform grid in rad/s from bounds given in units of omega_m."""
    start = settings.DEFAULT_GRID_START if start is None else start
    stop = settings.DEFAULT_GRID_STOP if stop is None else stop
    points = settings.DEFAULT_GRID_POINTS if points is None else points
    return np.linspace(start, stop, points) * params.omega_m


def _factors(system: ScaledSystem, x: np.ndarray):
    m1 = system.omega_1 ** 2 - x ** 2 - 1j * system.gamma_1 * x
    m2 = system.omega_2 ** 2 - x ** 2 - 1j * system.gamma_2 * x
    bracket = system.G1 ** 2 * system.omega_1 * m2 + system.G2 ** 2 * system.omega_2 * m1
    lower = system.kappa - 1j * (system.detuning + x)
    upper = system.kappa + 1j * (system.detuning - x)
    return m1, m2, bracket, lower, upper


def evaluate_response(params: SystemParams, drive: DriveState, delta) -> Tuple[np.ndarray, np.ndarray]:
    """
    c+ and c- (in s) at probe detunings ``delta`` (rad/s).

    The denominator is kept in its factored form next to the factored numerators
    so the deep cancellations of the transparency dips survive.

    Raises:
        SingularityError: |d| below settings.SINGULARITY_FLOOR at some delta
    """
    system = scaled_quantities(params, drive)
    x = np.atleast_1d(np.asarray(delta, dtype=float)) / params.omega_m

    m1, m2, bracket, lower, upper = _factors(system, x)
    mechanical = m1 * m2
    d = upper * lower * mechanical - 2 * system.detuning * bracket

    magnitude = np.abs(d)
    singular = magnitude < settings.SINGULARITY_FLOOR
    if np.any(singular):
        i = int(np.flatnonzero(singular)[0])
        raise SingularityError(float(x[i]), float(magnitude[i]))

    c_plus = (lower * mechanical + 1j * bracket) / d

    if drive.c0 == 0:
        c_minus = np.zeros_like(c_plus)
    else:
        # real x: conj(m_j) = omega_j^2 - x^2 + i gamma_j x
        conj_bracket = system.G1 ** 2 * system.omega_1 * np.conj(m2) + system.G2 ** 2 * system.omega_2 * np.conj(m1)
        c_minus = 1j * drive.phase_factor * conj_bracket / np.conj(d)

    # back to SI: the nondimensional coefficients carry a factor omega_m
    return c_plus / params.omega_m, c_minus / params.omega_m


def c_plus(params: SystemParams, drive: DriveState, delta: float) -> complex:
    """Anti-Stokes coefficient c+ at one probe detuning (rad/s)."""
    return complex(evaluate_response(params, drive, delta)[0][0])


def c_minus(params: SystemParams, drive: DriveState, delta: float) -> complex:
    """Stokes coefficient c-; exactly 0 when the pump is off."""
    return complex(evaluate_response(params, drive, delta)[1][0])


@log_function_call
def scan_spectrum(params: SystemParams, drive: DriveState, grid) -> ResponseSpectrum:
    """
    Evaluate the response on a strictly increasing grid of detunings (rad/s).

    Raises:
        ParameterError: empty, unsorted or duplicated grid
        SingularityError: naming the offending detuning
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError('grid', "detuning grid must be a non-empty 1-D sequence")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError('grid', "detuning grid must be strictly increasing")

    plus, minus = evaluate_response(params, drive, grid)
    log_analysis_event('spectrum', 'evaluated', power=drive.power, points=int(grid.size))
    return ResponseSpectrum(grid=grid, c_plus=plus, c_minus=minus, drive=drive, params=params)


def observable_function(params: SystemParams, drive: DriveState, name: str) -> Callable[[float], float]:
    """Scalar observable as a function of delta/omega_m, for feature polishing."""
    if name not in OBSERVABLES:
        raise ValueError(f"unknown observable '{name}'")
    scale = 2 * params.kappa

    def evaluate(x: float) -> float:
        plus, minus = evaluate_response(params, drive, x * params.omega_m)
        if name == 'nu_p':
            return float((scale * plus[0]).real)
        return float(abs(scale * minus[0]) ** 2)

    return evaluate


def pump_off_response(params: SystemParams, delta):
    """Output field at the probe frequency without pump: 2k/(k + i(D' - delta))."""
    delta = np.asarray(delta, dtype=float)
    return 2 * params.kappa / (params.kappa + 1j * (params.effective_detuning - delta))


def stokes_null_detuning(params: SystemParams, drive: DriveState) -> Optional[StokesNull]:
    """
    Detuning where the two mirrors' Stokes contributions cancel in their real part,
    delta0^2 = (G1^2 w1 w2^2 + G2^2 w2 w1^2)/(G1^2 w1 + G2^2 w2).

    Returns:
        StokesNull, or None without coupling or when delta0^2 <= 0
    """
    w1, w2 = params.omega_1, params.omega_2
    a1, a2 = drive.G1 ** 2 * w1, drive.G2 ** 2 * w2
    total = a1 + a2
    if total == 0:
        return None
    squared = (a1 * w2 ** 2 + a2 * w1 ** 2) / total
    if squared <= 0:
        return None
    return StokesNull(delta=float(np.sqrt(squared)), omega_m=params.omega_m)
