"""
Normal modes of the driven cavity: the response denominator d(delta), its six
complex roots, their continuation across pump-power sweeps, stability and the
dressed-mode approximations.

Everything here works in units of omega_m, so a root at 1.0 sits at the
mechanical midpoint frequency.
"""

from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import linear_sum_assignment
from tqdm import tqdm

from ..utils.config import REGIME_LABELS, settings
from ..utils.errors import ConvergenceError, NumericalError, ParameterError
from ..utils.logging_config import get_logger, log_analysis_event, log_function_call
from .params import DriveState, SystemParams, pump_steady_state

logger = get_logger(__name__)

DEGREE = 6


class ScaledSystem(NamedTuple):
    """Rates and couplings divided by omega_m."""
    kappa: float
    detuning: float
    omega_1: float
    omega_2: float
    gamma_1: float
    gamma_2: float
    G1: float
    G2: float

    @property
    def gamma(self) -> float:
        return 0.5 * (self.gamma_1 + self.gamma_2)


def scaled_quantities(params: SystemParams, drive: DriveState) -> ScaledSystem:
    """Nondimensionalize by omega_m; raw SI coefficients of d span ~1e46."""
    omega_m = params.omega_m
    return ScaledSystem(
        kappa=params.kappa / omega_m,
        detuning=drive.effective_detuning / omega_m,
        omega_1=params.omega_1 / omega_m,
        omega_2=params.omega_2 / omega_m,
        gamma_1=params.gamma_1 / omega_m,
        gamma_2=params.gamma_2 / omega_m,
        G1=drive.G1 / omega_m,
        G2=drive.G2 / omega_m,
    )


def mechanical_factor(omega: float, gamma: float) -> np.ndarray:
    """Ascending coefficients of omega^2 - x^2 - i gamma x."""
    return np.array([omega ** 2, -1j * gamma, -1.0], dtype=complex)


def coupling_bracket(system: ScaledSystem) -> np.ndarray:
    """Ascending coefficients of G1^2 omega_1 m_2(x) + G2^2 omega_2 m_1(x)."""
    m1 = mechanical_factor(system.omega_1, system.gamma_1)
    m2 = mechanical_factor(system.omega_2, system.gamma_2)
    return system.G1 ** 2 * system.omega_1 * m2 + system.G2 ** 2 * system.omega_2 * m1


def denominator_coefficients(system: ScaledSystem) -> np.ndarray:
    """
    Ascending coefficients of
    d(x) = [k + i(D - x)][k - i(D + x)] m_1(x) m_2(x) - 2 D B(x).

    No sign or range checks are applied, so unphysical inputs (e.g. negative
    kappa) produce their polynomial too.
    """
    k, D = system.kappa, system.detuning
    optical = P.polymul([k + 1j * D, -1j], [k - 1j * D, -1j])
    product = P.polymul(
        optical,
        P.polymul(mechanical_factor(system.omega_1, system.gamma_1),
                  mechanical_factor(system.omega_2, system.gamma_2)),
    )
    coefficients = P.polysub(product, 2 * D * coupling_bracket(system))
    coefficients = np.asarray(coefficients, dtype=complex)
    if len(coefficients) != DEGREE + 1:
        coefficients = np.pad(coefficients, (0, DEGREE + 1 - len(coefficients)))
    return coefficients


@dataclass(frozen=True, eq=False)
class DenominatorPoly:
    """d(x) with x = delta/omega_m, ascending complex coefficients."""
    coefficients: np.ndarray
    params: Optional[SystemParams] = None
    drive: Optional[DriveState] = None

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=complex)
        if coefficients.shape != (DEGREE + 1,):
            raise NumericalError(f"denominator must have {DEGREE + 1} coefficients, got {coefficients.shape}")
        if coefficients[-1] == 0:
            raise NumericalError("denominator leading coefficient vanished")
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def max_coefficient(self) -> float:
        return float(np.max(np.abs(self.coefficients)))

    def evaluate(self, x):
        """d(x) by Horner's scheme; x may be an array."""
        return P.polyval(x, self.coefficients)

    def evaluate_conjugate(self, x):
        """d*(x) from conjugated coefficients; equals conj(d(x)) for real x."""
        return P.polyval(x, np.conj(self.coefficients))

    def residuals(self, roots) -> np.ndarray:
        """|d(root)| relative to the largest coefficient."""
        return np.abs(self.evaluate(np.asarray(roots))) / self.max_coefficient


def build_denominator(params: SystemParams, drive: DriveState) -> DenominatorPoly:
    """
    Build d(delta) for one drive state.

    Raises:
        NumericalError: if the leading coefficient is not -1
    """
    coefficients = denominator_coefficients(scaled_quantities(params, drive))
    # (-i)(-i)(-1)(-1) from the four factors
    if abs(coefficients[-1] + 1.0) > 1e-12:
        raise NumericalError(f"unexpected leading coefficient {coefficients[-1]!r}, expected -1")
    return DenominatorPoly(coefficients, params=params, drive=drive)


def closed_form_pump_off_roots(params: SystemParams) -> np.ndarray:
    """
    Roots of d at zero coupling, in units of omega_m.

    Returns:
        [D - ik, -D - ik, +-sqrt(w1^2 - g1^2/4) - i g1/2, +-sqrt(w2^2 - g2^2/4) - i g2/2]
    """
    omega_m = params.omega_m
    k = params.kappa / omega_m
    D = params.effective_detuning / omega_m
    roots = [D - 1j * k, -D - 1j * k]
    for omega, gamma in ((params.omega_1, params.gamma_1), (params.omega_2, params.gamma_2)):
        w, g = omega / omega_m, gamma / omega_m
        shift = np.sqrt(complex(w ** 2 - g ** 2 / 4))
        roots.extend([shift - 0.5j * g, -shift - 0.5j * g])
    return np.array(roots, dtype=complex)


def sort_roots(roots) -> np.ndarray:
    """Sort by real part, then imaginary part."""
    roots = np.asarray(roots, dtype=complex)
    return roots[np.lexsort((roots.imag, roots.real))]


@dataclass(frozen=True, eq=False)
class RootSet:
    """The six roots of d at one pump power, sorted by real then imaginary part."""
    power: float
    roots: np.ndarray
    residuals: np.ndarray
    iterations: int = 0
    method: str = 'aberth'

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))


@dataclass(frozen=True, eq=False)
class RootTrajectory:
    """Root sets along a power sweep; ``matched[i, j]`` follows root j across powers."""
    powers: np.ndarray
    root_sets: List[RootSet]
    matched: np.ndarray
    drives: List[DriveState] = field(default_factory=list)

    def column(self, index: int) -> np.ndarray:
        return self.matched[:, index]


@dataclass(frozen=True)
class DressedModes:
    """Approximate dressed-mode positions in units of omega_m."""
    central: complex
    lower: complex
    upper: complex
    strong_coupling_ratio: float
    strong_coupling: bool
    regime: str

    @property
    def splitting(self) -> float:
        return self.upper.real - self.lower.real


@dataclass(frozen=True, eq=False)
class StabilityReport:
    stable: bool
    margins: np.ndarray


def _separate(guesses: np.ndarray) -> np.ndarray:
    """Deterministic tiny perturbation so coincident guesses become distinct."""
    n = len(guesses)
    offsets = np.exp(2j * np.pi * (np.arange(n) + 0.25) / n)
    return guesses + 1e-7 * (1 + np.abs(guesses)) * offsets


def _circle_guesses(monic: np.ndarray) -> np.ndarray:
    n = len(monic) - 1
    center = -monic[n - 1] / n
    radius = abs(monic[0]) ** (1.0 / n) or 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return center + radius * np.exp(1j * angles)


def find_roots(
    poly: DenominatorPoly,
    initial: Optional[Sequence[complex]] = None,
    power: Optional[float] = None,
    max_iterations: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> RootSet:
    """
    All six roots of d by Aberth-Ehrlich simultaneous iteration.

    Args:
        poly: Denominator polynomial
        initial: Starting approximations; defaults to the pump-off roots of
            ``poly.params`` or to a circle when the polynomial has no provenance
        power: Pump power recorded on the result (defaults to ``poly.drive.power``)
        max_iterations: Iteration cap (settings.ROOT_MAX_ITERATIONS)
        tolerance: Relative step tolerance (settings.ROOT_TOLERANCE)

    Returns:
        RootSet with residuals |d(root)|/max|coefficient|

    Raises:
        ConvergenceError: with the best iterate and its residuals
    """
    max_iterations = max_iterations or settings.ROOT_MAX_ITERATIONS
    tolerance = tolerance or settings.ROOT_TOLERANCE
    if power is None:
        power = poly.drive.power if poly.drive is not None else float('nan')

    monic = poly.coefficients / poly.coefficients[-1]
    derivative = P.polyder(monic)
    magnitudes = np.abs(monic)

    if initial is not None:
        z = _separate(np.asarray(initial, dtype=complex))
    elif poly.params is not None:
        z = _separate(closed_form_pump_off_roots(poly.params))
    else:
        z = _circle_guesses(monic)

    converged = np.zeros(DEGREE, dtype=bool)
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        active = ~converged
        value = P.polyval(z[active], monic)
        slope = P.polyval(z[active], derivative)

        differences = z[active][:, None] - z[None, :]
        with np.errstate(divide='ignore', invalid='ignore'):
            inverse = np.where(differences == 0, 0, 1 / differences)
        repulsion = inverse.sum(axis=1)

        denominator = slope - value * repulsion
        denominator = np.where(denominator == 0, 1e-300, denominator)
        step = value / denominator
        z[active] = z[active] - step

        scale = P.polyval(np.abs(z[active]), magnitudes)
        residual = np.abs(P.polyval(z[active], monic))
        done = (np.abs(step) <= tolerance * (1 + np.abs(z[active]))) | (residual <= 1e-13 * scale)
        converged[np.flatnonzero(active)[done]] = True
        if converged.all():
            break

    residuals = poly.residuals(z)
    if not converged.all():
        raise ConvergenceError(
            f"Aberth iteration did not converge in {max_iterations} iterations at P = {power:.6e} W",
            best_iterate=z,
            residuals=residuals,
        )

    log_analysis_event('roots', 'converged', power=power, points=DEGREE,
                       metadata={'iterations': iterations, 'max_residual': float(residuals.max())})

    order = np.lexsort((z.imag, z.real))
    return RootSet(power=float(power), roots=z[order], residuals=residuals[order], iterations=iterations)


def companion_roots(poly: DenominatorPoly, power: Optional[float] = None) -> RootSet:
    """Roots as eigenvalues of the companion matrix, used to cross-check ``find_roots``."""
    roots = sort_roots(np.linalg.eigvals(P.polycompanion(poly.coefficients)))
    if power is None:
        power = poly.drive.power if poly.drive is not None else float('nan')
    return RootSet(power=float(power), roots=roots, residuals=poly.residuals(roots), method='companion')


def match_roots(previous: Sequence[complex], current: Sequence[complex]) -> np.ndarray:
    """
    Permutation ``perm`` minimizing sum |previous[i] - current[perm[i]]|.

    Solved exactly as an assignment problem.
    """
    previous = np.asarray(previous, dtype=complex)
    current = np.asarray(current, dtype=complex)
    cost = np.abs(previous[:, None] - current[None, :])
    _, columns = linear_sum_assignment(cost)
    return columns


@log_function_call
def sweep_roots(params: SystemParams, powers: Sequence[float], show_progress: Optional[bool] = None) -> RootTrajectory:
    """
    Track the roots of d across ascending pump powers.

    Each solve is warm-started from the previous power; consecutive sets are
    matched by minimal total distance. A single power gives a one-row trajectory.

    Raises:
        ParameterError: powers empty or not ascending
        ConvergenceError: naming the power at which root finding failed
    """
    powers = np.asarray(list(powers), dtype=float)
    if powers.size == 0:
        raise ParameterError('powers', "at least one pump power is required")
    if np.any(np.diff(powers) < 0):
        raise ParameterError('powers', "powers must be ascending")

    show_progress = settings.SHOW_PROGRESS if show_progress is None else show_progress
    root_sets: List[RootSet] = []
    drives: List[DriveState] = []
    rows: List[np.ndarray] = []
    previous: Optional[np.ndarray] = None

    for power in tqdm(powers, desc="root sweep", unit="power", disable=not show_progress):
        drive = pump_steady_state(params, float(power))
        poly = build_denominator(params, drive)
        try:
            root_set = find_roots(poly, initial=previous, power=float(power))
        except ConvergenceError as e:
            raise ConvergenceError(f"root sweep failed at P = {power:.6e} W", e.best_iterate, e.residuals) from e

        if rows:
            row = root_set.roots[match_roots(rows[-1], root_set.roots)]
        else:
            row = root_set.roots
        rows.append(row)
        root_sets.append(root_set)
        drives.append(drive)
        previous = row

    logger.debug(f"Tracked {DEGREE} roots across {len(powers)} powers")
    return RootTrajectory(powers=powers, root_sets=root_sets, matched=np.vstack(rows), drives=drives)


def positive_branch(trajectory: RootTrajectory) -> Tuple[List[int], np.ndarray]:
    """
    Columns whose real part stays positive, ordered by real part at the first power.

    Returns:
        (column indices, matched roots restricted to those columns)
    """
    positive = np.all(trajectory.matched.real > 0, axis=0)
    columns = [int(c) for c in np.flatnonzero(positive)]
    columns.sort(key=lambda c: trajectory.matched[0, c].real)
    return columns, trajectory.matched[:, columns]


def pinned_root_index(trajectory: RootTrajectory, center: float = 1.0) -> int:
    """Column whose real part strays least from ``center`` over the sweep."""
    drift = np.max(np.abs(trajectory.matched.real - center), axis=0)
    return int(np.argmin(drift))


def dressed_mode_predictions(params: SystemParams, drive: DriveState, warn: bool = True) -> DressedModes:
    """
    Dressed-mode estimates: omega_m - i gamma/2 and
    omega_m +- sqrt(2(G1^2 + G2^2))/2 - (i/2)(kappa + gamma/2).

    The strong-coupling ratio 2(G1^2 + G2^2)/(kappa - gamma/2)^2 is attached and
    compared against settings.STRONG_COUPLING_THRESHOLD.
    """
    system = scaled_quantities(params, drive)
    gamma = system.gamma
    coupling = 2 * (system.G1 ** 2 + system.G2 ** 2)
    half_splitting = 0.5 * np.sqrt(coupling)
    side_damping = -0.5j * (system.kappa + gamma / 2)

    ratio = coupling / (system.kappa - gamma / 2) ** 2
    strong = bool(ratio >= settings.STRONG_COUPLING_THRESHOLD)
    if not strong and warn:
        logger.warning(
            f"Dressed-mode predictions outside strong coupling at P = {drive.power:.3e} W "
            f"(ratio {ratio:.3g} < {settings.STRONG_COUPLING_THRESHOLD:g})"
        )

    return DressedModes(
        central=complex(1.0, -gamma / 2),
        lower=1.0 - half_splitting + side_damping,
        upper=1.0 + half_splitting + side_damping,
        strong_coupling_ratio=float(ratio),
        strong_coupling=strong,
        regime=REGIME_LABELS['strong' if strong else 'weak'],
    )


def stability_check(root_set: RootSet) -> StabilityReport:
    """Stable iff every root has Im < 0 strictly; margins are -Im per root."""
    margins = -np.asarray(root_set.roots).imag
    return StabilityReport(stable=bool(np.all(margins > 0)), margins=margins)
