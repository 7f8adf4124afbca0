"""
Spectral features: peaks and dips of a spectrum, their half-prominence widths,
adaptive grid refinement, and comparison against the analytic width formulas.

Positions and widths are in units of omega_m.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Literal, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.signal import find_peaks, peak_prominences, peak_widths

from ..utils.config import ANALYTIC_FORMULAS, REGIME_LABELS, settings
from ..utils.errors import ParameterError, RefinementBudgetError, ResolutionError
from ..utils.logging_config import get_logger, log_analysis_event, log_function_call
from .modes import scaled_quantities
from .params import DriveState, SystemParams
from .response import OBSERVABLES, ResponseSpectrum, evaluate_response, observable_function

logger = get_logger(__name__)

MIN_STEPS_PER_WIDTH = 3


@dataclass(frozen=True)
class SpectralFeature:
    """A peak or dip with its half-prominence width."""
    kind: Literal['peak', 'dip']
    center: float
    extremum_value: float
    fwhm: float
    prominence: float
    left: float
    right: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FeatureReport:
    """Features of one spectrum, ordered by center, plus extraction diagnostics."""
    features: List[SpectralFeature]
    dropped: int
    quantity: str
    points: int
    dynamic_range: float

    def __iter__(self) -> Iterator[SpectralFeature]:
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def __getitem__(self, index: int) -> SpectralFeature:
        return self.features[index]

    @property
    def peaks(self) -> List[SpectralFeature]:
        return [f for f in self.features if f.kind == 'peak']

    @property
    def dips(self) -> List[SpectralFeature]:
        return [f for f in self.features if f.kind == 'dip']

    def to_dict(self) -> Dict[str, Any]:
        return {
            'quantity': self.quantity,
            'points': self.points,
            'dynamic_range': self.dynamic_range,
            'dropped_below_floor': self.dropped,
            'features': [f.to_dict() for f in self.features],
        }


@dataclass(frozen=True)
class AnalyticPrediction:
    """One analytic formula value in units of omega_m."""
    formula_id: str
    role: str
    measure: Literal['width', 'position', 'separation']
    value: float
    regime: str
    valid: bool
    near: Optional[float] = None

    @property
    def formula(self) -> str:
        return ANALYTIC_FORMULAS[self.formula_id]


@dataclass(frozen=True)
class AnalyticComparison:
    label: str
    formula_id: str
    formula: str
    numeric: Optional[float]
    analytic: float
    relative_deviation: Optional[float]
    tolerance: float
    within_tolerance: bool
    regime: str
    valid: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SpectrumRequest:
    """What to sample: one observable of one drive state over [start, stop] (units of omega_m)."""
    params: SystemParams
    drive: DriveState
    start: float = field(default_factory=lambda: settings.DEFAULT_GRID_START)
    stop: float = field(default_factory=lambda: settings.DEFAULT_GRID_STOP)
    points: int = field(default_factory=lambda: settings.DEFAULT_GRID_POINTS)
    quantity: str = 'nu_p'
    tolerance: float = field(default_factory=lambda: settings.REFINE_TOLERANCE)
    budget: int = field(default_factory=lambda: settings.REFINE_BUDGET)

    def __post_init__(self):
        if self.quantity not in OBSERVABLES:
            raise ParameterError('quantity', f"unknown observable '{self.quantity}'")
        if not self.stop > self.start:
            raise ParameterError('grid', "grid_stop must be greater than grid_start")
        if self.points < 2:
            raise ParameterError('grid_points', "at least two grid points are required")

    @property
    def floor_step(self) -> float:
        """Smallest step refinement will create, gamma/(20 omega_m)."""
        return self.params.gamma / (20 * self.params.omega_m)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        plus, minus = evaluate_response(self.params, self.drive, np.asarray(x) * self.params.omega_m)
        scale = 2 * self.params.kappa
        if self.quantity == 'nu_p':
            return (scale * plus).real
        return np.abs(scale * minus) ** 2


@log_function_call
def refine_grid(request: SpectrumRequest, hint: Optional[Sequence[complex]] = None) -> np.ndarray:
    """
    Bisect intervals until neighbouring samples differ by at most
    tolerance x dynamic range, never going below the floor step.

    Args:
        request: Observable and starting grid
        hint: Complex root positions (units of omega_m); within +-5|Im| of each
            root the step is forced down to max(floor, |Im|/10)

    Returns:
        Refined grid in units of omega_m

    Raises:
        RefinementBudgetError: more than ``request.budget`` points needed
    """
    x = np.linspace(request.start, request.stop, request.points)
    y = request.evaluate(x)
    floor = request.floor_step

    windows = []
    for root in ([] if hint is None else hint):
        root = complex(root)
        width = abs(root.imag)
        if width == 0 or not (request.start - 5 * width <= root.real <= request.stop + 5 * width):
            continue
        windows.append((root.real - 5 * width, root.real + 5 * width, max(floor, width / 10)))

    levels = 0
    while True:
        steps = np.diff(x)
        dynamic_range = float(np.max(y) - np.min(y))
        marked = (np.abs(np.diff(y)) > request.tolerance * dynamic_range) & (steps > floor)
        if windows:
            midpoints = 0.5 * (x[:-1] + x[1:])
            for low, high, target in windows:
                inside = (midpoints >= low) & (midpoints <= high)
                marked |= inside & (steps > target)
        if not marked.any():
            break

        new_x = 0.5 * (x[:-1][marked] + x[1:][marked])
        total = len(x) + len(new_x)
        if total > request.budget:
            raise RefinementBudgetError(total, request.budget)

        order = np.argsort(np.concatenate([x, new_x]), kind='mergesort')
        x = np.concatenate([x, new_x])[order]
        y = np.concatenate([y, request.evaluate(new_x)])[order]
        levels += 1

    logger.debug(f"Refined grid to {len(x)} points in {levels} levels")
    return x


def _local_step(x: np.ndarray, i: int) -> float:
    low, high = max(i - 1, 0), min(i + 1, len(x) - 1)
    return (x[high] - x[low]) / (high - low)


def _polish(
    x: np.ndarray,
    signed: Callable[[float], float],
    i: int,
    prominence: float,
    left_ip: float,
    right_ip: float,
):
    """Refine center with a bounded scalar search and crossings with brentq."""
    n = len(x)
    low, high = x[max(i - 1, 0)], x[min(i + 1, n - 1)]
    grid_value = signed(x[i])
    result = minimize_scalar(lambda t: -signed(t), bounds=(low, high), method='bounded',
                             options={'xatol': 1e-12})
    center, value = x[i], grid_value
    if result.success and -result.fun >= grid_value:
        center, value = float(result.x), float(-result.fun)
    prominence = prominence + (value - grid_value)
    level = value - prominence / 2

    def crossing(ip: float) -> Optional[float]:
        # ip indexes the padded signal; padded ends have no analytic counterpart
        a, b = math.floor(ip) - 1, math.ceil(ip) - 1
        if a < 0 or b > n - 1:
            return None
        if a == b:
            return float(x[a])
        fa, fb = signed(x[a]) - level, signed(x[b]) - level
        if fa == 0:
            return float(x[a])
        if fb == 0:
            return float(x[b])
        if fa * fb > 0:
            return None
        return float(brentq(lambda t: signed(t) - level, x[a], x[b], xtol=1e-14))

    return center, value, prominence, crossing(left_ip), crossing(right_ip)


def extract_features_from_samples(
    x: Sequence[float],
    y: Sequence[float],
    prominence_floor: Optional[float] = None,
    evaluator: Optional[Callable[[float], float]] = None,
    baseline: float = 0.0,
    quantity: str = 'signal',
    check_resolution: bool = True,
) -> FeatureReport:
    """
    Peaks and dips of sampled data with half-prominence widths.

    The samples are padded at both ends with ``baseline`` (the asymptotic value
    of the spectrum) so widths are measured against it when the window cuts the
    tails. Extrema on the window edge are discarded.

    Args:
        x: Strictly increasing sample positions
        y: Sample values
        prominence_floor: Fraction of the dynamic range below which extrema are dropped
        evaluator: Exact signal as a function of x, used to polish centers and crossings
        baseline: Asymptotic value outside the window
        quantity: Name recorded on the report
        check_resolution: Raise when a width spans fewer than three local steps

    Raises:
        ResolutionError: a feature is narrower than three local grid steps
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    prominence_floor = settings.PROMINENCE_FLOOR if prominence_floor is None else prominence_floor
    n = len(x)
    dynamic_range = float(np.ptp(y)) if n else 0.0
    if n < 3 or dynamic_range == 0:
        return FeatureReport(features=[], dropped=0, quantity=quantity, points=n, dynamic_range=dynamic_range)

    first_step, last_step = x[1] - x[0], x[-1] - x[-2]
    padded_x = np.concatenate([[x[0] - first_step], x, [x[-1] + last_step]])
    threshold = prominence_floor * dynamic_range

    features: List[SpectralFeature] = []
    dropped = 0
    for kind, sign in (('peak', 1.0), ('dip', -1.0)):
        signal = np.concatenate([[sign * baseline], sign * y, [sign * baseline]])
        candidates, _ = find_peaks(signal)
        # extrema on the window edge are artefacts of the padding
        candidates = candidates[(candidates > 1) & (candidates < n)]
        if candidates.size == 0:
            continue

        prominences, left_bases, right_bases = peak_prominences(signal, candidates)
        keep = prominences >= threshold
        dropped += int(np.count_nonzero(~keep))
        candidates = candidates[keep]
        if candidates.size == 0:
            continue
        prominence_data = (prominences[keep], left_bases[keep], right_bases[keep])
        _, _, left_ips, right_ips = peak_widths(signal, candidates, rel_height=0.5,
                                                prominence_data=prominence_data)

        index = np.arange(len(padded_x))
        for peak, prominence, left_ip, right_ip in zip(candidates, prominence_data[0], left_ips, right_ips):
            i = int(peak) - 1
            center, value = float(x[i]), float(sign * y[i])
            left = float(np.interp(left_ip, index, padded_x))
            right = float(np.interp(right_ip, index, padded_x))

            if evaluator is not None:
                center, value, prominence, polished_left, polished_right = _polish(
                    x, lambda t: sign * evaluator(t), i, float(prominence), left_ip, right_ip)
                left = polished_left if polished_left is not None else left
                right = polished_right if polished_right is not None else right

            fwhm = right - left
            feature = SpectralFeature(
                kind=kind,
                center=center,
                extremum_value=sign * value,
                fwhm=fwhm,
                prominence=float(prominence),
                left=left,
                right=right,
            )
            if check_resolution and fwhm < MIN_STEPS_PER_WIDTH * _local_step(x, i):
                raise ResolutionError(
                    f"{kind} at delta/omega_m = {center:.9f} has FWHM {fwhm:.3e}, "
                    f"fewer than {MIN_STEPS_PER_WIDTH} grid steps; refine the grid",
                    feature=feature,
                )
            features.append(feature)

    if dropped:
        logger.warning(f"{dropped} extrema of {quantity} below prominence floor {prominence_floor:g} dropped")

    features.sort(key=lambda f: f.center)
    return FeatureReport(features=features, dropped=dropped, quantity=quantity, points=n,
                         dynamic_range=dynamic_range)


@log_function_call
def extract_features(
    spectrum: ResponseSpectrum,
    quantity: str = 'nu_p',
    prominence_floor: Optional[float] = None,
    polish: bool = True,
) -> FeatureReport:
    """
    Features of one observable of a computed spectrum.

    Args:
        spectrum: Computed response spectrum
        quantity: ``nu_p`` or ``stokes_intensity``
        prominence_floor: Fraction of the dynamic range (settings.PROMINENCE_FLOOR)
        polish: Refine centers and crossings against the analytic response
    """
    evaluator = observable_function(spectrum.params, spectrum.drive, quantity) if polish else None
    report = extract_features_from_samples(
        spectrum.delta_over_omega_m,
        spectrum.observable(quantity),
        prominence_floor=prominence_floor,
        evaluator=evaluator,
        baseline=0.0,
        quantity=quantity,
    )
    log_analysis_event('features', 'extracted', power=spectrum.drive.power, points=len(spectrum),
                       features_found=len(report), metadata={'dropped': report.dropped})
    return report


def analytic_widths(
    params: SystemParams,
    drive: DriveState,
    mode: Literal['unequal', 'equal'] = 'unequal',
) -> List[AnalyticPrediction]:
    """
    Analytic widths, positions and splittings, each tagged with its validity regime.

    Raises:
        ParameterError: ``equal`` requested with omega_1 != omega_2, or unknown mode
    """
    if mode not in ('unequal', 'equal'):
        raise ParameterError('mode', f"expected 'unequal' or 'equal', got '{mode}'")
    if mode == 'equal' and params.omega_1 != params.omega_2:
        raise ParameterError('mode', "equal-frequency formulas need omega_1 = omega_2")

    s = scaled_quantities(params, drive)
    gamma = s.gamma
    coupling = s.G1 ** 2 + s.G2 ** 2
    ratio = 2 * coupling / (s.kappa - gamma / 2) ** 2
    strong = ratio >= settings.STRONG_COUPLING_THRESHOLD

    def predict(formula_id, role, measure, value, regime, near=None):
        valid = {'weak': not strong, 'strong': strong, 'any': True}[regime]
        return AnalyticPrediction(formula_id=formula_id, role=role, measure=measure, value=float(value),
                                  regime=REGIME_LABELS[regime], valid=bool(valid), near=near)

    side_width = s.kappa + gamma / 2
    if mode == 'unequal':
        central = (s.omega_1 - s.omega_2) - (gamma + coupling / (2 * s.kappa))
        predictions = [
            predict('dip_width_1', 'dip_omega_1', 'width', s.gamma_1 + s.G1 ** 2 / s.kappa, 'weak', s.omega_1),
            predict('dip_width_2', 'dip_omega_2', 'width', s.gamma_2 + s.G2 ** 2 / s.kappa, 'weak', s.omega_2),
            predict('central_peak_width', 'central_peak', 'width', central, 'weak', 1.0),
            predict('central_peak_width_strong', 'central_peak', 'width', gamma, 'strong', 1.0),
            predict('side_peak_width', 'side_peak_lower', 'width', side_width, 'strong'),
            predict('side_peak_width', 'side_peak_upper', 'width', side_width, 'strong'),
            predict('splitting', 'splitting', 'separation', math.sqrt(2 * coupling), 'strong'),
        ]
        if central < 0:
            logger.warning(f"Central-peak width formula is negative ({central:.4g}) at P = {drive.power:.3e} W")
            predictions[2] = AnalyticPrediction(**{**asdict(predictions[2]), 'valid': False})
    else:
        G = math.sqrt(coupling / 2)
        predictions = [
            predict('eit_dip_width', 'eit_dip', 'width', gamma + 2 * G ** 2 / s.kappa, 'weak', 1.0),
            predict('side_peak_width', 'side_peak_lower', 'width', side_width, 'strong'),
            predict('side_peak_width', 'side_peak_upper', 'width', side_width, 'strong'),
            predict('peak_position_lower', 'peak_position_lower', 'position', 1.0 - G, 'strong'),
            predict('peak_position_upper', 'peak_position_upper', 'position', 1.0 + G, 'strong'),
            predict('peak_separation', 'peak_separation', 'separation', 2 * G, 'strong'),
        ]
    return predictions


def _nearest(features: List[SpectralFeature], target: Optional[float]) -> Optional[SpectralFeature]:
    if not features or target is None:
        return None
    return min(features, key=lambda f: abs(f.center - target))


def assign_roles(features: Sequence[SpectralFeature], predictions: Sequence[AnalyticPrediction]) -> Dict[str, SpectralFeature]:
    """
    Map feature roles to detected features.

    Dip roles take the dip nearest the prediction's position. The central peak
    is the peak nearest omega_m when the peak count is odd; the side peaks are
    the outermost of the remaining peaks.
    """
    features = sorted(features, key=lambda f: f.center)
    peaks = [f for f in features if f.kind == 'peak']
    dips = [f for f in features if f.kind == 'dip']
    roles: Dict[str, SpectralFeature] = {}

    for prediction in predictions:
        if prediction.role in ('dip_omega_1', 'dip_omega_2', 'eit_dip'):
            match = _nearest(dips, prediction.near)
            if match is not None:
                roles[prediction.role] = match

    wants_central = any(p.role == 'central_peak' for p in predictions)
    remaining = list(peaks)
    if wants_central and len(peaks) % 2 == 1:
        central = _nearest(peaks[1:-1] or peaks, 1.0)
        roles['central_peak'] = central
        remaining = [p for p in peaks if p is not central]
    if len(remaining) >= 2:
        roles['side_peak_lower'] = remaining[0]
        roles['side_peak_upper'] = remaining[-1]
    return roles


def compare_features(
    features: Sequence[SpectralFeature],
    predictions: Sequence[AnalyticPrediction],
    tolerance: Optional[float] = None,
) -> List[AnalyticComparison]:
    """
    Compare detected features against analytic predictions.

    The relative deviation is |numeric - analytic|/|analytic|; predictions whose
    feature was not found are reported with ``numeric = None``.
    """
    tolerance = settings.COMPARISON_TOLERANCE if tolerance is None else tolerance
    roles = assign_roles(features, predictions)
    lower, upper = roles.get('side_peak_lower'), roles.get('side_peak_upper')

    comparisons = []
    for prediction in predictions:
        numeric: Optional[float] = None
        if prediction.measure == 'width' and prediction.role in roles:
            numeric = roles[prediction.role].fwhm
        elif prediction.measure == 'separation' and lower is not None and upper is not None:
            numeric = upper.center - lower.center
        elif prediction.role == 'peak_position_lower' and lower is not None:
            numeric = lower.center
        elif prediction.role == 'peak_position_upper' and upper is not None:
            numeric = upper.center

        deviation = None
        if numeric is not None and prediction.value != 0:
            deviation = abs(numeric - prediction.value) / abs(prediction.value)

        comparisons.append(AnalyticComparison(
            label=prediction.role,
            formula_id=prediction.formula_id,
            formula=prediction.formula,
            numeric=numeric,
            analytic=prediction.value,
            relative_deviation=deviation,
            tolerance=tolerance,
            within_tolerance=deviation is not None and deviation <= tolerance,
            regime=prediction.regime,
            valid=prediction.valid,
        ))
    return comparisons
