"""
Physics of the driven ring cavity: parameters, response, modes, features
and collective coordinates.
"""

from .params import (
    SystemParams,
    DriveState,
    derive_couplings,
    pump_steady_state,
    self_consistent_detuning,
    regime_report,
)
from .response import (
    ResponsePoint,
    ResponseSpectrum,
    c_plus,
    c_minus,
    scan_spectrum,
    detuning_grid,
    pump_off_response,
    stokes_null_detuning,
)
from .modes import (
    DenominatorPoly,
    RootSet,
    RootTrajectory,
    build_denominator,
    find_roots,
    companion_roots,
    match_roots,
    sweep_roots,
    dressed_mode_predictions,
    stability_check,
)
from .features import (
    SpectralFeature,
    AnalyticComparison,
    SpectrumRequest,
    extract_features,
    analytic_widths,
    compare_features,
    refine_grid,
)
from .normalcoords import (
    CollectiveCoords,
    TransformedHamiltonianCoeffs,
    to_collective,
    from_collective,
    transformed_coeffs,
)

__all__ = [
    'SystemParams', 'DriveState', 'derive_couplings', 'pump_steady_state',
    'self_consistent_detuning', 'regime_report',
    'ResponsePoint', 'ResponseSpectrum', 'c_plus', 'c_minus', 'scan_spectrum',
    'detuning_grid', 'pump_off_response', 'stokes_null_detuning',
    'DenominatorPoly', 'RootSet', 'RootTrajectory', 'build_denominator', 'find_roots',
    'companion_roots', 'match_roots', 'sweep_roots', 'dressed_mode_predictions', 'stability_check',
    'SpectralFeature', 'AnalyticComparison', 'SpectrumRequest', 'extract_features',
    'analytic_widths', 'compare_features', 'refine_grid',
    'CollectiveCoords', 'TransformedHamiltonianCoeffs', 'to_collective', 'from_collective',
    'transformed_coeffs',
]
