"""
Relative and center-of-mass mirror coordinates.

Q_a = (g1 Q1 - g2 Q2)/sqrt(g1^2 + g2^2) couples to the cavity field,
Q_s = (g1 Q1 + g2 Q2)/sqrt(g1^2 + g2^2) couples to it only through the
frequency mismatch chi. Diagnostic only: no spectra are derived here.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from ..utils.errors import ParameterError
from .params import SystemParams, derive_couplings

EIT_DIP_REGIME = "EIT-dip regime"
CENTRAL_PEAK_REGIME = "central-peak regime"

# relative tolerance on chi/omega for the decoupled classification
DECOUPLING_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CollectiveCoords:
    Q_a: float
    P_a: float
    Q_s: float
    P_s: float


@dataclass(frozen=True)
class TransformedHamiltonianCoeffs:
    """Coefficients of the Hamiltonian in collective coordinates (rad/s)."""
    omega: float
    chi: float
    cavity_coupling: float
    regime: str

    @property
    def decoupled(self) -> bool:
        return self.regime == EIT_DIP_REGIME

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def mixing_matrix(g1: float, g2: float) -> np.ndarray:
    """
    [[g1, -g2], [g1, g2]]/sqrt(g1^2 + g2^2); rows map (Q1, Q2) to (Q_a, Q_s).

    Raises:
        ParameterError: both couplings zero
    """
    norm = np.hypot(g1, g2)
    if norm == 0:
        raise ParameterError('couplings', "collective transform is degenerate when g1 = g2 = 0")
    return np.array([[g1, -g2], [g1, g2]], dtype=float) / norm


def to_collective(Q1: float, P1: float, Q2: float, P2: float, g1: float, g2: float) -> CollectiveCoords:
    """Transform mirror quadratures to relative (a) and center-of-mass (s) quadratures."""
    mix = mixing_matrix(g1, g2)
    Q_a, Q_s = mix @ np.array([Q1, Q2], dtype=float)
    P_a, P_s = mix @ np.array([P1, P2], dtype=float)
    return CollectiveCoords(Q_a=float(Q_a), P_a=float(P_a), Q_s=float(Q_s), P_s=float(P_s))


def from_collective(coords: CollectiveCoords, g1: float, g2: float):
    """
    Inverse transform. The mixing matrix is orthogonal only when g1 = g2,
    so the pair of linear systems is solved instead of transposing.
    """
    mix = mixing_matrix(g1, g2)
    (Q1, P1), (Q2, P2) = np.linalg.solve(mix, np.array([[coords.Q_a, coords.P_a],
                                                        [coords.Q_s, coords.P_s]]))
    return float(Q1), float(P1), float(Q2), float(P2)


def transformed_coeffs(params: SystemParams) -> TransformedHamiltonianCoeffs:
    """
    omega = (g1^2 + g2^2)(w1/g1^2 + w2/g2^2)/4 and
    chi = (g1^2 + g2^2)(w1/g1^2 - w2/g2^2)/4.

    chi is computed from the formula alone; equal frequencies with unequal
    couplings still give chi != 0.
    """
    g1, g2 = derive_couplings(params)
    total = g1 ** 2 + g2 ** 2
    omega = 0.25 * total * (params.omega_1 / g1 ** 2 + params.omega_2 / g2 ** 2)
    chi = 0.25 * total * (params.omega_1 / g1 ** 2 - params.omega_2 / g2 ** 2)
    regime = EIT_DIP_REGIME if abs(chi) <= DECOUPLING_TOLERANCE * abs(omega) else CENTRAL_PEAK_REGIME
    return TransformedHamiltonianCoeffs(
        omega=omega,
        chi=chi,
        cavity_coupling=float(np.sqrt(total) * params.geometry_factor),
        regime=regime,
    )
