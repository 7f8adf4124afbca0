"""
Tests for the relative and center-of-mass mirror coordinates.
"""

import math

import numpy as np
import pytest

from src.physics.normalcoords import (
    CENTRAL_PEAK_REGIME,
    EIT_DIP_REGIME,
    CollectiveCoords,
    from_collective,
    mixing_matrix,
    to_collective,
    transformed_coeffs,
)
from src.physics.params import derive_couplings
from src.utils.errors import ParameterError


def test_mixing_matrix_orthogonal_only_for_equal_couplings():
    mix = mixing_matrix(3.0, 4.0)
    np.testing.assert_allclose(mix, [[0.6, -0.8], [0.6, 0.8]])
    # row overlap is (g1^2 - g2^2)/(g1^2 + g2^2)
    np.testing.assert_allclose(mix @ mix.T, [[1.0, -0.28], [-0.28, 1.0]], atol=1e-15)

    equal = mixing_matrix(2.5, 2.5)
    np.testing.assert_allclose(equal @ equal.T, np.eye(2), atol=1e-15)


def test_degenerate_couplings():
    with pytest.raises(ParameterError) as info:
        mixing_matrix(0.0, 0.0)
    assert info.value.field == 'couplings'


def test_round_trip(unequal_params):
    g1, g2 = derive_couplings(unequal_params)
    rng = np.random.default_rng(3)
    for Q1, P1, Q2, P2 in rng.normal(size=(20, 4)):
        coords = to_collective(Q1, P1, Q2, P2, g1, g2)
        assert isinstance(coords, CollectiveCoords)
        np.testing.assert_allclose(from_collective(coords, g1, g2), (Q1, P1, Q2, P2), atol=1e-12)


def test_round_trip_recovers_unit_vectors(unequal_params):
    g1, g2 = derive_couplings(unequal_params)
    for unit in np.eye(4):
        coords = to_collective(*unit, g1, g2)
        np.testing.assert_allclose(from_collective(coords, g1, g2), unit, atol=1e-14)


def test_relative_coordinate_carries_the_cavity_coupling(unequal_params):
    g1, g2 = derive_couplings(unequal_params)
    # g1 Q1 - g2 Q2 is what the cavity sees
    norm = math.hypot(g1, g2)
    coords = to_collective(g1 / norm, 0.0, -g2 / norm, 0.0, g1, g2)
    assert coords.Q_a == pytest.approx(1.0, rel=1e-14)
    assert coords.Q_s == pytest.approx((g1 ** 2 - g2 ** 2) / norm ** 2, rel=1e-12)


def test_equal_mirrors_decouple(equal_params):
    coeffs = transformed_coeffs(equal_params)
    assert coeffs.chi == 0
    assert coeffs.omega == pytest.approx(equal_params.omega_m, rel=1e-14)
    assert coeffs.regime == EIT_DIP_REGIME
    assert coeffs.decoupled


def test_unequal_mirrors_mix(unequal_params):
    coeffs = transformed_coeffs(unequal_params)
    omega_m = unequal_params.omega_m
    # with g_j^2 proportional to 1/omega_j the coefficients depend only on the frequencies
    scale = 0.25 * (1 / 1.1 + 1 / 0.9)
    assert coeffs.omega / omega_m == pytest.approx(scale * (1.1 ** 2 + 0.9 ** 2), rel=1e-12)
    assert coeffs.chi / omega_m == pytest.approx(scale * (1.1 ** 2 - 0.9 ** 2), rel=1e-12)
    assert coeffs.regime == CENTRAL_PEAK_REGIME
    assert not coeffs.decoupled


def test_equal_frequencies_with_unequal_masses_still_mix(equal_params):
    heavier = equal_params.replace(mass_1=2 * equal_params.mass_1)
    coeffs = transformed_coeffs(heavier)
    assert coeffs.chi != 0
    assert coeffs.regime == CENTRAL_PEAK_REGIME


def test_cavity_coupling(unequal_params):
    g1, g2 = derive_couplings(unequal_params)
    coeffs = transformed_coeffs(unequal_params)
    assert coeffs.cavity_coupling == pytest.approx(math.hypot(g1, g2) * math.cos(math.pi / 6), rel=1e-12)
    assert set(coeffs.to_dict()) == {'omega', 'chi', 'cavity_coupling', 'regime'}


def test_chi_changes_sign_when_frequencies_swap(unequal_params):
    assert unequal_params.mass_1 == unequal_params.mass_2
    swapped = unequal_params.replace(omega_1=unequal_params.omega_2, omega_2=unequal_params.omega_1)
    original, mirrored = transformed_coeffs(unequal_params), transformed_coeffs(swapped)

    assert original.chi > 0
    assert mirrored.chi == pytest.approx(-original.chi, rel=1e-12)
    assert mirrored.omega == pytest.approx(original.omega, rel=1e-12)
    assert mirrored.regime == CENTRAL_PEAK_REGIME
