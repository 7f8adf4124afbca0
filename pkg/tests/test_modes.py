"""
Tests for the response denominator, its roots and their tracking.
"""

import itertools

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from src.physics.modes import (
    DenominatorPoly,
    ScaledSystem,
    build_denominator,
    closed_form_pump_off_roots,
    companion_roots,
    denominator_coefficients,
    dressed_mode_predictions,
    find_roots,
    match_roots,
    pinned_root_index,
    positive_branch,
    scaled_quantities,
    sort_roots,
    stability_check,
    sweep_roots,
)
from src.utils.errors import ConvergenceError, ParameterError

MW = 1e-3


def _product_form(system: ScaledSystem, x):
    m1 = system.omega_1 ** 2 - x ** 2 - 1j * system.gamma_1 * x
    m2 = system.omega_2 ** 2 - x ** 2 - 1j * system.gamma_2 * x
    k, D = system.kappa, system.detuning
    bracket = system.G1 ** 2 * system.omega_1 * m2 + system.G2 ** 2 * system.omega_2 * m1
    return (k + 1j * (D - x)) * (k - 1j * (D + x)) * m1 * m2 - 2 * D * bracket


def _assert_same_roots(a, b, atol):
    order = match_roots(a, b)
    np.testing.assert_allclose(np.asarray(b)[order], a, rtol=0, atol=atol)


def test_leading_coefficient(unequal_params, drive_at):
    for milliwatts in (0, 2, 15):
        poly = build_denominator(unequal_params, drive_at(unequal_params, milliwatts))
        assert poly.coefficients[-1] == pytest.approx(-1.0, abs=1e-15)
        assert len(poly.coefficients) == 7


def test_uncoupled_polynomial_is_factor_product(unequal_params, drive_at):
    poly = build_denominator(unequal_params, drive_at(unequal_params, 0))
    expected = -P.polyfromroots(closed_form_pump_off_roots(unequal_params))
    np.testing.assert_allclose(poly.coefficients, expected, rtol=1e-12, atol=1e-12 * np.abs(expected).max())


def test_undamped_uncoupled_roots():
    system = ScaledSystem(kappa=0.29, detuning=1.0, omega_1=1.1, omega_2=0.9,
                          gamma_1=0.0, gamma_2=0.0, G1=0.0, G2=0.0)
    poly = DenominatorPoly(denominator_coefficients(system))
    roots = find_roots(poly).roots
    expected = [1 - 0.29j, -1 - 0.29j, 1.1, -1.1, 0.9, -0.9]
    _assert_same_roots(np.array(expected), roots, atol=1e-10)


def test_matches_product_form(unequal_params, drive_at):
    drive = drive_at(unequal_params, 2)
    poly = build_denominator(unequal_params, drive)
    x = np.random.default_rng(7).uniform(0.0, 2.0, 100)
    direct = _product_form(scaled_quantities(unequal_params, drive), x)
    np.testing.assert_allclose(poly.evaluate(x), direct, rtol=1e-10)


def test_pump_off_roots_closed_form(unequal_params, drive_at):
    root_set = find_roots(build_denominator(unequal_params, drive_at(unequal_params, 0)))
    _assert_same_roots(closed_form_pump_off_roots(unequal_params), root_set.roots, atol=1e-10)
    assert root_set.max_residual <= 1e-8


def test_roots_sorted(unequal_params, drive_at):
    roots = find_roots(build_denominator(unequal_params, drive_at(unequal_params, 2))).roots
    np.testing.assert_array_equal(roots, sort_roots(roots))


def test_low_power_positive_roots(unequal_params):
    trajectory = sweep_roots(unequal_params, [0.0, 1e-6])
    _, positive = positive_branch(trajectory)
    np.testing.assert_allclose(np.sort(positive[-1].real), [0.9, 1.0, 1.1], atol=1e-3)


@pytest.mark.parametrize("milliwatts", [0.001, 2, 5, 15])
def test_aberth_agrees_with_companion(unequal_params, drive_at, milliwatts):
    poly = build_denominator(unequal_params, drive_at(unequal_params, milliwatts))
    aberth = find_roots(poly)
    companion = companion_roots(poly)
    _assert_same_roots(aberth.roots, companion.roots, atol=1e-8)
    assert aberth.max_residual <= 1e-8
    assert companion.method == 'companion'


def test_aberth_agrees_with_companion_random_systems():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        system = ScaledSystem(
            kappa=rng.uniform(0.05, 0.5),
            detuning=rng.uniform(0.5, 1.5),
            omega_1=rng.uniform(1.05, 1.2),
            omega_2=rng.uniform(0.8, 0.95),
            gamma_1=10 ** rng.uniform(-5, -2),
            gamma_2=10 ** rng.uniform(-5, -2),
            G1=rng.uniform(0.01, 0.3),
            G2=rng.uniform(0.01, 0.3),
        )
        poly = DenominatorPoly(denominator_coefficients(system))
        aberth = find_roots(poly, power=0.0)
        assert aberth.max_residual <= 1e-8
        _assert_same_roots(aberth.roots, companion_roots(poly).roots, atol=1e-8)


def test_iteration_cap(unequal_params, drive_at):
    poly = DenominatorPoly(build_denominator(unequal_params, drive_at(unequal_params, 2)).coefficients)
    with pytest.raises(ConvergenceError) as info:
        find_roots(poly, max_iterations=1)
    assert len(info.value.best_iterate) == 6
    assert len(info.value.residuals) == 6
    assert info.value.exit_code == 3


def test_assignment_is_optimal():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.normal(size=6) + 1j * rng.normal(size=6)
        b = rng.normal(size=6) + 1j * rng.normal(size=6)
        order = match_roots(a, b)
        assert sorted(order) == list(range(6))
        cost = np.abs(a - b[order]).sum()
        brute = min(np.abs(a - b[list(p)]).sum() for p in itertools.permutations(range(6)))
        assert cost == pytest.approx(brute, rel=1e-12)


def test_repeated_power_has_zero_hop(unequal_params):
    trajectory = sweep_roots(unequal_params, [2 * MW, 2 * MW])
    np.testing.assert_allclose(trajectory.matched[1], trajectory.matched[0], atol=1e-10)


def test_sweep_rejects_descending_powers(unequal_params):
    with pytest.raises(ParameterError):
        sweep_roots(unequal_params, [2 * MW, 1 * MW])
    with pytest.raises(ParameterError):
        sweep_roots(unequal_params, [])


def test_splitting_grows_with_power(unequal_params):
    trajectory = sweep_roots(unequal_params, [0.0, 2 * MW, 15 * MW])
    _, positive = positive_branch(trajectory)
    separation = positive[:, -1].real - positive[:, 0].real
    assert separation[2] > separation[1]

    expected_15mw = [0.73606 - 0.12263j, 1.01158 - 0.047279j, 1.18435 - 0.11975j]
    np.testing.assert_allclose(np.sort_complex(positive[-1]), expected_15mw, atol=1e-4)


def test_dense_sweep_is_continuous(unequal_params):
    coarse = sweep_roots(unequal_params, np.linspace(0, 15 * MW, 31))
    fine = sweep_roots(unequal_params, np.linspace(0, 15 * MW, 61))
    coarse_hops = np.abs(np.diff(coarse.matched, axis=0)).max(axis=0)
    fine_hops = np.abs(np.diff(fine.matched, axis=0)).max(axis=0)
    # halving the step roughly halves the largest hop of every branch
    assert np.all(coarse_hops < 10 * np.maximum(fine_hops, 1e-12))
    # both sweeps land on the same roots
    _assert_same_roots(coarse.matched[-1], fine.matched[-1], atol=1e-9)


def test_pinned_root_equal_frequencies(equal_params):
    powers = np.linspace(0, 15 * MW, 31)
    trajectory = sweep_roots(equal_params, powers)
    pinned = trajectory.column(pinned_root_index(trajectory))
    gamma = equal_params.gamma / equal_params.omega_m

    np.testing.assert_allclose(pinned.real, 1.0, atol=1e-6)
    # at zero power this root is half of a double root
    driven = powers > 0
    np.testing.assert_allclose(pinned.imag[driven], -gamma / 2, atol=1e-9)


def test_central_root_drifts_little_for_unequal_mirrors(unequal_params):
    trajectory = sweep_roots(unequal_params, np.linspace(0, 15 * MW, 16))
    central = trajectory.column(pinned_root_index(trajectory))
    assert np.all(np.abs(central.real - 1.0) < 0.025)


def test_dressed_modes_without_coupling(unequal_params, drive_at):
    dressed = dressed_mode_predictions(unequal_params, drive_at(unequal_params, 0))
    k = unequal_params.kappa / unequal_params.omega_m
    gamma = unequal_params.gamma / unequal_params.omega_m
    assert dressed.central == pytest.approx(1 - 0.5j * gamma)
    assert dressed.lower == dressed.upper == pytest.approx(1 - 0.5j * (k + gamma / 2))
    assert not dressed.strong_coupling


def test_dressed_modes_equal_frequencies(equal_params, drive_at):
    drive = drive_at(equal_params, 15)
    roots = find_roots(build_denominator(equal_params, drive)).roots
    dressed = dressed_mode_predictions(equal_params, drive)

    central = roots[np.argmin(np.abs(roots - dressed.central))]
    assert central.real == pytest.approx(dressed.central.real, abs=1e-6)
    assert central.imag == pytest.approx(dressed.central.imag, abs=1e-9)

    positive = roots[roots.real > 0]
    sides = positive[np.argsort(np.abs(positive - dressed.central))][1:]
    assert sides[0].imag == pytest.approx(sides[1].imag, rel=1e-2)
    assert sides[0].imag == pytest.approx(dressed.lower.imag, rel=1e-2)
    assert dressed.lower.real == pytest.approx(1 - drive.G1 / equal_params.omega_m, rel=1e-12)


def test_dressed_modes_unequal_15mw(unequal_params, drive_at):
    drive = drive_at(unequal_params, 15)
    roots = find_roots(build_denominator(unequal_params, drive)).roots
    dressed = dressed_mode_predictions(unequal_params, drive)
    lower, central, upper = np.sort_complex(roots[roots.real > 0])

    assert (upper.real - lower.real) == pytest.approx(dressed.splitting, rel=0.15)
    assert lower.imag == pytest.approx(upper.imag, rel=0.05)
    assert abs(central.imag) < min(abs(lower.imag), abs(upper.imag))
    assert dressed.strong_coupling_ratio == pytest.approx(3.0, rel=0.05)
    assert not dressed.strong_coupling


def test_stability(unequal_params, drive_at):
    for milliwatts in (0, 15):
        root_set = find_roots(build_denominator(unequal_params, drive_at(unequal_params, milliwatts)))
        report = stability_check(root_set)
        assert report.stable
        assert np.all(report.margins > 0)

    system = scaled_quantities(unequal_params, drive_at(unequal_params, 2))
    flipped = system._replace(kappa=-system.kappa)
    report = stability_check(find_roots(DenominatorPoly(denominator_coefficients(flipped))))
    assert not report.stable
