"""Suppression factor, perturbative gaps, branches, coupled modes."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_bec import (
    RB87,
    LateralPotential,
    PhysicsDomainError,
    PotentialComponent,
    UnsupportedConfigurationError,
    band_branches,
    bogoliubov_dispersion,
    coupled_mode_gaps,
    energy_to_frequency,
    frequency_to_energy,
    gap_high_density,
    lateral_coefficients,
    min_resolvable_separation,
    multibranch_dispersion,
    perturbative_gaps,
    sound_speed,
    suppression_factor,
)
from casimir_bec.benchmarks import mixing_scenario, separated_scenario
from casimir_bec.constants import HBAR


def test_suppression_benchmark(params, q_1):
    assert suppression_factor(q_1, params.mu_tilde, RB87) == pytest.approx(0.08, abs=0.005)


def test_suppression_limits(params):
    assert suppression_factor(0.0, params.mu_tilde, RB87) == 0.0
    assert suppression_factor(1e3 * params.k_mu, params.mu_tilde, RB87) > 0.999


@given(st.floats(min_value=1.0, max_value=1e8))
def test_suppression_bounds(q):
    mu = frequency_to_energy(493.0)
    f = suppression_factor(q, mu, RB87)
    assert 0.0 < f < 1.0


def test_gap_benchmark(params, pot):
    gaps = perturbative_gaps(params, pot)
    assert len(gaps.entries) == 1
    assert energy_to_frequency(gaps.entry().gap) == pytest.approx(0.016, rel=0.15)
    assert gaps.entry().gap == gaps.entry().f_qn * abs(gaps.entry().u_n)


def test_gap_near_surface(params, near_surface):
    pot = lateral_coefficients(near_surface, RB87)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # legitimately at |U|/E_B ~ 0.11
        gaps = perturbative_gaps(params, pot)
    assert energy_to_frequency(gaps.entry().gap) == pytest.approx(3.98, rel=0.10)
    q_fn3 = near_surface.fundamentals[0].k_c / 2.0
    e_b = bogoliubov_dispersion(q_fn3, params.mu_tilde, RB87)
    assert energy_to_frequency(e_b) == pytest.approx(191.0, rel=0.02)


def test_gap_empty_for_flat(params):
    flat = LateralPotential(components=(PotentialComponent(k_c=1e6, coefficients=(0.0,)),))
    assert perturbative_gaps(params, flat).entries == ()


def test_gap_sign_flip_invariance(params, pot):
    u = pot.components[0].coefficients[0]
    flipped = LateralPotential(components=(PotentialComponent(
        k_c=pot.components[0].k_c, coefficients=(-u,)),))
    assert perturbative_gaps(params, flipped).entry().gap == pytest.approx(
        perturbative_gaps(params, pot).entry().gap, rel=1e-14)


def test_gap_warns_when_large(params, pot):
    k_c = pot.components[0].k_c
    big = LateralPotential(components=(PotentialComponent(
        k_c=k_c, coefficients=(0.5 * params.mu_tilde,)),))
    with pytest.warns(UserWarning, match="comfort zone"):
        perturbative_gaps(params, big)


# --- branches ---------------------------------------------------------------


def test_branches_at_zone_edge(params, pot):
    slice_ = band_branches(params, pot, detunings=np.array([0.0]))
    gap = perturbative_gaps(params, pot).entry().gap
    assert slice_.e_plus[0] - slice_.e_minus[0] == pytest.approx(gap, rel=1e-12)
    mean = 0.5 * (slice_.e_plus[0] + slice_.e_minus[0])
    e_b = bogoliubov_dispersion(slice_.q_n, params.mu_tilde, RB87)
    u_over_eb = abs(pot.components[0].coefficients[0]) / e_b
    assert abs(mean - e_b) / e_b <= u_over_eb**2


def test_branches_unperturbed_crossing(params, pot):
    k_c = pot.components[0].k_c
    flat = LateralPotential(components=(PotentialComponent(k_c=k_c, coefficients=(0.0,)),))
    eps = np.linspace(-k_c / 4.0, k_c / 4.0, 33)
    slice_ = band_branches(params, flat, detunings=eps)
    for i, e in enumerate(eps):
        pair = sorted([
            bogoliubov_dispersion(abs(k_c / 2.0 + e), params.mu_tilde, RB87),
            bogoliubov_dispersion(abs(-k_c / 2.0 + e), params.mu_tilde, RB87),
        ])
        assert slice_.e_minus[i] == pytest.approx(pair[0], rel=1e-12)
        assert slice_.e_plus[i] == pytest.approx(pair[1], rel=1e-12)


def test_branches_ordering_and_linearity(params, pot):
    slice_full = band_branches(params, pot)
    assert np.all(slice_full.e_minus <= slice_full.e_plus)
    # gap scales linearly under U -> U/2, U/4
    k_c = pot.components[0].k_c
    u = pot.components[0].coefficients[0]
    gap_1 = perturbative_gaps(params, pot).entry().gap
    for s in (0.5, 0.25):
        scaled = LateralPotential(components=(PotentialComponent(
            k_c=k_c, coefficients=(s * u,)),))
        assert perturbative_gaps(params, scaled).entry().gap == pytest.approx(
            s * gap_1, rel=1e-12)


def test_branches_detuning_domain(params, pot):
    k_c = pot.components[0].k_c
    with pytest.raises(PhysicsDomainError):
        band_branches(params, pot, detunings=np.array([0.3 * k_c]))


# --- high-density and multibranch --------------------------------------------


def test_gap_high_density_substitution():
    mu = 100.0 * HBAR * 2.0 * math.pi * 2700.0
    omega_r = 2.0 * math.pi * 2700.0
    radius = math.sqrt(2.0 * mu / (RB87.mass * omega_r**2))
    k_c = 2.0 / radius  # makes k_c R = 2
    u = frequency_to_energy(0.2)
    assert gap_high_density(mu, omega_r, k_c, u, RB87) == pytest.approx(
        (3.0 / 400.0) * u, rel=1e-12)
    assert gap_high_density(mu, omega_r, k_c, 2 * u, RB87) == pytest.approx(
        2.0 * gap_high_density(mu, omega_r, k_c, u, RB87), rel=1e-14)


def test_gap_high_density_triple_factor_oracle(params):
    # independent recomputation of (3 hbar wr / 4 mu) * (kc R / 2) * U
    omega_r = params.trap.omega_r
    mu = 50.0 * HBAR * omega_r
    k_c = 6.4e5
    u = frequency_to_energy(0.22)
    radius = math.sqrt(2.0 * mu / (RB87.mass * omega_r**2))
    expected = 3.0 * HBAR * omega_r * k_c * radius * u / (8.0 * mu)
    assert gap_high_density(mu, omega_r, k_c, u, RB87) == pytest.approx(expected, rel=1e-12)


def test_multibranch_values(params):
    omega_r = params.trap.omega_r
    mu = 50.0 * HBAR * omega_r
    assert multibranch_dispersion(1, 0.0, mu, omega_r, RB87) == pytest.approx(
        2.0 * HBAR * omega_r, rel=1e-15)
    assert multibranch_dispersion(0, 0.0, mu, omega_r, RB87) == 0.0


def test_multibranch_sound_speed_ratio(params):
    # dense-cloud phonons run sqrt(2) slower than the tight-confinement sound
    q = params.k_mu / 100.0
    dense = multibranch_dispersion(0, q, params.mu_tilde, params.trap.omega_r, RB87)
    ratio = dense / (HBAR * q) / sound_speed(params.mu_tilde, RB87)
    assert ratio == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-3)


def test_min_resolvable_separation(params, pot, q_1):
    assert min_resolvable_separation(1e6, 0.0, 1e-30) == 0.0
    assert min_resolvable_separation(1e6, 1e-31, 1e-30) == pytest.approx(1e5, rel=1e-12)
    u_1 = abs(pot.components[0].coefficients[0])
    e_b = bogoliubov_dispersion(q_1, params.mu_tilde, RB87)
    dk = min_resolvable_separation(2.0 * q_1, u_1, e_b)
    assert dk / (2.0 * q_1) == pytest.approx(0.003, rel=0.05)
    with pytest.raises(PhysicsDomainError):
        min_resolvable_separation(1e6, 1e-31, 0.0)


# --- coupled fundamentals -----------------------------------------------------


def test_coupled_well_separated():
    params, pot = separated_scenario()
    report = coupled_mode_gaps(params, pot)
    assert len(report.momenta) == 6
    assert not report.mixing_regime
    for dev in report.deviations:
        assert abs(dev) < 0.01


def test_coupled_u2_zero_contains_single_result():
    params, pot = separated_scenario()
    k_1 = pot.components[0].k_c
    u_1 = pot.components[0].coefficients[0]
    pot0 = LateralPotential(components=(
        PotentialComponent(k_c=k_1, coefficients=(u_1,)),
        PotentialComponent(k_c=3.0 * k_1, coefficients=(0.0,)),
    ))
    report = coupled_mode_gaps(params, pot0)
    single = perturbative_gaps(params, LateralPotential(components=(
        PotentialComponent(k_c=k_1, coefficients=(u_1,)),)))
    assert report.splittings[0] == pytest.approx(single.entry().gap, rel=1e-10)


def test_coupled_identical_fundamentals_superpose():
    params, pot = separated_scenario()
    k_1 = pot.components[0].k_c
    u = pot.components[0].coefficients[0]
    split_pot = LateralPotential(components=(
        PotentialComponent(k_c=k_1, coefficients=(u / 2.0,)),
        PotentialComponent(k_c=k_1, coefficients=(u / 2.0,)),
    ))
    report = coupled_mode_gaps(params, split_pot)
    single = perturbative_gaps(params, LateralPotential(components=(
        PotentialComponent(k_c=k_1, coefficients=(u,)),)))
    assert report.splittings[0] == pytest.approx(single.entry().gap, rel=1e-12)


def test_coupled_mixing_onset():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params, pot = mixing_scenario()
        report = coupled_mode_gaps(params, pot)
    assert report.separation_over_dk_min == pytest.approx(0.1, rel=1e-9)
    assert report.mixing_regime
    assert abs(report.deviations[0]) > 0.10
    assert abs(report.deviations[1]) > 0.10


def test_coupled_rejects_wrong_counts(params, pot):
    with pytest.raises(UnsupportedConfigurationError):
        coupled_mode_gaps(params, pot)  # single fundamental
    three = LateralPotential(components=(
        PotentialComponent(k_c=1e6, coefficients=(1e-35,)),
        PotentialComponent(k_c=2e6, coefficients=(1e-35,)),
        PotentialComponent(k_c=3e6, coefficients=(1e-35,)),
    ))
    with pytest.raises(UnsupportedConfigurationError):
        coupled_mode_gaps(params, three)
    multi_harmonic = LateralPotential(components=(
        PotentialComponent(k_c=1e6, coefficients=(1e-35, 1e-36)),
        PotentialComponent(k_c=2e6, coefficients=(1e-35,)),
    ))
    with pytest.raises(UnsupportedConfigurationError):
        coupled_mode_gaps(params, multi_harmonic)
