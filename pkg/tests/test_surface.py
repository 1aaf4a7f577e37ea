"""Lateral Casimir-Polder response and Fourier coefficients."""

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_bec import (
    RB87,
    Corrugation,
    ConfigurationError,
    ExtrapolationError,
    LateralPotential,
    PhysicsDomainError,
    PotentialComponent,
    SurfaceConfig,
    energy_to_frequency,
    lateral_coefficients,
    lateral_eval,
    load_tabulated_response,
    response_perfect,
)
from casimir_bec.benchmarks import benchmark_surface
from casimir_bec.emit import write_csv

K_C = 2.0 * math.pi / 9.75e-6
Z_CM = 3e-6


def test_benchmark_amplitude():
    # 1 um corrugation at 3 um separation: |U| ~ 2*pi*hbar x 0.22 Hz
    u = 1e-6 * response_perfect(K_C, Z_CM, RB87)
    assert energy_to_frequency(abs(u)) == pytest.approx(0.22, rel=0.10)
    assert u < 0.0  # attractive


def test_response_decays_exponentially():
    z10 = 10.0 / K_C
    z50 = 50.0 / K_C
    g10 = abs(response_perfect(K_C, z10, RB87))
    g50 = abs(response_perfect(K_C, z50, RB87))
    assert g50 < math.exp(-40.0) * g10


def test_response_linear_in_polarizability():
    doubled = dataclasses.replace(RB87, polarizability_volume=2 * RB87.polarizability_volume)
    assert response_perfect(K_C, Z_CM, doubled) == pytest.approx(
        2.0 * response_perfect(K_C, Z_CM, RB87), rel=1e-14
    )


def test_response_negative_and_monotone_in_k():
    k_grid = np.linspace(0.0, 10.0 * K_C, 64)
    g = response_perfect(k_grid, Z_CM, RB87)
    assert np.all(g < 0.0)
    assert np.all(np.diff(np.abs(g)) < 0.0)


def test_response_domain_errors():
    with pytest.raises(PhysicsDomainError):
        response_perfect(K_C, 0.0, RB87)
    with pytest.raises(PhysicsDomainError):
        response_perfect(-1.0, Z_CM, RB87)


def test_lateral_coefficients_benchmark():
    pot = lateral_coefficients(benchmark_surface(), RB87)
    u1 = abs(pot.components[0].coefficients[0])
    assert energy_to_frequency(u1) == pytest.approx(0.22, rel=0.10)


@pytest.mark.parametrize("eta,expected", [(0.9, 0.20), (0.7, 0.16)])
def test_lateral_coefficients_eta_scaling(eta, expected):
    pot = lateral_coefficients(benchmark_surface(eta_f=eta), RB87)
    u1 = abs(pot.components[0].coefficients[0])
    assert energy_to_frequency(u1) == pytest.approx(expected, rel=0.10)


def test_flat_surface_gives_zero():
    surf = SurfaceConfig(
        fundamentals=(Corrugation(k_c=K_C, amplitudes=(0.0, 0.0)),), z_cm=Z_CM
    )
    pot = lateral_coefficients(surf, RB87)
    assert pot.components[0].coefficients == (0.0, 0.0)


@given(h=st.floats(min_value=1e-9, max_value=1e-6), eta=st.floats(min_value=0.01, max_value=1.0))
def test_lateral_coefficients_linear_in_h_and_eta(h, eta):
    surf = SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(h,)),),
                         z_cm=Z_CM, eta_f=eta)
    u = lateral_coefficients(surf, RB87).components[0].coefficients[0]
    unit = lateral_coefficients(
        SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(1.0e-6,)),), z_cm=Z_CM),
        RB87,
    ).components[0].coefficients[0]
    assert u == pytest.approx(eta * (h / 1.0e-6) * unit, rel=1e-12)


def test_second_harmonic_subdominant_at_benchmark_geometry():
    # equal h1 = h2: the exponential in k z (~1.93 here) must suppress n = 2
    surf = SurfaceConfig(
        fundamentals=(Corrugation(k_c=K_C, amplitudes=(0.5e-6, 0.5e-6)),), z_cm=Z_CM
    )
    pot = lateral_coefficients(surf, RB87)
    u1, u2 = pot.components[0].coefficients
    assert abs(u2) < abs(u1)


def test_lateral_eval_cosine_structure():
    pot = LateralPotential(components=(PotentialComponent(k_c=K_C, coefficients=(-1e-34,)),))
    lam = 2.0 * math.pi / K_C
    assert lateral_eval(pot, 0.0) == pytest.approx(-1e-34, rel=1e-14)
    assert lateral_eval(pot, lam / 4.0) == pytest.approx(0.0, abs=1e-48)


@given(st.floats(min_value=-5e-5, max_value=5e-5))
def test_lateral_eval_periodicity(x):
    pot = LateralPotential(components=(PotentialComponent(k_c=K_C, coefficients=(-2e-34, 3e-35)),))
    lam = 2.0 * math.pi / K_C
    a, b = lateral_eval(pot, x), lateral_eval(pot, x + lam)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-46)


def test_surface_validation():
    with pytest.raises(ConfigurationError):
        SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(1e-6,)),), z_cm=-1.0)
    with pytest.raises(ConfigurationError):
        SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(1e-6,)),),
                      z_cm=Z_CM, eta_f=1.2)
    with pytest.raises(ConfigurationError):
        Corrugation(k_c=-1.0, amplitudes=(1e-6,))
    with pytest.warns(UserWarning, match="smallest length scale"):
        SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(5e-6,)),), z_cm=1e-6)


# --- tabulated response ---------------------------------------------------


def _write_grid(path, k_axis, z_axis, fn):
    rows = [[k, z, fn(k, z)] for k in k_axis for z in z_axis]
    write_csv(path, ["k_radpm", "z_m", "g_Jpm"], rows)


def test_tabulated_matches_nodes(tmp_path):
    path = tmp_path / "resp.csv"
    k_axis = np.linspace(0.5 * K_C, 2.0 * K_C, 7)
    z_axis = np.linspace(1e-6, 5e-6, 9)
    _write_grid(path, k_axis, z_axis, lambda k, z: response_perfect(k, z, RB87))
    resp = load_tabulated_response(str(path))
    assert resp.provenance == "tabulated"
    for k in k_axis:
        for z in z_axis:
            assert resp(k, z) == pytest.approx(response_perfect(k, z, RB87), rel=1e-12)


def test_tabulated_bilinear_midpoint(tmp_path):
    path = tmp_path / "lin.csv"
    # linear data: bilinear interpolation is exact, midpoint = mean
    _write_grid(path, [1.0, 2.0], [1.0, 2.0], lambda k, z: 3.0 * k - 2.0 * z)
    resp = load_tabulated_response(str(path))
    assert resp(1.5, 1.0) == pytest.approx(0.5 * (resp(1.0, 1.0) + resp(2.0, 1.0)), rel=1e-12)
    assert resp(1.0, 1.5) == pytest.approx(0.5 * (resp(1.0, 1.0) + resp(1.0, 2.0)), rel=1e-12)


def test_tabulated_out_of_range(tmp_path):
    path = tmp_path / "resp.csv"
    _write_grid(path, [1.0, 2.0], [1.0, 2.0], lambda k, z: k + z)
    resp = load_tabulated_response(str(path))
    with pytest.raises(ExtrapolationError):
        resp(0.5, 1.5)
    with pytest.raises(ExtrapolationError):
        resp(1.5, 2.5)


def test_tabulated_malformed(tmp_path):
    bad_header = tmp_path / "bad1.csv"
    bad_header.write_text("k,z,g\n1,1,1\n")
    with pytest.raises(ConfigurationError, match="header"):
        load_tabulated_response(str(bad_header))

    not_rectangular = tmp_path / "bad2.csv"
    not_rectangular.write_text("k_radpm,z_m,g_Jpm\n1,1,1\n1,2,1\n2,1,1\n")
    with pytest.raises(ConfigurationError, match="rectangular"):
        load_tabulated_response(str(not_rectangular))

    wrong_order = tmp_path / "bad3.csv"
    wrong_order.write_text("k_radpm,z_m,g_Jpm\n2,1,1\n2,2,1\n1,1,1\n1,2,1\n")
    with pytest.raises(ConfigurationError, match="increasing"):
        load_tabulated_response(str(wrong_order))


def test_tabulated_used_for_coefficients(tmp_path):
    path = tmp_path / "resp.csv"
    k_axis = np.linspace(0.5 * K_C, 3.0 * K_C, 11)
    z_axis = np.linspace(1e-6, 5e-6, 11)
    _write_grid(path, k_axis, z_axis, lambda k, z: response_perfect(k, z, RB87))
    resp = load_tabulated_response(str(path))
    # eta_f must NOT rescale a tabulated response
    surf = SurfaceConfig(fundamentals=(Corrugation(k_c=K_C, amplitudes=(1e-6,)),),
                         z_cm=Z_CM, eta_f=0.5)
    pot = lateral_coefficients(surf, RB87, resp)
    expected = 1e-6 * resp(K_C, Z_CM)
    assert pot.components[0].coefficients[0] == pytest.approx(expected, rel=1e-12)
