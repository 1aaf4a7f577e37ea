"""Exact BdG diagonalization: structure, limits, convergence, oracle role."""

import warnings

import numpy as np
import pytest

from casimir_bec import (
    RB87,
    ContractError,
    InstabilityError,
    LateralPotential,
    PotentialComponent,
    UnsupportedConfigurationError,
    bogoliubov_dispersion,
    perturbative_gaps,
)
from casimir_bec.bdg import (
    BdgProblem,
    build_bdg,
    oracle_compare,
    positive_branch,
    reduce_to_common_base,
    solve_bdg,
    solve_bdg_bands,
    zone_edge_gap,
)
from casimir_bec.benchmarks import mixing_scenario, separated_scenario


def _single_pot(k_c, u):
    return LateralPotential(components=(PotentialComponent(k_c=k_c, coefficients=(u,)),))


def _problem(params, pot, q_b, cutoff):
    k_base, coeffs = reduce_to_common_base(pot)
    return BdgProblem(mu_tilde=params.mu_tilde, species=RB87, k_base=k_base,
                      potential=tuple(sorted(coeffs.items())), q_bloch=q_b, cutoff=cutoff)


def test_homogeneous_limit_exact(params, pot):
    k_c = pot.components[0].k_c
    problem = _problem(params, _single_pot(k_c, 0.0), k_c / 2.0, cutoff=8)
    values = solve_bdg(problem)
    expected = []
    for n in range(-8, 9):
        e = bogoliubov_dispersion(abs(k_c / 2.0 + n * k_c), params.mu_tilde, RB87)
        expected += [e, -e]
    np.testing.assert_allclose(values, np.sort(expected), rtol=1e-9)


def test_matrix_trace_zero(params, pot):
    problem = _problem(params, pot, 0.3e5, cutoff=6)
    h = build_bdg(problem)
    assert h.shape == (26, 26)
    assert np.trace(h) == pytest.approx(0.0, abs=1e-12 * np.max(np.abs(h)))


def test_minimal_cutoff_reproduces_two_state_gap(params, pot):
    gap_pert = perturbative_gaps(params, pot).entry()
    with pytest.warns(UserWarning, match="convergence floor"):
        gap_m1 = zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=1)
        problem = _problem(params, pot, gap_pert.q_n, cutoff=1)
    assert problem.dimension == 6
    e_b = bogoliubov_dispersion(gap_pert.q_n, params.mu_tilde, RB87)
    u_over_eb = abs(gap_pert.u_n) / e_b
    assert abs(gap_m1.gap - gap_pert.gap) / gap_pert.gap <= 5.0 * u_over_eb


def test_zone_edge_gap_vs_perturbative(params, pot):
    gap_pert = perturbative_gaps(params, pot).entry()
    numeric = zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=16)
    e_b = bogoliubov_dispersion(gap_pert.q_n, params.mu_tilde, RB87)
    bound = 5.0 * abs(gap_pert.u_n) / e_b
    assert abs(numeric.gap - gap_pert.gap) / gap_pert.gap <= bound


def test_zero_potential_gap_vanishes(params, pot):
    k_c = pot.components[0].k_c
    numeric = zone_edge_gap(params.mu_tilde, RB87, _single_pot(k_c, 0.0), cutoff=8)
    e_b = bogoliubov_dispersion(k_c / 2.0, params.mu_tilde, RB87)
    assert numeric.gap < 1e-10 * e_b


def test_linear_response_scaling(params, pot):
    k_c = pot.components[0].k_c
    u_1 = pot.components[0].coefficients[0]
    e_b = bogoliubov_dispersion(k_c / 2.0, params.mu_tilde, RB87)
    reference = zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=16).gap
    for s in (0.5, 0.25):
        scaled = zone_edge_gap(params.mu_tilde, RB87, _single_pot(k_c, s * u_1), cutoff=16)
        assert abs(scaled.gap / s - reference) / reference <= 5.0 * abs(s * u_1) / e_b


def test_spectral_symmetry(params, pot):
    for q_b in (0.11e5, 1.7e5, 3.22e5):
        values = solve_bdg(_problem(params, pot, q_b, cutoff=10))
        scale = np.max(np.abs(values))
        np.testing.assert_allclose(values, -values[::-1], atol=1e-9 * scale)


def test_convergence_in_cutoff(params, pot):
    gap_16 = zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=16).gap
    gap_32 = zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=32).gap
    assert abs(gap_32 - gap_16) / gap_16 < 1e-3


def test_detuned_branches_match_bdg(params, pot):
    # two-state branches at eps = k_c/8 against the exact bands at the
    # same Bloch momentum
    from casimir_bec import band_branches

    k_c = pot.components[0].k_c
    eps = k_c / 8.0
    slice_ = band_branches(params, pot, detunings=np.array([eps]))
    values = solve_bdg(_problem(params, pot, k_c / 2.0 + eps, cutoff=16))
    lowest = positive_branch(values, params.mu_tilde)[:2]
    assert slice_.e_minus[0] == pytest.approx(lowest[0], rel=0.02)
    assert slice_.e_plus[0] == pytest.approx(lowest[1], rel=0.02)


def test_bloch_periodicity(params, pot):
    k_c = pot.components[0].k_c
    q_b = 0.17 * k_c
    low = solve_bdg(_problem(params, pot, q_b, cutoff=24))
    high = solve_bdg(_problem(params, pot, q_b + k_c, cutoff=24))
    pos_low = positive_branch(low, params.mu_tilde)[:5]
    pos_high = positive_branch(high, params.mu_tilde)[:5]
    np.testing.assert_allclose(pos_low, pos_high, rtol=1e-9)


def test_solve_bdg_bands_metadata(params, pot):
    bands = solve_bdg_bands(params.mu_tilde, RB87, pot, cutoff=16, n_bands=4,
                            check_convergence=True)
    assert bands.converged is True
    assert bands.drift_vs_coarser < 1e-3
    assert bands.bands.shape == (33, 4)
    # band ordering along the grid
    assert np.all(np.diff(bands.bands, axis=1) >= -1e-12 * params.mu_tilde)


def test_instability_detected(params, pot):
    k_c = pot.components[0].k_c
    with pytest.warns(UserWarning, match="TF background"):
        problem = _problem(params, _single_pot(k_c, 3.0 * params.mu_tilde), k_c / 2.0, 12)
    with pytest.raises(InstabilityError):
        solve_bdg(problem)


def test_incommensurate_rejected(params):
    pot = LateralPotential(components=(
        PotentialComponent(k_c=1e6, coefficients=(1e-35,)),
        PotentialComponent(k_c=1e6 * np.pi / 3.0, coefficients=(1e-35,)),
    ))
    with pytest.raises(UnsupportedConfigurationError, match="commensurate"):
        reduce_to_common_base(pot)


def test_dual_far_apart_matches_single_runs(params):
    _, pot = separated_scenario()
    k_1 = pot.components[0].k_c
    u_1 = pot.components[0].coefficients[0]
    u_2 = pot.components[1].coefficients[0]
    dual_1 = zone_edge_gap(params.mu_tilde, RB87, pot, fundamental=0, cutoff=24)
    dual_2 = zone_edge_gap(params.mu_tilde, RB87, pot, fundamental=1, cutoff=24)
    single_1 = zone_edge_gap(params.mu_tilde, RB87, _single_pot(k_1, u_1), cutoff=24)
    single_2 = zone_edge_gap(params.mu_tilde, RB87, _single_pot(3.0 * k_1, u_2), cutoff=24)
    assert dual_1.gap == pytest.approx(single_1.gap, rel=0.01)
    assert dual_2.gap == pytest.approx(single_2.gap, rel=0.01)


def test_mixing_onset_cross_check():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params, pot = mixing_scenario()
        from casimir_bec import coupled_mode_gaps

        report = coupled_mode_gaps(params, pot)
        numeric = zone_edge_gap(params.mu_tilde, RB87, pot, fundamental=0, cutoff=96)
    deviation = abs(numeric.gap - report.independent_gaps[0]) / report.independent_gaps[0]
    assert deviation > 0.10
    # the near-degenerate block and the exact solve agree on the direction
    assert np.sign(numeric.gap - report.independent_gaps[0]) == np.sign(
        report.splittings[0] - report.independent_gaps[0])


def test_oracle_compare_rows(params, pot):
    gaps = perturbative_gaps(params, pot)
    bands = solve_bdg_bands(params.mu_tilde, RB87, pot, cutoff=16,
                            check_convergence=False)
    report = oracle_compare(gaps, bands)
    assert report.all_pass
    row = report.rows[0]
    assert row.tolerance == pytest.approx(
        max(0.005, 5.0 * abs(gaps.entry().u_n)
            / bogoliubov_dispersion(row.q_n, params.mu_tilde, RB87)), rel=1e-6)


def test_out_of_regime_run_reports_measured_deviation(params, pot):
    # U/E_B = 0.5 is far outside first order.  The run must complete and
    # report the measured deviation; empirically the zone-edge gap is
    # protected to second order (deviation ~ (U/E_B)^2 with the same
    # coefficient measured deep in the perturbative regime), so the row
    # stays within the regime-scaled tolerance rather than failing.
    k_c = pot.components[0].k_c
    u_small = pot.components[0].coefficients[0]
    e_b = bogoliubov_dispersion(k_c / 2.0, params.mu_tilde, RB87)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        big = _single_pot(k_c, 0.5 * e_b)
        gaps = perturbative_gaps(params, big)
        bands = solve_bdg_bands(params.mu_tilde, RB87, big, cutoff=16,
                                check_convergence=False)
    report = oracle_compare(gaps, bands)
    row = report.rows[0]
    assert row.tolerance == pytest.approx(2.5, rel=1e-12)
    assert 0.0 < row.rel_deviation < row.tolerance
    # second-order scaling from the weak-coupling measurement
    dev_small = abs(zone_edge_gap(params.mu_tilde, RB87, pot, cutoff=16).gap
                    - perturbative_gaps(params, pot).entry().gap) \
        / perturbative_gaps(params, pot).entry().gap
    predicted = dev_small * (0.5 * e_b / abs(u_small)) ** 2
    assert row.rel_deviation == pytest.approx(predicted, rel=0.5)


def test_oracle_compare_failed_row_reported_not_thrown(params, pot):
    # A genuine disagreement becomes a failed row, never an exception.
    from casimir_bec.bdg import BdgBands, ZoneEdgeGap

    gaps = perturbative_gaps(params, pot)
    entry = gaps.entry()
    fake = ZoneEdgeGap(fundamental=0, harmonic=1, q_n=entry.q_n, q_bloch=entry.q_n,
                       e_lower=0.0, e_upper=3.0 * entry.gap, gap=3.0 * entry.gap,
                       cutoff=16, mu_tilde=params.mu_tilde)
    bands = BdgBands(q_grid=np.array([entry.q_n]), bands=np.zeros((1, 1)),
                     zone_edge_gaps=(fake,), k_base=2.0 * entry.q_n, cutoff=16,
                     mu_tilde=params.mu_tilde, drift_vs_coarser=0.0, converged=None)
    report = oracle_compare(gaps, bands)
    assert not report.all_pass
    assert report.rows[0].rel_deviation == pytest.approx(2.0, rel=1e-9)


def test_oracle_compare_zero_potential_passes(params, pot):
    k_c = pot.components[0].k_c
    flat = _single_pot(k_c, 0.0)
    gaps = perturbative_gaps(params, flat)
    bands = solve_bdg_bands(params.mu_tilde, RB87, flat, cutoff=8,
                            check_convergence=False)
    report = oracle_compare(gaps, bands)
    assert report.all_pass and report.rows == ()


def test_oracle_compare_contract(params, pot):
    gaps = perturbative_gaps(params, pot)
    bands = solve_bdg_bands(0.5 * params.mu_tilde, RB87, pot, cutoff=8,
                            check_convergence=False)
    with pytest.raises(ContractError):
        oracle_compare(gaps, bands)
