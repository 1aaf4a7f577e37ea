"""Exact Bogoliubov-de Gennes bands in a plane-wave Bloch basis.

With the Thomas-Fermi background density (mu_tilde - U_L(x))/g_eff, the
coupled equations for (u, v*) at energy E are

    E u  =  T u + A(x) (u + v*),     -E v* = T v* + A(x) (u + v*),

with A(x) = mu_tilde - U_L(x) and T the kinetic operator.  Expanding in
plane waves exp(i (q_b + n k_base) x), n = -M..M, gives the non-symmetric
block eigenproblem

    H = [[T + A,  A], [-A, -(T + A)]],

where T is diagonal and A carries mu_tilde on the diagonal and -U_m/2 on
the m-th off-diagonals.  Dense diagonalization of H is the brute-force
oracle for every perturbative gap in spectrum.py.  Two corrugation
fundamentals must be commensurate (ratio p/r with p, r <= 64) so a common
Bloch period exists.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import HBAR
from .errors import ContractError, InstabilityError, UnsupportedConfigurationError
from .species import AtomSpecies
from .surface import LateralPotential

# Eigenvalues with |Im E| below this fraction of mu_tilde are numerical
# noise; anything larger is a genuine dynamical instability.
_IMAG_TOL = 1e-8
_COMMENSURATE_MAX = 64


def reduce_to_common_base(pot: LateralPotential) -> tuple[float, dict[int, float]]:
    """Common Bloch wavenumber k_base and the potential coefficients as
    {multiple of k_base: U in J}."""
    comps = pot.components
    if len(comps) == 1:
        coeffs = {n: u for n, u in enumerate(comps[0].coefficients, start=1) if u != 0.0}
        return comps[0].k_c, coeffs
    if len(comps) != 2:
        raise UnsupportedConfigurationError(
            f"BdG supports one or two corrugation fundamentals, got {len(comps)}"
        )
    k_a, k_b = comps[0].k_c, comps[1].k_c
    ratio = k_b / k_a
    frac = Fraction(ratio).limit_denominator(_COMMENSURATE_MAX)
    p, r = frac.numerator, frac.denominator
    if p < 1 or p > _COMMENSURATE_MAX or abs(float(frac) - ratio) > 1e-9 * ratio:
        raise UnsupportedConfigurationError(
            f"fundamentals with k_c ratio {ratio!r} are not commensurate as p/r with "
            f"p, r <= {_COMMENSURATE_MAX}; no common Bloch period exists"
        )
    k_base = k_a / r
    coeffs: dict[int, float] = {}
    for comp, mult in ((comps[0], r), (comps[1], p)):
        for n, u in enumerate(comp.coefficients, start=1):
            if u != 0.0:
                coeffs[n * mult] = coeffs.get(n * mult, 0.0) + u
    return k_base, coeffs


@dataclass(frozen=True)
class BdgProblem:
    """One Bloch-momentum diagonalization of dimension 2*(2*cutoff + 1)."""

    mu_tilde: float
    species: AtomSpecies
    k_base: float                          # rad/m
    potential: tuple[tuple[int, float], ...]  # (multiple of k_base, U in J)
    q_bloch: float                         # rad/m
    cutoff: int                            # M, plane waves n = -M..M

    def __post_init__(self):
        if self.cutoff < 1:
            raise UnsupportedConfigurationError(f"plane-wave cutoff must be >= 1, got {self.cutoff}")
        if self.cutoff < 4:
            # The minimal M = 1 basis (dimension 6) reproduces the two-state
            # reduction but nothing here is converged below M ~ 4.
            warnings.warn(f"plane-wave cutoff M = {self.cutoff} < 4 is below the "
                          "convergence floor", stacklevel=2)
        if not self.k_base > 0.0:
            raise UnsupportedConfigurationError(f"k_base must be > 0, got {self.k_base!r}")
        total = sum(abs(u) for _, u in self.potential)
        if total >= self.mu_tilde:
            warnings.warn(
                f"sum |U_n| = {total:.4g} J >= mu_tilde = {self.mu_tilde:.4g} J: "
                "TF background is not positive everywhere; expect an instability error",
                stacklevel=2,
            )

    @property
    def dimension(self) -> int:
        return 2 * (2 * self.cutoff + 1)


def build_bdg(problem: BdgProblem) -> np.ndarray:
    """Assemble the dense block matrix [[T+A, A], [-A, -(T+A)]]."""
    m = problem.cutoff
    n_pw = 2 * m + 1
    indices = np.arange(-m, m + 1)
    momenta = problem.q_bloch + indices * problem.k_base
    t = np.diag((HBAR * momenta) ** 2 / (2.0 * problem.species.mass))
    a = problem.mu_tilde * np.eye(n_pw)
    for mult, u in problem.potential:
        if mult <= 2 * m:
            a += (-u / 2.0) * (np.eye(n_pw, k=mult) + np.eye(n_pw, k=-mult))
    return np.block([[t + a, a], [-a, -(t + a)]])


def solve_bdg(problem: BdgProblem, return_vectors: bool = False):
    """All eigenvalues (real, ascending).  With return_vectors, also the
    right eigenvectors in matching order."""
    h = build_bdg(problem)
    if return_vectors:
        values, vectors = np.linalg.eig(h)
    else:
        values = np.linalg.eigvals(h)
        vectors = None
    # Noise floor scales with the matrix norm: the top bands sit far above
    # mu_tilde at large cutoffs.  Genuine instabilities show |Im E| on the
    # scale of mu_tilde itself, orders of magnitude above this.
    imag_scale = _IMAG_TOL * max(problem.mu_tilde, float(np.max(np.abs(values.real))))
    imag_max = float(np.max(np.abs(values.imag)))
    if imag_max > imag_scale:
        raise InstabilityError(
            f"BdG spectrum has complex eigenvalues (max |Im E| = {imag_max:.4g} J, "
            f"tolerance {imag_scale:.4g} J): background is not TF-stable or the "
            "lateral potential is too large"
        )
    order = np.argsort(values.real)
    if return_vectors:
        return values.real[order], vectors[:, order]
    return values.real[order]


def positive_branch(values: np.ndarray, mu_tilde: float) -> np.ndarray:
    """Non-negative eigenvalues, ascending; tiny negatives from roundoff
    are clipped to zero."""
    tol = 1e-12 * max(mu_tilde, float(np.max(np.abs(values))))
    kept = values[values > -tol]
    return np.sort(np.clip(kept, 0.0, None))


@dataclass(frozen=True)
class ZoneEdgeGap:
    fundamental: int
    harmonic: int
    q_n: float        # rad/m
    q_bloch: float    # rad/m, folded
    e_lower: float    # J
    e_upper: float    # J
    gap: float        # J
    cutoff: int
    mu_tilde: float

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.e_lower + self.e_upper)


def _fold(q: float, k_base: float) -> float:
    return q - round(q / k_base) * k_base


def zone_edge_gap(
    mu_tilde: float,
    species: AtomSpecies,
    pot: LateralPotential,
    harmonic: int = 1,
    fundamental: int = 0,
    cutoff: int = 16,
) -> ZoneEdgeGap:
    """Splitting of the pair of quasiparticles at +-n*k_c/2.

    The two positive-energy eigenstates with the largest plane-wave weight
    on the pair define the gap; for a single fundamental these are simply
    the two lowest bands at the zone edge.
    """
    k_base, coeffs = reduce_to_common_base(pot)
    comp = pot.components[fundamental]
    q_n = harmonic * comp.k_c / 2.0
    q_b = _fold(q_n, k_base)
    problem = BdgProblem(
        mu_tilde=mu_tilde, species=species, k_base=k_base,
        potential=tuple(sorted(coeffs.items())), q_bloch=q_b, cutoff=cutoff,
    )
    values, vectors = solve_bdg(problem, return_vectors=True)

    m = problem.cutoff
    n_pw = 2 * m + 1
    slots = []
    for target in (q_n, -q_n):
        j = round((target - q_b) / k_base)
        if abs(j) > m or abs(q_b + j * k_base - target) > 1e-6 * k_base:
            raise UnsupportedConfigurationError(
                f"cutoff M = {m} does not cover the zone-edge state at {target:.6g} rad/m"
            )
        slots.append(j + m)

    positive = np.flatnonzero(values > 1e-12 * mu_tilde)
    weights = np.abs(vectors[:n_pw, positive]) ** 2 + np.abs(vectors[n_pw:, positive]) ** 2
    weights /= np.sum(weights, axis=0)
    scores = weights[slots[0], :] + weights[slots[1], :]
    top_two = positive[np.argsort(scores)[-2:]]
    e_pair = np.sort(values[top_two])
    return ZoneEdgeGap(
        fundamental=fundamental, harmonic=harmonic, q_n=q_n, q_bloch=q_b,
        e_lower=float(e_pair[0]), e_upper=float(e_pair[1]),
        gap=float(e_pair[1] - e_pair[0]), cutoff=cutoff, mu_tilde=mu_tilde,
    )


@dataclass(frozen=True)
class BdgBands:
    """Positive-branch bands on a Bloch-momentum grid plus gap estimates."""

    q_grid: np.ndarray
    bands: np.ndarray  # shape (len(q_grid), n_bands), J
    zone_edge_gaps: tuple[ZoneEdgeGap, ...]
    k_base: float
    cutoff: int
    mu_tilde: float
    drift_vs_coarser: float        # max relative gap change from cutoff-2
    converged: bool | None         # doubling the cutoff moves gaps < 0.1%


def _all_zone_edge_gaps(mu_tilde, species, pot, cutoff):
    gaps = []
    for i, comp in enumerate(pot.components):
        for n, u in enumerate(comp.coefficients, start=1):
            if u != 0.0:
                gaps.append(zone_edge_gap(mu_tilde, species, pot, harmonic=n,
                                          fundamental=i, cutoff=cutoff))
    return tuple(gaps)


def solve_bdg_bands(
    mu_tilde: float,
    species: AtomSpecies,
    pot: LateralPotential,
    q_grid=None,
    cutoff: int = 16,
    n_bands: int = 8,
    check_convergence: bool = True,
) -> BdgBands:
    """Bands over the first Brillouin zone of the common period, with
    zone-edge gap estimates and cutoff-convergence metadata."""
    k_base, coeffs = reduce_to_common_base(pot)
    if q_grid is None:
        q_grid = np.linspace(-k_base / 2.0, k_base / 2.0, 33)
    q_grid = np.asarray(q_grid, dtype=float)
    potential = tuple(sorted(coeffs.items()))

    bands = np.empty((len(q_grid), n_bands))
    for i, q_b in enumerate(q_grid):
        problem = BdgProblem(mu_tilde=mu_tilde, species=species, k_base=k_base,
                             potential=potential, q_bloch=float(q_b), cutoff=cutoff)
        pos = positive_branch(solve_bdg(problem), mu_tilde)
        bands[i, :] = pos[:n_bands]

    gaps = _all_zone_edge_gaps(mu_tilde, species, pot, cutoff)

    def max_rel_change(other):
        worst = 0.0
        for a, b in zip(gaps, other):
            if a.gap > 0.0:
                worst = max(worst, abs(b.gap - a.gap) / a.gap)
        return worst

    drift = 0.0
    converged = None
    if gaps:
        coarser = _all_zone_edge_gaps(mu_tilde, species, pot, max(4, cutoff - 2))
        drift = max_rel_change(coarser)
        if check_convergence:
            doubled = _all_zone_edge_gaps(mu_tilde, species, pot, 2 * cutoff)
            converged = max_rel_change(doubled) < 1e-3
    return BdgBands(q_grid=q_grid, bands=bands, zone_edge_gaps=gaps, k_base=k_base,
                    cutoff=cutoff, mu_tilde=mu_tilde, drift_vs_coarser=drift,
                    converged=converged)


@dataclass(frozen=True)
class GapComparison:
    fundamental: int
    harmonic: int
    q_n: float
    gap_perturbative: float  # J
    gap_numeric: float       # J
    rel_deviation: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[GapComparison, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)


def oracle_compare(pert, numeric: BdgBands) -> ComparisonReport:
    """Perturbative gaps against the exact diagonalization.

    Tolerance per gap is max(0.5%, 5 * |U_n|/E_B(q_n)), the empirically
    measured second-order envelope.  Mismatched physical parameters raise
    ContractError; an out-of-tolerance gap is reported as a failed row,
    never thrown.
    """
    if abs(pert.mu_tilde - numeric.mu_tilde) > 1e-9 * pert.mu_tilde:
        raise ContractError(
            f"mu_tilde mismatch: perturbative {pert.mu_tilde!r} vs BdG {numeric.mu_tilde!r}"
        )
    by_key = {(g.fundamental, g.harmonic): g for g in numeric.zone_edge_gaps}
    rows = []
    for entry in pert.entries:
        gap_num = by_key.get((entry.fundamental, entry.harmonic))
        if gap_num is None:
            raise ContractError(
                f"BdG result lacks the gap for fundamental {entry.fundamental}, "
                f"harmonic {entry.harmonic}"
            )
        if abs(gap_num.q_n - entry.q_n) > 1e-9 * entry.q_n:
            raise ContractError(
                f"zone-edge mismatch: {entry.q_n!r} vs {gap_num.q_n!r} rad/m"
            )
        u_over_eb = entry.gap_over_eb / entry.f_qn if entry.f_qn > 0.0 else 0.0
        tolerance = max(0.005, 5.0 * u_over_eb)
        if entry.gap > 0.0:
            deviation = abs(gap_num.gap - entry.gap) / entry.gap
        else:
            deviation = abs(gap_num.gap)
        rows.append(GapComparison(
            fundamental=entry.fundamental, harmonic=entry.harmonic, q_n=entry.q_n,
            gap_perturbative=entry.gap, gap_numeric=gap_num.gap,
            rel_deviation=deviation, tolerance=tolerance,
            passed=deviation <= tolerance,
        ))
    return ComparisonReport(rows=tuple(rows))
