"""First-order band structure of the Casimir-modulated condensate.

A weak lateral potential sum_n U_n cos(n*k_c*x) opens gaps in the
Bogoliubov spectrum at the zone edges q_n = n*k_c/2:

    gap_n = |U_n| * F(q_n),    F(q) = T_q / E_B(q),

where F is the dimensionless suppression factor (phonon-regime screening
of the external potential).  Near a zone edge the two almost-degenerate
quasiparticles at n*k_c/2 + eps and -n*k_c/2 + eps mix through the
coupling -(U_n/2) * sqrt(F(q1) F(q2)); diagonalizing that two-state block
gives the branches E-(q) <= E+(q).  Two corrugation fundamentals whose
zone edges come closer than dk_min ~ k_c * U/E_B mix into one larger
near-degenerate block.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .condensate import (
    Quasi1DParams,
    bogoliubov_dispersion,
    free_kinetic_energy,
)
from .errors import PhysicsDomainError, UnsupportedConfigurationError
from .species import AtomSpecies
from .surface import LateralPotential

# Relative momentum tolerance for identifying degenerate/coupled states.
_K_TOL = 1e-9


def suppression_factor(q, mu_tilde: float, species: AtomSpecies):
    """F(q) = T_q / E_B(q); 0 at q = 0 by continuity, -> 1 deep in the
    particle-like regime q >> k_mu."""
    q_arr = np.asarray(q, dtype=float)
    t = np.asarray(free_kinetic_energy(q_arr, species))
    e = np.asarray(bogoliubov_dispersion(q_arr, mu_tilde, species))
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(q_arr == 0.0, 0.0, t / np.where(e == 0.0, 1.0, e))
    return float(f) if np.isscalar(q) or q_arr.ndim == 0 else f


@dataclass(frozen=True)
class GapEntry:
    fundamental: int   # index into the potential's components
    harmonic: int      # n
    k_c: float         # rad/m
    q_n: float         # n*k_c/2, rad/m
    u_n: float         # J, signed coefficient
    f_qn: float
    gap: float         # J, |u_n| * f_qn
    gap_over_eb: float


@dataclass(frozen=True)
class GapReport:
    species_name: str
    mu_tilde: float
    entries: tuple[GapEntry, ...]

    def entry(self, fundamental: int = 0, harmonic: int = 1) -> GapEntry:
        for e in self.entries:
            if e.fundamental == fundamental and e.harmonic == harmonic:
                return e
        raise KeyError(f"no gap entry for fundamental {fundamental}, harmonic {harmonic}")


def perturbative_gaps(params: Quasi1DParams, pot: LateralPotential) -> GapReport:
    """One gap entry per nonzero Fourier coefficient of the lateral potential."""
    entries = []
    for i, comp in enumerate(pot.components):
        for n, u_n in enumerate(comp.coefficients, start=1):
            if u_n == 0.0:
                continue
            q_n = n * comp.k_c / 2.0
            e_b = bogoliubov_dispersion(q_n, params.mu_tilde, params.species)
            ratio = abs(u_n) / e_b
            if ratio > 0.1:
                warnings.warn(
                    f"|U_{n}|/E_B(q_{n}) = {ratio:.3g} > 0.1: first-order gap formula "
                    "is outside its comfort zone",
                    stacklevel=2,
                )
            f_qn = suppression_factor(q_n, params.mu_tilde, params.species)
            gap = abs(u_n) * f_qn
            entries.append(GapEntry(
                fundamental=i, harmonic=n, k_c=comp.k_c, q_n=q_n, u_n=u_n,
                f_qn=f_qn, gap=gap, gap_over_eb=gap / e_b,
            ))
    return GapReport(species_name=params.species.name, mu_tilde=params.mu_tilde,
                     entries=tuple(entries))


@dataclass(frozen=True)
class BranchSlice:
    harmonic: int
    q_n: float
    detunings: np.ndarray  # rad/m, relative to the zone edge
    e_minus: np.ndarray    # J
    e_plus: np.ndarray     # J
    gap: float             # J, splitting at zero detuning


def two_state_coupling(q1: float, q2: float, u_n: float, mu_tilde: float,
                       species: AtomSpecies) -> float:
    """Off-diagonal element between Bogoliubov states q1 and q2 coupled by a
    potential coefficient u_n: -(u_n/2) * sqrt(F(|q1|) F(|q2|))."""
    f1 = suppression_factor(abs(q1), mu_tilde, species)
    f2 = suppression_factor(abs(q2), mu_tilde, species)
    return -(u_n / 2.0) * math.sqrt(f1 * f2)


def band_branches(
    params: Quasi1DParams,
    pot: LateralPotential,
    harmonic: int = 1,
    detunings=None,
    fundamental: int = 0,
) -> BranchSlice:
    """Branches E+-(q_n + eps) from the degenerate two-state block.

    Reported only for |eps| <= k_c/4, the neighborhood where the two-state
    reduction makes sense.
    """
    comp = pot.components[fundamental]
    if not 1 <= harmonic <= len(comp.coefficients):
        raise PhysicsDomainError(f"harmonic {harmonic} not present in the potential")
    u_n = comp.coefficients[harmonic - 1]
    q_n = harmonic * comp.k_c / 2.0
    if detunings is None:
        detunings = np.linspace(-comp.k_c / 4.0, comp.k_c / 4.0, 129)
    eps = np.asarray(detunings, dtype=float)
    if np.any(np.abs(eps) > comp.k_c / 4.0 * (1.0 + 1e-12)):
        raise PhysicsDomainError("detuning outside |eps| <= k_c/4")

    mu, sp = params.mu_tilde, params.species
    e_minus = np.empty_like(eps)
    e_plus = np.empty_like(eps)
    for i, e in enumerate(eps):
        q1, q2 = q_n + e, -q_n + e
        d1 = bogoliubov_dispersion(abs(q1), mu, sp)
        d2 = bogoliubov_dispersion(abs(q2), mu, sp)
        c = two_state_coupling(q1, q2, u_n, mu, sp)
        mean, half = 0.5 * (d1 + d2), 0.5 * (d1 - d2)
        split = math.hypot(half, c)
        e_minus[i], e_plus[i] = mean - split, mean + split
    gap = abs(u_n) * suppression_factor(q_n, mu, sp)
    return BranchSlice(harmonic=harmonic, q_n=q_n, detunings=eps,
                       e_minus=e_minus, e_plus=e_plus, gap=gap)


def gap_high_density(mu: float, omega_r: float, k_c: float, u_n: float,
                     species: AtomSpecies) -> float:
    """Gap in the high-density (radial TF) regime:
    (3*hbar*omega_r / 4*mu) * (k_c*R/2) * |u_n|, R = sqrt(2*mu/(m*omega_r^2)).

    These gaps shrink with density; the regime is a dead end for Bragg
    detection and is provided for completeness of the trade-off analysis.
    """
    if not mu > 0.0:
        raise PhysicsDomainError(f"chemical potential must be > 0, got {mu!r}")
    if mu / (HBAR * omega_r) < 5.0:
        warnings.warn(
            f"mu/(hbar*omega_r) = {mu / (HBAR * omega_r):.3g} < 5: high-density "
            "formula assumes radial TF",
            stacklevel=2,
        )
    radius = math.sqrt(2.0 * mu / (species.mass * omega_r**2))
    return (3.0 * HBAR * omega_r / (4.0 * mu)) * (k_c * radius / 2.0) * abs(u_n)


def multibranch_dispersion(n: int, q: float, mu: float, omega_r: float,
                           species: AtomSpecies) -> float:
    """Radial-branch dispersion of the dense cylindrical cloud:
    E^2 = 2*(hbar*omega_r)^2 * n*(n+1) + (q*R)^2 * (hbar*omega_r/2)^2,
    valid to O((qR)^4)."""
    if n < 0:
        raise PhysicsDomainError(f"radial quantum number must be >= 0, got {n}")
    if not mu > 0.0:
        raise PhysicsDomainError(f"chemical potential must be > 0, got {mu!r}")
    radius = math.sqrt(2.0 * mu / (species.mass * omega_r**2))
    if abs(q) * radius > 1.0:
        warnings.warn(f"q*R = {abs(q) * radius:.3g} > 1: expansion in (qR)^2 degrades",
                      stacklevel=2)
    return math.sqrt(
        2.0 * (HBAR * omega_r) ** 2 * n * (n + 1)
        + (q * radius) ** 2 * (HBAR * omega_r / 2.0) ** 2
    )


def min_resolvable_separation(k_c: float, u: float, e0: float) -> float:
    """dk_min ~ k_c * U/E0: fundamentals closer than this mix."""
    if not e0 > 0.0:
        raise PhysicsDomainError(f"reference energy must be > 0, got {e0!r}")
    return k_c * abs(u) / e0

# Operationalizes ">> dk_min": separations beyond this factor count as
# independent two-state problems.
MIXING_SEPARATION_FACTOR = 10.0


@dataclass(frozen=True)
class CoupledModeReport:
    momenta: tuple[float, ...]          # rad/m, basis states of the block
    eigenvalues: np.ndarray             # J, sorted ascending
    splittings: tuple[float, float]     # J, per fundamental
    independent_gaps: tuple[float, float]  # J, isolated 2x2 results
    deviations: tuple[float, float]     # relative, splitting/independent - 1
    dk_min: float                       # rad/m
    separation_over_dk_min: float
    mixing_regime: bool


def coupled_mode_gaps(params: Quasi1DParams, pot: LateralPotential) -> CoupledModeReport:
    """Near-degenerate block for two corrugation fundamentals.

    Basis: the zone-edge seeds +-k_c1/2, +-k_c2/2 plus every state one
    coupling hop away that stays in the near-degenerate energy window,
    deduplicated (6 states for well-separated commensurate pairs such as
    k_c2 = 3*k_c1, 8 when the fundamentals nearly coincide).  Couplings
    between basis states q_i, q_j are -(U_f/2)*sqrt(F_i F_j) whenever
    |q_i - q_j| matches a fundamental k_cf.  Correctness is anchored to
    the exact BdG diagonalization, not to the block size.
    """
    if len(pot.components) != 2:
        raise UnsupportedConfigurationError(
            f"coupled-mode analysis needs exactly two fundamentals, got {len(pot.components)}"
        )
    for comp in pot.components:
        nonzero = [n for n, u in enumerate(comp.coefficients, start=1) if u != 0.0]
        if nonzero not in ([], [1]):
            raise UnsupportedConfigurationError(
                "coupled-mode analysis supports a single leading harmonic per fundamental"
            )

    mu, sp = params.mu_tilde, params.species
    k1, k2 = (comp.k_c for comp in pot.components)
    u1 = pot.components[0].coefficients[0]
    u2 = pot.components[1].coefficients[0]
    couplings = [(k1, u1), (k2, u2)]

    def push(momenta_list, q):
        for q_have in momenta_list:
            if math.isclose(q, q_have, rel_tol=_K_TOL, abs_tol=_K_TOL * max(k1, k2)):
                return
        momenta_list.append(q)

    seeds = []
    for s in (k1 / 2.0, -k1 / 2.0, k2 / 2.0, -k2 / 2.0):
        push(seeds, s)
    e_window = 2.0 * max(bogoliubov_dispersion(abs(s), mu, sp) for s in seeds)
    momenta = list(seeds)
    for s in seeds:
        for k_f, _ in couplings:
            for cand in (s + k_f, s - k_f):
                if bogoliubov_dispersion(abs(cand), mu, sp) <= e_window:
                    push(momenta, cand)
    momenta.sort()

    dim = len(momenta)
    h = np.zeros((dim, dim))
    for i, qi in enumerate(momenta):
        h[i, i] = bogoliubov_dispersion(abs(qi), mu, sp)
        for j in range(i + 1, dim):
            qj = momenta[j]
            value = 0.0
            for k_f, u_f in couplings:
                if math.isclose(abs(qi - qj), k_f, rel_tol=_K_TOL):
                    value += two_state_coupling(qi, qj, u_f, mu, sp)
            h[i, j] = h[j, i] = value
    eigenvalues, vectors = np.linalg.eigh(h)

    def splitting_for(k_f: float) -> float:
        targets = [k_f / 2.0, -k_f / 2.0]
        weights = np.zeros(dim)
        for t in targets:
            for i, qi in enumerate(momenta):
                if math.isclose(qi, t, rel_tol=_K_TOL, abs_tol=_K_TOL * k_f):
                    weights += vectors[i, :] ** 2
        top_two = np.argsort(weights)[-2:]
        return float(abs(eigenvalues[top_two[0]] - eigenvalues[top_two[1]]))

    independent = tuple(
        abs(u_f) * suppression_factor(k_f / 2.0, mu, sp) for k_f, u_f in couplings
    )
    splittings = (splitting_for(k1), splitting_for(k2))
    deviations = tuple(
        s / g - 1.0 if g > 0.0 else 0.0 for s, g in zip(splittings, independent)
    )

    e1 = bogoliubov_dispersion(k1 / 2.0, mu, sp)
    dk_min = min_resolvable_separation(k1, abs(u1), e1)
    separation = abs(k1 - k2)
    sep_ratio = separation / dk_min if dk_min > 0.0 else math.inf
    return CoupledModeReport(
        momenta=tuple(momenta),
        eigenvalues=eigenvalues,
        splittings=splittings,
        independent_gaps=independent,
        deviations=deviations,
        dk_min=dk_min,
        separation_over_dk_min=sep_ratio,
        mixing_regime=sep_ratio < MIXING_SEPARATION_FACTOR,
    )
