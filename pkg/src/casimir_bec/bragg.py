"""Dynamic structure factor and Bragg momentum-transfer observables.

The homogeneous zero-temperature DSF of the quasi-1D gas is a single
delta line,

    S(q, w) = (N T_q / E_B(q)) * delta(hbar*w - E_B(q)) * hbar^-1-free form,

represented here as one grid bin whose trapezoid weight integrates to
N*F(q) under hbar * integral S dw.  In the trapped cloud each axial slice
contributes at its local energy; integrating over the Thomas-Fermi
profile turns the line into two continuous branches

    S+-(q, w)  proportional to  n1(x*) (T_q/E0(x*)) / |dE+-/dx| at x*,

with hbar*w = E+-(x*, q) defining x*, and

    E+-(x, q) = E0(x, q) +- (T_q / 2 E0(x, q)) U,
    E0(x, q)  = sqrt(T_q^2 + 2 T_q mu_tilde (1 - (2x/L)^2)).

Each branch diverges (integrably, like an inverse square root) where
hbar*w hits the x = 0 energy; that bin is capped and flagged, and branch
weights add the analytic sqrt tail.  Absolute DSF units are arbitrary;
only shapes, edges and markers are meaningful.

The lab observable is the momentum P_X transferred by a two-beam pulse of
detuning w and Heaviside envelope:

    dP_X/dt = -m wx^2 X + sum_n U_n (n k_c) <sin(n k_c x_i)>
              + (hbar q V_B^2 / 2) integral dw' [S(q,w') - S(-q,-w')]
                                   sin((w - w') t) / (w - w').

At zero temperature S(-q,-w') vanishes for w' > 0; a finite-temperature
spectrum can be supplied through dsf_neg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import warnings

import numpy as np
from scipy.optimize import brentq

from .constants import HBAR
from .condensate import (
    Quasi1DParams,
    bogoliubov_dispersion,
    free_kinetic_energy,
)
from .errors import ContractError, PhysicsDomainError
from .spectrum import suppression_factor
from .surface import LateralPotential


@dataclass(frozen=True)
class BraggPulse:
    """Two-photon Bragg drive along x.

    Validity window for reading the DSF off the signal: tau larger than
    hbar/E_B(q) but tau*omega_x < 1 so the LDA stays meaningful, and
    hbar*omega_x << E_B(q).
    """

    q: float      # rad/m, |k1 - k2| projected on x
    omega: float  # rad/s, laser detuning w1 - w2
    v_b: float    # field amplitude (arbitrary units, enters squared)
    tau: float    # s, Heaviside pulse duration

    def __post_init__(self):
        if not self.tau > 0.0:
            raise PhysicsDomainError(f"pulse duration must be > 0, got {self.tau!r}")


@dataclass(frozen=True)
class DsfSpectrum:
    """Sampled S(q, w); branch arrays share the omega grid.

    branch_weights stores hbar * integral S dw per branch, including the
    analytic inverse-square-root tail under the capped resonance bin.
    """

    q: float
    omega: np.ndarray            # rad/s
    s_minus: np.ndarray          # arbitrary units (1/J)
    s_plus: np.ndarray
    resonance_energies: tuple[float, ...]  # J, x = 0 energies per branch
    resonance_bins: tuple[int, ...]
    supports: tuple[tuple[float, float], ...]  # J, (lower, upper) per branch
    branch_weights: tuple[float, ...]
    kind: str                    # "homogeneous" | "lda"
    n_atoms: float

    @property
    def total(self) -> np.ndarray:
        return self.s_minus + self.s_plus


def _trapezoid_node_weights(grid: np.ndarray) -> np.ndarray:
    w = np.empty_like(grid)
    w[1:-1] = 0.5 * (grid[2:] - grid[:-2])
    w[0] = 0.5 * (grid[1] - grid[0])
    w[-1] = 0.5 * (grid[-1] - grid[-2])
    return w


def dsf_homogeneous(q: float, omega_grid, params: Quasi1DParams) -> DsfSpectrum:
    """Delta-line DSF of the homogeneous gas on a discrete grid.

    The bin nearest the resonance carries the full integrated weight
    N * F(q); a grid that misses the resonance is an error.
    """
    omega = np.asarray(omega_grid, dtype=float)
    e_b = bogoliubov_dispersion(q, params.mu_tilde, params.species)
    w_res = e_b / HBAR
    if not omega[0] <= w_res <= omega[-1]:
        raise ContractError(
            f"omega grid [{omega[0]:.6g}, {omega[-1]:.6g}] rad/s does not cover the "
            f"resonance at {w_res:.6g} rad/s"
        )
    weight = params.trap.atom_number * suppression_factor(q, params.mu_tilde, params.species)
    i_res = int(np.argmin(np.abs(omega - w_res)))
    s = np.zeros_like(omega)
    s[i_res] = weight / (HBAR * _trapezoid_node_weights(omega)[i_res])
    return DsfSpectrum(
        q=q, omega=omega, s_minus=s, s_plus=np.zeros_like(omega),
        resonance_energies=(e_b,), resonance_bins=(i_res,),
        supports=((e_b, e_b),), branch_weights=(weight,),
        kind="homogeneous", n_atoms=params.trap.atom_number,
    )


def _local_e0(x: float, t_q: float, mu_tilde: float, half: float) -> float:
    envelope = max(0.0, 1.0 - (x / half) ** 2)
    return math.sqrt(t_q * (t_q + 2.0 * mu_tilde * envelope))


def local_spectrum(x: float, q: float, params: Quasi1DParams, u_n: float, sign: int) -> float:
    """Local branch energy E+-(x, q) in J; sign is +1 or -1.

    u_n enters as given (signed); branch labels follow the formula, not
    the energetic ordering.
    """
    half = params.half_length
    if abs(x) > half:
        raise PhysicsDomainError(f"|x| = {abs(x):.6g} m outside the cloud (l/2 = {half:.6g} m)")
    if sign not in (1, -1):
        raise PhysicsDomainError(f"branch sign must be +1 or -1, got {sign!r}")
    t_q = free_kinetic_energy(q, params.species)
    e0 = _local_e0(x, t_q, params.mu_tilde, half)
    return e0 + sign * (t_q / (2.0 * e0)) * u_n


def _branch_profile(q: float, params: Quasi1DParams, u_abs: float, sign: int):
    """Closures (energy, slope-magnitude, weight) for one LDA branch as
    functions of x in [0, l/2], plus curvature at the origin."""
    half = params.half_length
    t_q = free_kinetic_energy(q, params.species)
    mu = params.mu_tilde
    n_peak = params.peak_density

    if sign > 0 and u_abs >= 2.0 * t_q:
        raise PhysicsDomainError(
            f"|U| = {u_abs:.4g} J >= 2*T_q = {2.0 * t_q:.4g} J: the upper LDA branch "
            "is not monotone and the branch inversion breaks down"
        )

    def energy(x):
        e0 = _local_e0(x, t_q, mu, half)
        return e0 + sign * (t_q / (2.0 * e0)) * u_abs

    def slope_abs(x):
        e0 = _local_e0(x, t_q, mu, half)
        de0 = 2.0 * t_q * mu * x / (half**2 * e0)
        return de0 * abs(1.0 - sign * t_q * u_abs / (2.0 * e0**2))

    def weight(x):
        e0 = _local_e0(x, t_q, mu, half)
        return n_peak * (1.0 - (x / half) ** 2) * t_q / e0

    e0_origin = _local_e0(0.0, t_q, mu, half)
    curvature = (t_q * mu / (half**2 * e0_origin)) * (
        1.0 - sign * t_q * u_abs / (2.0 * e0_origin**2)
    )
    return energy, slope_abs, weight, curvature


def _sample_branch(q, params, u_abs, sign, omega):
    energy, slope_abs, weight, curvature = _branch_profile(q, params, u_abs, sign)
    half = params.half_length
    e_top = energy(0.0)
    e_bottom = energy(half)
    s = np.zeros_like(omega)
    node_w = _trapezoid_node_weights(omega)

    i_res = int(np.argmin(np.abs(omega - e_top / HBAR)))
    amp = weight(0.0) / math.sqrt(curvature)  # S ~ amp / sqrt(e_top - E)

    for i, w in enumerate(omega):
        e_t = HBAR * w
        if i == i_res or not e_bottom <= e_t < e_top:
            continue
        if e_t == e_bottom:
            continue  # weight vanishes there anyway
        x_star = brentq(lambda x: energy(x) - e_t, 0.0, half,
                        xtol=half * 1e-14, rtol=8.9e-16)
        s[i] = 2.0 * weight(x_star) / slope_abs(x_star)

    # Capped, flagged resonance sample: the value half a bin below the
    # divergence, from the analytic sqrt form.
    half_bin = 0.5 * HBAR * node_w[i_res]
    if e_bottom < e_top - 0.25 * half_bin:
        probe = min(half_bin, 0.5 * (e_top - e_bottom))
        s[i_res] = amp / math.sqrt(probe)

    # Branch weight: trapezoid over the regular samples below the
    # divergence plus the analytic tail of the integrable singularity
    # over [last regular sample, e_top].  Integrating on the sub-grid
    # keeps the capped bin out of the quadrature entirely.
    inside = (HBAR * omega >= e_bottom) & (HBAR * omega < e_top)
    inside[i_res] = False
    e_regular = HBAR * omega[inside]
    if e_regular.size >= 2:
        regular = float(np.trapezoid(s[inside], e_regular))
        e_last = float(e_regular[-1])
    else:
        regular = 0.0
        e_last = e_bottom
    tail = 2.0 * amp * math.sqrt(max(0.0, e_top - e_last))
    return s, i_res, (e_bottom, e_top), regular + tail


def dsf_lda(q: float, omega_grid, params: Quasi1DParams, u_n: float) -> DsfSpectrum:
    """Two-branch LDA structure factor of the trapped cloud.

    u_n is the lateral Fourier coefficient matched to the probed
    wavenumber; its magnitude sets the branch splitting (labels are
    energy-ordered).  u_n = 0 collapses to a single branch stored in
    s_minus.
    """
    omega = np.asarray(omega_grid, dtype=float)
    if omega.size < 8 or np.any(np.diff(omega) <= 0.0):
        raise ContractError("omega grid must be increasing with at least 8 points")
    u_abs = abs(u_n)
    if u_abs == 0.0:
        s, i_res, support, w = _sample_branch(q, params, 0.0, -1, omega)
        return DsfSpectrum(
            q=q, omega=omega, s_minus=s, s_plus=np.zeros_like(omega),
            resonance_energies=(support[1],), resonance_bins=(i_res,),
            supports=(support,), branch_weights=(w,),
            kind="lda", n_atoms=params.trap.atom_number,
        )
    s_minus, i_minus, sup_minus, w_minus = _sample_branch(q, params, u_abs, -1, omega)
    s_plus, i_plus, sup_plus, w_plus = _sample_branch(q, params, u_abs, +1, omega)
    return DsfSpectrum(
        q=q, omega=omega, s_minus=s_minus, s_plus=s_plus,
        resonance_energies=(sup_minus[1], sup_plus[1]),
        resonance_bins=(i_minus, i_plus),
        supports=(sup_minus, sup_plus),
        branch_weights=(w_minus, w_plus),
        kind="lda", n_atoms=params.trap.atom_number,
    )


@dataclass(frozen=True)
class BraggSignal:
    """Momentum-transfer time series over one pulse, with the term split."""

    times: np.ndarray       # s
    dpdt: np.ndarray        # kg m/s^2 (arbitrary through V_B^2)
    dpdt_drive: np.ndarray
    dpdt_trap: np.ndarray
    dpdt_sine: np.ndarray
    p_x: np.ndarray         # kg m/s
    x: np.ndarray | None    # m, only with the closure enabled
    pulse: BraggPulse


def _drive_at(times, pulse: BraggPulse, dsf_pos: DsfSpectrum,
              dsf_neg: DsfSpectrum | None) -> np.ndarray:
    """(hbar q V^2/2) * integral dw' [S(q,w') - S(-q,-w')] sin((w-w')t)/(w-w')."""
    t = np.asarray(times, dtype=float)[:, None]
    prefactor = HBAR * pulse.q * pulse.v_b**2 / 2.0

    def kernel(delta):
        # sin(delta*t)/delta, exact at delta = 0
        return t * np.sinc(delta[None, :] * t / math.pi)

    def check_support(dsf):
        s = dsf.total
        peak = float(np.max(s))
        if peak > 0.0 and (s[0] > 1e-12 * peak or s[-1] > 1e-12 * peak):
            raise ContractError(
                "DSF support is clipped by its omega grid; the drive kernel "
                "integral cannot converge - extend the window"
            )
        step = float(np.max(np.diff(dsf.omega)))
        if step > 1.0 / pulse.tau:
            warnings.warn(
                f"omega grid step {step:.3g} rad/s exceeds 1/tau = {1.0 / pulse.tau:.3g} "
                "rad/s; the oscillating kernel is under-resolved",
                stacklevel=3,
            )

    check_support(dsf_pos)
    node_w = _trapezoid_node_weights(dsf_pos.omega)
    drive = prefactor * (kernel(pulse.omega - dsf_pos.omega) @ (dsf_pos.total * node_w))
    if dsf_neg is not None:
        check_support(dsf_neg)
        node_w_neg = _trapezoid_node_weights(dsf_neg.omega)
        drive = drive - prefactor * (
            kernel(pulse.omega + dsf_neg.omega) @ (dsf_neg.total * node_w_neg)
        )
    return drive


def _sine_term(pot: LateralPotential | None, params: Quasi1DParams,
               displacement: float) -> float:
    """sum_n U_n (n k_c) <sin(n k_c x)> over the TF cloud displaced by
    `displacement`; exactly zero at equilibrium by parity."""
    if pot is None or displacement == 0.0:
        return 0.0
    half = params.half_length
    x = np.linspace(-half + displacement, half + displacement, 2**13)
    n1 = params.peak_density * np.maximum(0.0, 1.0 - ((x - displacement) / half) ** 2)
    total = 0.0
    for comp in pot.components:
        for n, u in enumerate(comp.coefficients, start=1):
            if u != 0.0:
                total += u * (n * comp.k_c) * float(np.trapezoid(n1 * np.sin(n * comp.k_c * x), x))
    return total


def bragg_signal(
    pulse: BraggPulse,
    dsf_pos: DsfSpectrum,
    params: Quasi1DParams,
    dsf_neg: DsfSpectrum | None = None,
    pot: LateralPotential | None = None,
    displacement: float = 0.0,
    closure: bool = False,
    n_time: int = 512,
) -> BraggSignal:
    """Integrate dP_X/dt over the pulse.

    dsf_neg is the finite-temperature hook for S(-q,-w'); at zero
    temperature (default) that term is identically zero for w' > 0.  The
    trap term needs X(t), which the bare equation does not provide; with
    closure=True the center of mass follows dX/dt = P_X/(N m), otherwise
    X stays at 0 and the trap term vanishes.  The Casimir sine term is
    evaluated over the (optionally displaced) TF density and vanishes at
    equilibrium by parity.
    """
    if dsf_pos is None:
        raise ContractError("bragg_signal needs the +q spectrum")
    times = np.linspace(0.0, pulse.tau, n_time)
    drive = _drive_at(times, pulse, dsf_pos, dsf_neg) if pulse.v_b != 0.0 else np.zeros_like(times)
    sine = _sine_term(pot, params, displacement)
    sine_arr = np.full_like(times, sine)

    m_total = params.trap.atom_number * params.species.mass
    omega_x = params.trap.omega_x
    if closure:
        dt = times[1] - times[0]
        drive_mid = (
            _drive_at(times + dt / 2.0, pulse, dsf_pos, dsf_neg)
            if pulse.v_b != 0.0 else np.zeros_like(times)
        )
        x_of_t = np.zeros_like(times)
        p_of_t = np.zeros_like(times)
        x_now, p_now = 0.0, 0.0

        # x is the center-of-mass displacement: dX/dt = P/(N m) and the
        # trap pulls with -N m wx^2 X, so free sloshing runs at omega_x.
        def rhs(state, d):
            x_s, p_s = state
            return np.array([p_s / m_total, -m_total * omega_x**2 * x_s + sine + d])

        for i in range(len(times) - 1):
            d0, dm, d1 = drive[i], drive_mid[i], drive[i + 1]
            state = np.array([x_now, p_now])
            k1 = rhs(state, d0)
            k2 = rhs(state + 0.5 * dt * k1, dm)
            k3 = rhs(state + 0.5 * dt * k2, dm)
            k4 = rhs(state + dt * k3, d1)
            state = state + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            x_now, p_now = state
            x_of_t[i + 1] = x_now
            p_of_t[i + 1] = p_now
        trap_arr = -m_total * omega_x**2 * x_of_t
        dpdt = trap_arr + sine_arr + drive
        return BraggSignal(times=times, dpdt=dpdt, dpdt_drive=drive, dpdt_trap=trap_arr,
                           dpdt_sine=sine_arr, p_x=p_of_t, x=x_of_t, pulse=pulse)

    trap_arr = np.zeros_like(times)
    dpdt = trap_arr + sine_arr + drive
    p_x = np.concatenate(([0.0], np.cumsum(0.5 * (dpdt[1:] + dpdt[:-1]) * np.diff(times))))
    return BraggSignal(times=times, dpdt=dpdt, dpdt_drive=drive, dpdt_trap=trap_arr,
                       dpdt_sine=sine_arr, p_x=p_x, x=None, pulse=pulse)


def invert_gap(measured_gap: float, q_n: float, params: Quasi1DParams) -> float:
    """|U_n| = gap / F(q_n): read a Casimir Fourier coefficient off a
    measured gap.  Exact algebraic inverse of the perturbative gap."""
    if measured_gap < 0.0:
        raise PhysicsDomainError(f"measured gap must be >= 0, got {measured_gap!r}")
    if q_n == 0.0:
        raise PhysicsDomainError("q_n = 0 has zero suppression factor; gap is not invertible")
    f_q = suppression_factor(q_n, params.mu_tilde, params.species)
    if f_q <= 0.0:
        raise PhysicsDomainError(f"suppression factor vanishes at q_n = {q_n!r}")
    return measured_gap / f_q
