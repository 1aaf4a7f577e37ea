"""Lateral Casimir-Polder potential above a corrugated surface.

A uniaxial corrugation h(x) = sum_j h_j cos(j*k_c*x) produces, to first
order in h, a lateral potential

    U_L(x, z) = sum_j h_j cos(j*k_c*x) g(j*k_c, z),

where g(k, z) is the response function mapping a profile Fourier amplitude
at wavenumber k to a potential amplitude at separation z.  For a perfect
reflector in the retarded limit

    g(k, z) = -(3*hbar*c*alpha0 / (8*pi^2*eps0*z^5))
              * exp(-Z) * (1 + Z + 16*Z^2/45 + Z^3/45),   Z = k*z,

with alpha0/eps0 the static polarizability volume.  Real materials enter
through a scalar conductivity factor eta_F in [0, 1], or through an
externally tabulated g(k, z).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .constants import C, HBAR
from .errors import ConfigurationError, ExtrapolationError, PhysicsDomainError
from .species import AtomSpecies


@dataclass(frozen=True)
class Corrugation:
    """One Fourier family of the surface profile: sum_j h_j cos(j*k_c*x)."""

    k_c: float                     # fundamental wavenumber, rad/m
    amplitudes: tuple[float, ...]  # h_j in m, j = 1..J

    def __post_init__(self):
        if not self.k_c > 0.0:
            raise ConfigurationError(f"corrugation wavenumber must be > 0, got {self.k_c!r}")
        if len(self.amplitudes) == 0:
            raise ConfigurationError("corrugation needs at least one Fourier amplitude")
        if any(h < 0.0 or not math.isfinite(h) for h in self.amplitudes):
            raise ConfigurationError(f"corrugation amplitudes must be finite and >= 0, got {self.amplitudes!r}")

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k_c


@dataclass(frozen=True)
class SurfaceConfig:
    """Corrugated surface seen by the cloud at separation z_cm.

    eta_f = 1 means a perfect reflector; a tabulated response (set by the
    config layer) replaces the perfect-reflector kernel entirely and
    ignores eta_f.
    """

    fundamentals: tuple[Corrugation, ...]
    z_cm: float           # m
    eta_f: float = 1.0
    response_file: str | None = None

    def __post_init__(self):
        if not self.z_cm > 0.0:
            raise ConfigurationError(f"surface separation must be > 0, got {self.z_cm!r}")
        if not 0.0 <= self.eta_f <= 1.0:
            raise ConfigurationError(f"eta_f must lie in [0, 1], got {self.eta_f!r}")
        if len(self.fundamentals) == 0:
            raise ConfigurationError("surface needs at least one corrugation fundamental")
        h_max = max(max(c.amplitudes) for c in self.fundamentals)
        scale = min(min(c.wavelength for c in self.fundamentals), self.z_cm)
        if h_max > 0.0 and h_max >= scale:
            # First-order expansion wants h as the smallest length scale;
            # warn only, the interesting regimes sit near this border.
            warnings.warn(
                f"corrugation amplitude {h_max:.3g} m is not the smallest length scale "
                f"(min of wavelength and separation: {scale:.3g} m); first-order "
                "lateral coefficients are unreliable here",
                stacklevel=2,
            )

    @property
    def material(self) -> str:
        if self.response_file is not None:
            return "tabulated"
        return "perfect" if self.eta_f == 1.0 else "scalar_eta"


@dataclass(frozen=True)
class ResponseFunction:
    """Evaluator (k, z) -> g in J/m with a provenance tag."""

    evaluate: Callable[[float, float], float]
    provenance: str  # "perfect-reflector" | "tabulated"

    def __call__(self, k, z):
        return self.evaluate(k, z)


def response_perfect(k, z: float, species: AtomSpecies):
    """Retarded perfect-reflector response g(k, z) in J/m.

    Negative (attractive) for positive polarizability.  Valid for
    separations beyond the atomic transition wavelength; that check lives
    in condensate.regime_check and is deliberately not enforced here.
    """
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0.0):
        raise PhysicsDomainError(f"wavenumber must be >= 0, got {k!r}")
    if not z > 0.0:
        raise PhysicsDomainError(f"separation must be > 0, got {z!r}")
    big_z = k_arr * z
    poly = 1.0 + big_z + (16.0 / 45.0) * big_z**2 + big_z**3 / 45.0
    prefactor = -3.0 * HBAR * C * species.polarizability_volume / (8.0 * math.pi**2 * z**5)
    g = prefactor * np.exp(-big_z) * poly
    return float(g) if np.isscalar(k) or k_arr.ndim == 0 else g


def perfect_response(species: AtomSpecies) -> ResponseFunction:
    return ResponseFunction(
        evaluate=lambda k, z: response_perfect(k, z, species),
        provenance="perfect-reflector",
    )


@dataclass(frozen=True)
class PotentialComponent:
    """Lateral Fourier coefficients for one corrugation fundamental."""

    k_c: float                       # rad/m
    coefficients: tuple[float, ...]  # U_n in J (signed, attractive < 0), n = 1..J


@dataclass(frozen=True)
class LateralPotential:
    """U_L(x) = sum over fundamentals of sum_n U_n cos(n*k_c*x).

    normal_offset is the x-independent normal Casimir energy at z_cm; it
    shifts the chemical potential only and opens no gaps.
    """

    components: tuple[PotentialComponent, ...]
    normal_offset: float = 0.0  # J

    def max_abs_coefficient(self) -> tuple[float, int, float]:
        """(|U|, harmonic n, k_c) of the largest coefficient."""
        best = (0.0, 0, 0.0)
        for comp in self.components:
            for n, u in enumerate(comp.coefficients, start=1):
                if abs(u) > best[0]:
                    best = (abs(u), n, comp.k_c)
        return best

    def total_abs(self) -> float:
        return sum(abs(u) for comp in self.components for u in comp.coefficients)


def lateral_coefficients(
    surface: SurfaceConfig,
    species: AtomSpecies,
    response: ResponseFunction | None = None,
) -> LateralPotential:
    """Fourier coefficients U_n = h_n * g(n*k_c, z_cm) of the lateral potential.

    With the default perfect-reflector response the scalar eta_f multiplies
    every coefficient; a tabulated response is used as-is (the material
    correction is already baked into the table).
    """
    if response is None:
        response = perfect_response(species)
        scale = surface.eta_f
    elif response.provenance == "perfect-reflector":
        scale = surface.eta_f
    else:
        scale = 1.0
    components = []
    for corr in surface.fundamentals:
        coeffs = tuple(
            scale * h * response(n * corr.k_c, surface.z_cm)
            for n, h in enumerate(corr.amplitudes, start=1)
        )
        components.append(PotentialComponent(k_c=corr.k_c, coefficients=coeffs))
    return LateralPotential(components=tuple(components))


def lateral_eval(pot: LateralPotential, x):
    """Evaluate U_L(x) in J; x scalar or array in m.  Excludes normal_offset."""
    x_arr = np.asarray(x, dtype=float)
    total = np.zeros_like(x_arr)
    for comp in pot.components:
        for n, u in enumerate(comp.coefficients, start=1):
            if u != 0.0:
                total = total + u * np.cos(n * comp.k_c * x_arr)
    return float(total) if np.isscalar(x) or x_arr.ndim == 0 else total


def load_tabulated_response(path: str) -> ResponseFunction:
    """Load a rectangular (k, z) -> g grid and return a bilinear interpolator.

    File format: CSV with header ``k_radpm,z_m,g_Jpm``, rows in row-major
    order (k outer, z inner), both axes strictly increasing.  Queries
    outside the grid raise ExtrapolationError; there is no extrapolation.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["k_radpm", "z_m", "g_Jpm"]:
            raise ConfigurationError(
                f"{path}: expected header 'k_radpm,z_m,g_Jpm', got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ConfigurationError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                rows.append(tuple(float(c) for c in row))
            except ValueError as exc:
                raise ConfigurationError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ConfigurationError(f"{path}: empty response table")

    k_axis = sorted({r[0] for r in rows})
    z_axis = sorted({r[1] for r in rows})
    if len(k_axis) < 2 or len(z_axis) < 2:
        raise ConfigurationError(f"{path}: need at least a 2x2 grid, got {len(k_axis)}x{len(z_axis)}")
    if len(rows) != len(k_axis) * len(z_axis):
        raise ConfigurationError(
            f"{path}: grid is not rectangular ({len(rows)} rows for "
            f"{len(k_axis)}x{len(z_axis)} axis values)"
        )
    expected_order = [(k, z) for k in k_axis for z in z_axis]
    if [(r[0], r[1]) for r in rows] != expected_order:
        raise ConfigurationError(
            f"{path}: rows must be row-major with k and z strictly increasing"
        )
    values = np.array([r[2] for r in rows], dtype=float).reshape(len(k_axis), len(z_axis))
    interp = RegularGridInterpolator(
        (np.array(k_axis), np.array(z_axis)), values, method="linear", bounds_error=True
    )

    def evaluate(k: float, z: float) -> float:
        try:
            return float(interp((k, z)))
        except ValueError:
            raise ExtrapolationError(
                f"tabulated response queried at (k={k:.6g} rad/m, z={z:.6g} m) outside "
                f"grid k in [{k_axis[0]:.6g}, {k_axis[-1]:.6g}], "
                f"z in [{z_axis[0]:.6g}, {z_axis[-1]:.6g}]"
            ) from None

    return ResponseFunction(evaluate=evaluate, provenance="tabulated")
