"""Physical constants and unit conversions.

Everything internal runs in SI double precision; energies cross module
boundaries in joules.  Human-facing output converts energies to ordinary
frequencies, f = E / (2*pi*hbar), and lengths to micrometres, which is the
convention used for every benchmark number in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    """SI constants; c and k_B are exact by definition, hbar and eps0 are
    the CODATA 2018 recommended values to the digits stored."""

    hbar: float = 1.054_571_817e-34   # J s
    c: float = 299_792_458.0          # m / s
    k_B: float = 1.380_649e-23        # J / K
    eps0: float = 8.854_187_8128e-12  # F / m


CONST = Constants()

HBAR = CONST.hbar
C = CONST.c
K_B = CONST.k_B
EPS0 = CONST.eps0

TWO_PI = 2.0 * math.pi


def energy_to_frequency(energy):
    """Energy in J to ordinary frequency in Hz, f = E / (2*pi*hbar)."""
    return energy / (TWO_PI * HBAR)


def frequency_to_energy(frequency):
    """Ordinary frequency in Hz to energy in J, E = 2*pi*hbar*f."""
    return TWO_PI * HBAR * frequency


def metres_to_microns(length):
    return length * 1e6


def microns_to_metres(length):
    return length * 1e-6
