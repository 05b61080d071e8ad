"""Physical constants, frequency conversions and the quantum limit.

Everything in the package is SI: H, Ohm, K, Wb, rad/s. Spectral densities
are two-sided power spectral densities; amplitude spectral densities only
appear at the CLI/report boundary.
"""

import math

from scipy.constants import hbar as HBAR
from scipy.constants import k as K_B
from scipy.constants import physical_constants

PHI0 = physical_constants["mag. flux quantum"][0]

__all__ = [
    "HBAR",
    "K_B",
    "PHI0",
    "angular_frequency",
    "frequency",
    "quantum_limit_temperature",
]


def _check_positive(name, value):
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {value!r}")


def angular_frequency(f: float) -> float:
    """Convert a frequency in Hz to rad/s."""
    _check_positive("frequency", f)
    return 2.0 * math.pi * f


def frequency(omega: float) -> float:
    """Convert an angular frequency in rad/s to Hz."""
    _check_positive("omega", omega)
    return omega / (2.0 * math.pi)


def quantum_limit_temperature(omega: float) -> float:
    """Standard quantum limit on added noise, expressed as k_B*T in joules.

    Half a photon of added noise, hbar*omega/2. Divide by ``K_B`` for kelvin.
    """
    _check_positive("omega", omega)
    return 0.5 * HBAR * omega
