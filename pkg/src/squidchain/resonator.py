"""Series RLC input resonator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import HBAR, K_B, _check_positive


class Resonance(NamedTuple):
    omega0: float
    Q: float


@dataclass(frozen=True)
class Resonator:
    """Series RLC circuit closed through the SQUID input coil.

    ``Ltot`` includes the input coil inductance. ``Tres`` is the physical
    temperature that sets the thermal occupation of the mode.
    """

    Ltot: float
    Cres: float
    R: float
    Tres: float

    def __post_init__(self):
        for name in ("Ltot", "Cres", "R", "Tres"):
            _check_positive(name, getattr(self, name))

    @classmethod
    def from_target(cls, f0: float, Q: float, Ltot: float, Tres: float) -> Resonator:
        """Build the circuit that resonates at ``f0`` (Hz) with quality factor ``Q``."""
        for name, value in (("f0", f0), ("Q", Q), ("Ltot", Ltot), ("Tres", Tres)):
            _check_positive(name, value)
        omega0 = 2.0 * math.pi * f0
        return cls(Ltot=Ltot, Cres=1.0 / (omega0**2 * Ltot), R=omega0 * Ltot / Q, Tres=Tres)

    @property
    def omega0(self) -> float:
        return 1.0 / math.sqrt(self.Ltot * self.Cres)

    @property
    def Q(self) -> float:
        return self.omega0 * self.Ltot / self.R

    def resonance(self) -> Resonance:
        return Resonance(self.omega0, self.Q)

    def impedance(self, omega: float) -> complex:
        _check_positive("omega", omega)
        return complex(self.R, omega * self.Ltot - 1.0 / (omega * self.Cres))


def thermal_occupation(omega: float, Tres: float) -> float:
    """Bose-Einstein occupation of a mode at ``omega`` and temperature ``Tres``."""
    _check_positive("omega", omega)
    if Tres < 0 or not math.isfinite(Tres):
        raise ValueError(f"Tres must be finite and >= 0, got {Tres!r}")
    if Tres == 0:
        return 0.0
    x = HBAR * omega / (K_B * Tres)
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)
