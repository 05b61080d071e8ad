"""Tesche-Clarke model of the weakly coupled first-stage dc SQUID.

The SQUID is assumed to sit at the TC optimum (flux bias Phi0/4, current
bias 1.8 I0) and to be voltage biased at the signal frequencies. Response
functions use unit prefactors: dV/dPhi = Rj/Lsq and R_dyn = Rj.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .constants import K_B, PHI0, _check_positive

# Advisory windows for the TC optimum. The Gamma bound is the tighter one
# under which the unit dV/dPhi prefactor holds.
BETA_WINDOW = (0.5, 2.0)
GAMMA_MAX = 0.025

# TC white-noise coefficients, in units of k_B*Tj*{Rj, 1/Rj, 1}.
C_VV_OUT = 16.0
C_II_CIRC = 11.0
C_IV = 12.0

# Only Im(S_IV)^2 is fixed by the model. +1 makes the optimal source
# reactance inductive; flip here if a measurement says otherwise.
IM_S_IV_SIGN = 1.0


class TcRegimeWarning(UserWarning):
    """SQUID parameters fall outside the regime where TC theory applies."""


@dataclass(frozen=True)
class FirstStageSquid:
    """Physical parameters of the input SQUID.

    Attributes
    ----------
    I0 : float
        Critical current of one junction (A).
    Rj : float
        Shunt resistance across one junction (Ohm).
    Lsq : float
        SQUID loop inductance (H).
    Tj : float
        Electron temperature of the shunts (K).
    Cj : float, optional
        Junction capacitance (F). Not published for every device.
    """

    I0: float
    Rj: float
    Lsq: float
    Tj: float
    Cj: Optional[float] = None

    def __post_init__(self):
        for name in ("I0", "Rj", "Lsq", "Tj"):
            _check_positive(name, getattr(self, name))
        if self.Cj is not None:
            _check_positive("Cj", self.Cj)


# SQUID C1 of Wellstood et al.: I0 = 6.3 uA, Rj = 6 Ohm, Lsq = 200 pH,
# shunts self-heated to about 150 mK.
SQUID_C1 = FirstStageSquid(I0=6.3e-6, Rj=6.0, Lsq=200e-12, Tj=0.150)


@dataclass(frozen=True)
class InputCoupling:
    """Input coil inductance ``Lin`` (H) and coupling constant ``kappa``."""

    Lin: float
    kappa: float

    def __post_init__(self):
        _check_positive("Lin", self.Lin)
        if not (0.0 < self.kappa <= 1.0):
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa!r}")

    @property
    def k2L(self) -> float:
        """kappa**2 * Lin, the only combination the noise terms depend on."""
        return self.kappa**2 * self.Lin

    def mutual_inductance(self, squid: FirstStageSquid) -> float:
        return self.kappa * math.sqrt(squid.Lsq * self.Lin)

    @classmethod
    def from_product(cls, k2L: float, Lin: float) -> InputCoupling:
        """Coupling with a given kappa**2 * Lin at fixed coil inductance."""
        _check_positive("k2L", k2L)
        return cls(Lin=Lin, kappa=math.sqrt(k2L / Lin))


@dataclass(frozen=True)
class TcFiguresOfMerit:
    beta_L: float
    Gamma: float
    beta_C: Optional[float] = None
    flags: tuple = ()


class TransferFunctions(NamedTuple):
    dV_dPhi: float
    R_dyn: float
    dI_dPhi: float


class BareOutputNoise(NamedTuple):
    S_VVout: float
    S_IIcirc: float
    S_IVcirc: float


@dataclass(frozen=True)
class FirstStageNoise:
    """Input-referred first-stage noise at one angular frequency.

    ``imS_IV`` carries a sign: positive means the optimal source reactance
    ``imS_IV / S_II`` is inductive. Only its square is fixed by TC theory.
    """

    S_II: float
    S_VV: float
    imS_IV: float
    omega: float


def tc_figures_of_merit(squid: FirstStageSquid, warn: bool = True) -> TcFiguresOfMerit:
    """beta_L, Gamma and (if Cj is known) beta_C, with regime flags."""
    beta_L = squid.Lsq * squid.I0 / PHI0
    Gamma = 2.0 * math.pi * K_B * squid.Tj / (squid.I0 * PHI0)
    beta_C = None
    if squid.Cj is not None:
        beta_C = math.pi * squid.I0 * squid.Rj**2 * squid.Cj / PHI0

    lo, hi = BETA_WINDOW
    flags = []
    if not lo <= beta_L <= hi:
        flags.append(f"beta_L={beta_L:.3g} outside [{lo}, {hi}]")
    if beta_C is not None and not lo <= beta_C <= hi:
        flags.append(f"beta_C={beta_C:.3g} outside [{lo}, {hi}]")
    if Gamma > GAMMA_MAX:
        flags.append(f"Gamma={Gamma:.3g} above {GAMMA_MAX}")
    if warn:
        for flag in flags:
            warnings.warn(flag, TcRegimeWarning, stacklevel=2)
    return TcFiguresOfMerit(beta_L, Gamma, beta_C, tuple(flags))


def transfer_functions(squid: FirstStageSquid) -> TransferFunctions:
    """Small-signal responses at the TC bias point.

    dI/dPhi at fixed voltage follows from the triple product rule, so
    ``dI_dPhi / dV_dPhi * R_dyn == -1``.
    """
    dV_dPhi = squid.Rj / squid.Lsq
    R_dyn = squid.Rj
    dI_dPhi = -dV_dPhi / R_dyn
    return TransferFunctions(dV_dPhi, R_dyn, dI_dPhi)


def euler_product(tf: TransferFunctions) -> float:
    return tf.dI_dPhi * (1.0 / tf.dV_dPhi) * tf.R_dyn


def bare_output_noise(squid: FirstStageSquid) -> BareOutputNoise:
    """Open-input output voltage, circulating current and their cross PSD."""
    kT = K_B * squid.Tj
    return BareOutputNoise(
        S_VVout=C_VV_OUT * kT * squid.Rj,
        S_IIcirc=C_II_CIRC * kT / squid.Rj,
        S_IVcirc=C_IV * kT,
    )


def input_referred_noise(
    squid: FirstStageSquid, coupling: InputCoupling, omega: float
) -> FirstStageNoise:
    """Refer the bare TC noise to the input circuit.

    Imprecision: output voltage noise divided by (dV/dPhi * M)**2.
    Backaction: the circulating current drives flux M*I into the input,
    seen as a voltage omega*M*I. The real bare cross-correlation becomes
    purely imaginary after the time derivative.
    """
    _check_positive("omega", omega)
    bare = bare_output_noise(squid)
    tf = transfer_functions(squid)
    M = coupling.mutual_inductance(squid)
    S_II = bare.S_VVout / (tf.dV_dPhi * M) ** 2
    S_VV = (omega * M) ** 2 * bare.S_IIcirc
    # (S_IVcirc / dV_dPhi) * omega: flux-referred imprecision times the
    # derivative of the coupled backaction flux; M cancels.
    imS_IV = IM_S_IV_SIGN * omega * bare.S_IVcirc / tf.dV_dPhi
    return FirstStageNoise(S_II=S_II, S_VV=S_VV, imS_IV=imS_IV, omega=omega)


def epsilon_uc_first_stage(squid: FirstStageSquid) -> float:
    """Uncoupled energy sensitivity S_PhiPhi / (2 Lsq), in J/Hz."""
    tf = transfer_functions(squid)
    S_phiphi = bare_output_noise(squid).S_VVout / tf.dV_dPhi**2
    return S_phiphi / (2.0 * squid.Lsq)
