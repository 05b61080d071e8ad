"""Second-stage SQUID array, follow-on preamplifiers and referral to the input.

Array parameters are scaled from the measured 20x1 prototype. All follow-on
noise is expressed as a flux noise in the second-stage array and then
referred to an imprecision current at the first-stage input.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence, Union

from .constants import K_B, PHI0, _check_positive
from .first_stage import FirstStageSquid, InputCoupling, input_referred_noise, transfer_functions

# Matched output impedance the arrays are designed for.
MATCHED_IMPEDANCE = 50.0
# Below this the linear T2 noise scaling is no longer established.
MIN_VERIFIED_T2 = 1.0


class ChainWarning(UserWarning):
    """A design sits outside the regime the scaling laws were verified in."""


class OutOfBandError(ValueError):
    """No configured preamplifier band covers the requested frequency."""


@dataclass(frozen=True)
class PrototypeRecord:
    """Measured 20x1 series-array prototype at 4 K.

    Defaults are the positive-feedback-slope column, which the chain uses.
    ``Phi_n_squid`` is the array's own flux noise (Wb/rtHz) with the
    measurement preamplifier subtracted. The ``meas_*`` fields describe that
    measurement: the preamplifier's Vn (V/rtHz) and In (A/rtHz), the total
    flux noise seen, and the preamp share of it (all Wb/rtHz).
    """

    Ic_min: float = 3.055e-6
    Ic_max: float = 9.485e-6
    M_FB2: float = 44e-12
    M_IN2: float = 105e-12
    P: float = 0.834e-9
    dPhi_dI: float = 95.5e-12
    dV_dI: float = 64.9
    dV_dPhi: float = 6.80e11
    Phi_n_squid: float = 0.297e-6 * PHI0
    slope: str = "positive"
    meas_Vn: float = 0.32e-9
    meas_In: float = 2.7e-12
    meas_Phi_n_total: float = 0.394e-6 * PHI0
    meas_Phi_n_preamp: float = 0.259e-6 * PHI0

    N_ser0: int = field(default=20, init=False)
    N_par0: int = field(default=1, init=False)
    T0: float = field(default=4.0, init=False)

    def __post_init__(self):
        if self.slope not in ("positive", "negative"):
            raise ValueError(f"slope must be 'positive' or 'negative', got {self.slope!r}")
        for name in ("M_FB2", "M_IN2", "P", "dPhi_dI", "dV_dI", "dV_dPhi", "Phi_n_squid"):
            _check_positive(name, getattr(self, name))

    @classmethod
    def negative_slope(cls) -> PrototypeRecord:
        """The shallow, negative-feedback-slope column of the same device."""
        return cls(
            dPhi_dI=231e-12,
            dV_dI=154.0,
            dV_dPhi=6.66e11,
            Phi_n_squid=0.247e-6 * PHI0,
            slope="negative",
            meas_Phi_n_total=0.453e-6 * PHI0,
            meas_Phi_n_preamp=0.380e-6 * PHI0,
        )


@dataclass(frozen=True)
class SecondStageDesign:
    """An N_ser x N_par array built from the prototype unit cell.

    ``L_SQ2`` is the input coil inductance of one unit SQUID and ``L_int``
    the wirebond/interconnect inductance to the first stage.
    """

    N_ser: int
    N_par: int
    T2: float
    L_SQ2: float = 120e-12
    L_int: float = 2e-9
    proto: PrototypeRecord = field(default_factory=PrototypeRecord)

    def __post_init__(self):
        for name in ("N_ser", "N_par"):
            n = getattr(self, name)
            if int(n) != n or n < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {n!r}")
        _check_positive("T2", self.T2)
        _check_positive("L_SQ2", self.L_SQ2)
        if self.L_int < 0:
            raise ValueError(f"L_int must be >= 0, got {self.L_int!r}")

    @property
    def n_squids(self) -> int:
        return self.N_ser * self.N_par

    @property
    def label(self) -> str:
        return f"{self.N_ser}x{self.N_par}"


@dataclass(frozen=True)
class OpAmpPreamp:
    """Op-amp-mode room-temperature preamplifier read through resistive leads.

    ``Vn`` in V/rtHz, ``In`` in A/rtHz; ``Rlead`` and ``Tlead`` describe the
    lossy part of the cable, taken as frequency independent.
    """

    Vn: float
    In: float
    Rlead: float = 0.0
    Tlead: float = 0.0
    f_max: float = math.inf
    name: str = "opamp"
    f_min: float = field(default=0.0, init=False)

    def __post_init__(self):
        for key in ("Vn", "In", "Rlead", "Tlead"):
            if getattr(self, key) < 0:
                raise ValueError(f"{key} must be >= 0")
        if not self.f_max > 0:
            raise ValueError("f_max must be > 0")


@dataclass(frozen=True)
class CryoRFPreamp:
    """Cryogenic 50 Ohm scattering-mode amplifier with noise temperature ``Tn``."""

    Tn: float
    f_min: float = 0.0
    f_max: float = math.inf
    name: str = "cryorf"

    def __post_init__(self):
        if self.Tn < 0:
            raise ValueError("Tn must be >= 0")
        if not self.f_min < self.f_max:
            raise ValueError(f"f_min ({self.f_min}) must be below f_max ({self.f_max})")


Preamp = Union[OpAmpPreamp, CryoRFPreamp]

# Magnicon XXF-1 datasheet values, 50 MHz open-loop bandwidth.
MAGNICON_XXF1 = OpAmpPreamp(Vn=0.33e-9, In=2.6e-12, Rlead=1.0, Tlead=200.0, f_max=50e6, name="magnicon")
# Discrete-bipolar ultra-high-speed SQUID electronics, 300 MHz bandwidth.
HIGH_SPEED_RT = OpAmpPreamp(Vn=0.3e-9, In=6e-12, Rlead=1.0, Tlead=200.0, f_max=300e6, name="rt300")
# Cryogenic RF amplifier at 4 K, Tn < 2 K from 5 to 500 MHz, superconducting coax.
CRYO_RF = CryoRFPreamp(Tn=2.0, f_min=5e6, f_max=500e6, name="cryorf")


@dataclass(frozen=True)
class PreampBand:
    """Closed frequency interval [f_lo, f_hi] (Hz) served by one preamplifier."""

    f_lo: float
    f_hi: float
    preamp: Preamp

    def __post_init__(self):
        if not (0 <= self.f_lo < self.f_hi):
            raise ValueError(f"invalid band [{self.f_lo}, {self.f_hi}]")
        if self.f_lo < self.preamp.f_min or self.f_hi > self.preamp.f_max:
            raise ValueError(
                f"band [{self.f_lo:.4g}, {self.f_hi:.4g}] Hz exceeds the "
                f"{self.preamp.name} range [{self.preamp.f_min:.4g}, {self.preamp.f_max:.4g}] Hz"
            )

    def __contains__(self, f: float) -> bool:
        return self.f_lo <= f <= self.f_hi


class ScaledArray(NamedTuple):
    P: float
    dPhi_dI: float
    dV_dI: float
    dV_dPhi: float
    Phi_n_squid: float


@dataclass(frozen=True)
class ChainConfig:
    """First stage, its input coupling, and the optional follow-on chain.

    With ``second_stage=None`` the chain is the bare first stage (no
    follow-on noise) and no preamplifier bands are needed.
    """

    first_stage: FirstStageSquid
    coupling: InputCoupling
    second_stage: Optional[SecondStageDesign] = None
    preamp_bands: Sequence[PreampBand] = ()

    def __post_init__(self):
        bands = tuple(self.preamp_bands)
        object.__setattr__(self, "preamp_bands", bands)
        if self.second_stage is not None and not bands:
            raise ValueError("a second stage needs at least one preamplifier band")
        for a, b in zip(bands, bands[1:]):
            if b.f_lo < a.f_hi:
                raise ValueError(
                    f"preamplifier bands must be ordered and disjoint: "
                    f"[{a.f_lo:.4g}, {a.f_hi:.4g}] overlaps [{b.f_lo:.4g}, {b.f_hi:.4g}]"
                )

    def preamp_at(self, f: float) -> Preamp:
        """Preamplifier serving frequency ``f`` (Hz); the lower band wins on a shared edge."""
        for band in self.preamp_bands:
            if f in band:
                return band.preamp
        raise OutOfBandError(f"{f:.6g} Hz is outside every configured preamplifier band")

    def covers(self, f_lo: float, f_hi: float) -> bool:
        """True when every frequency in [f_lo, f_hi] falls in some band."""
        if self.second_stage is None:
            return True
        edge = f_lo
        for band in self.preamp_bands:
            if band.f_lo <= edge <= band.f_hi:
                edge = band.f_hi
                if edge >= f_hi:
                    return True
        return False

    @property
    def top_band_edge(self) -> float:
        if self.second_stage is None:
            return math.inf
        return self.preamp_bands[-1].f_hi

    def with_coupling(self, coupling: InputCoupling) -> ChainConfig:
        return replace(self, coupling=coupling)


def scale_array(design: SecondStageDesign) -> ScaledArray:
    """Scale the prototype's dynamic parameters to ``design``."""
    p = design.proto
    n_ser = design.N_ser / p.N_ser0
    n_par = design.N_par / p.N_par0
    if design.T2 < MIN_VERIFIED_T2:
        warnings.warn(
            f"T2={design.T2:g} K is below {MIN_VERIFIED_T2:g} K; shunt self-heating "
            "may stop the array noise from scaling with temperature",
            ChainWarning,
            stacklevel=2,
        )
    noise_sq = p.Phi_n_squid**2 / (n_ser * n_par) * (design.T2 / p.T0)
    return ScaledArray(
        P=p.P * n_ser * n_par,
        dPhi_dI=p.dPhi_dI / n_par,
        dV_dI=p.dV_dI * n_ser / n_par,
        dV_dPhi=p.dV_dPhi * n_ser,
        Phi_n_squid=math.sqrt(noise_sq),
    )


def input_inductance(design: SecondStageDesign) -> float:
    """Total input inductance L2, including one dummy SQUID at each end of every bank."""
    n_dummy = 2 * design.N_par
    return (design.n_squids + n_dummy) * design.L_SQ2 + design.L_int


def coupling_time_constant(design: SecondStageDesign, Rdyn1: float) -> float:
    """Single-pole time constant L2/R_dyn1 of the first-to-second stage coupling."""
    _check_positive("Rdyn1", Rdyn1)
    return input_inductance(design) / Rdyn1


def opamp_referred_flux_noise(design: SecondStageDesign, preamp: OpAmpPreamp) -> float:
    """Preamp voltage+lead noise and current noise as array flux PSD (Wb^2/Hz).

    The two contributions are taken as uncorrelated.
    """
    p = design.proto
    v_sq = preamp.Vn**2 + 4.0 * K_B * preamp.Tlead * preamp.Rlead
    phi_v = v_sq / p.dV_dPhi**2 * (p.N_ser0 / design.N_ser) ** 2
    phi_i = preamp.In**2 * (p.dPhi_dI / design.N_par) ** 2
    return phi_v + phi_i


def cryo_rf_referred_flux_noise(design: SecondStageDesign, preamp: CryoRFPreamp) -> float:
    """Noise temperature of a matched 50 Ohm amplifier as array flux PSD (Wb^2/Hz)."""
    p = design.proto
    r_dyn = scale_array(design).dV_dI
    if abs(r_dyn / MATCHED_IMPEDANCE - 1.0) > 0.2:
        warnings.warn(
            f"{design.label} array has R_dyn={r_dyn:.3g} Ohm; the RF referral assumes "
            f"a {MATCHED_IMPEDANCE:g} Ohm match",
            ChainWarning,
            stacklevel=2,
        )
    n_scale = p.N_ser0 * p.N_par0 / design.n_squids
    return abs(4.0 * K_B * preamp.Tn * n_scale * p.dPhi_dI / p.dV_dPhi)


def amplifier_flux_noise(design: SecondStageDesign, preamp: Preamp) -> float:
    if isinstance(preamp, OpAmpPreamp):
        return opamp_referred_flux_noise(design, preamp)
    if isinstance(preamp, CryoRFPreamp):
        return cryo_rf_referred_flux_noise(design, preamp)
    raise TypeError(f"unknown preamplifier type {type(preamp).__name__}")


def total_second_stage_flux_noise(design: SecondStageDesign, preamp: Preamp) -> float:
    """Array flux noise plus referred preamp noise, in quadrature (Wb^2/Hz)."""
    return scale_array(design).Phi_n_squid ** 2 + amplifier_flux_noise(design, preamp)


def referred_imprecision(chain: ChainConfig, omega: float) -> float:
    """Follow-on noise referred to a first-stage input current PSD (A^2/Hz).

    The second-stage flux noise becomes a current in the second-stage input
    coil, which is produced by first-stage flux through dI/dPhi = -1/Lsq.
    The coupling rolls off with tau = L2/R_dyn1 and the whole flux noise is
    scaled by (1 + omega^2 tau^2).
    """
    _check_positive("omega", omega)
    design = chain.second_stage
    if design is None:
        return 0.0
    preamp = chain.preamp_at(omega / (2.0 * math.pi))
    phi_n2_sq = total_second_stage_flux_noise(design, preamp)
    squid = chain.first_stage
    tf = transfer_functions(squid)
    tau = coupling_time_constant(design, tf.R_dyn)
    rolloff = 1.0 + (omega * tau) ** 2
    current_gain = chain.coupling.mutual_inductance(squid) * tf.dI_dPhi
    return phi_n2_sq / design.proto.M_IN2**2 * rolloff / current_gain**2


def full_system_imprecision(chain: ChainConfig, omega: float) -> float:
    """First-stage TC imprecision plus referred follow-on noise (A^2/Hz)."""
    S_II = input_referred_noise(chain.first_stage, chain.coupling, omega).S_II
    return S_II + referred_imprecision(chain, omega)
