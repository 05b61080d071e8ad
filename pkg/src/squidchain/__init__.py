"""Noise model of a two-stage dc SQUID amplifier chain.

The first stage follows the Tesche-Clarke noise model. A series-parallel
SQUID array and a follow-on preamplifier form the second stage. The package
computes noise temperature, quantum-limit ratio eta, uncoupled energy
sensitivity and resonator matching couplings.
"""

from .config import ConfigError, SweepConfig, config_from_presets, load_config
from .constants import HBAR, K_B, PHI0
from .first_stage import (
    SQUID_C1,
    FirstStageNoise,
    FirstStageSquid,
    InputCoupling,
    input_referred_noise,
    tc_figures_of_merit,
    transfer_functions,
)
from .matching import (
    FiguresOfMerit,
    NoiseBudget,
    brute_force_min_noise,
    epsilon_uc_system,
    eta,
    figures_of_merit,
    match_on_resonance,
    match_scan_sensitivity,
    noise_budget,
    noise_temperature,
    t_min_complex,
    t_min_on_resonance,
)
from .resonator import Resonator, thermal_occupation
from .second_stage import (
    CRYO_RF,
    HIGH_SPEED_RT,
    MAGNICON_XXF1,
    ChainConfig,
    CryoRFPreamp,
    OpAmpPreamp,
    PreampBand,
    SecondStageDesign,
    full_system_imprecision,
    scale_array,
)
from .sweep import emit_csv, run_sweep

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
