"""Regression of the published headline numbers.

Each check compares a computed value to a reference at a fixed tolerance.
``validate_reference_numbers`` runs every group; the CLI ``validate`` command
prints the report and fails if any check fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .constants import HBAR, K_B, PHI0
from .first_stage import (
    SQUID_C1,
    InputCoupling,
    euler_product,
    input_referred_noise,
    transfer_functions,
)
from .matching import (
    NoiseBudget,
    brute_force_min_noise,
    detuned_resonator_for_optimum,
    epsilon_uc_system,
    eta,
    match_on_resonance,
    match_scan_sensitivity,
    noise_budget,
    noise_temperature,
    on_res_sql_ratio,
    optimal_complex_source,
    scan_optimal_imprecision,
    t_min_complex,
    t_min_on_resonance,
)
from .resonator import Resonator, thermal_occupation
from .second_stage import (
    CRYO_RF,
    HIGH_SPEED_RT,
    MAGNICON_XXF1,
    ChainConfig,
    OpAmpPreamp,
    PreampBand,
    SecondStageDesign,
    coupling_time_constant,
    full_system_imprecision,
    input_inductance,
    opamp_referred_flux_noise,
    scale_array,
)

MICRO_PHI0 = 1e-6 * PHI0
MACHINE = 1e-12


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    computed: float
    expected: float
    tolerance: str
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  [{self.criterion:2d}] {self.name}: computed {self.computed:.6g}, "
            f"expected {self.expected:.6g} ({self.tolerance})"
        )


def _abs(criterion, name, computed, expected, tol):
    ok = abs(computed - expected) <= tol
    return Check(criterion, name, computed, expected, f"+/- {tol:g}", ok)


def _rel(criterion, name, computed, expected, rtol):
    ok = abs(computed - expected) <= rtol * abs(expected)
    return Check(criterion, name, computed, expected, f"rel {rtol:g}", ok)


def _below(criterion, name, computed, bound):
    return Check(criterion, name, computed, bound, "upper bound", computed < bound)


DEFAULT_COUPLING = InputCoupling(Lin=100e-9, kappa=0.1)
TC_ONLY = ChainConfig(SQUID_C1, DEFAULT_COUPLING)
DESIGNS = {
    "48x3": SecondStageDesign(48, 3, T2=1.0),
    "32x2": SecondStageDesign(32, 2, T2=1.0),
    "16x1": SecondStageDesign(16, 1, T2=1.0),
}
RT_BANDS = (PreampBand(0.0, 50e6, MAGNICON_XXF1), PreampBand(50e6, 300e6, HIGH_SPEED_RT))
CRYO_BANDS = (PreampBand(5e6, 500e6, CRYO_RF),)


def check_eta_tc() -> List[Check]:
    omega = 2 * math.pi * 30e6
    return [_abs(1, "eta_TC, SQUID C1", eta(noise_budget(TC_ONLY, omega)), 3.7, 0.05)]


def check_on_res_ratio() -> List[Check]:
    return [_abs(2, "on-resonance T_min / SQL, SQUID C1", on_res_sql_ratio(SQUID_C1), 8.7, 0.3)]


def check_epsilon_uc_tc() -> List[Check]:
    checks = []
    values = []
    for kappa in (0.01, 0.1, 1.0):
        chain = ChainConfig(SQUID_C1, InputCoupling(Lin=100e-9, kappa=kappa))
        for f in (5e6, 30e6, 300e6):
            values.append(epsilon_uc_system(chain, 2 * math.pi * f) / HBAR)
    checks.append(_rel(3, "epsilon_uc / hbar, SQUID C1, no follow-on noise", values[0], 5.24, 0.01))
    spread = (max(values) - min(values)) / values[0]
    checks.append(_abs(3, "epsilon_uc spread over omega and kappa (relative)", spread, 0.0, MACHINE))
    return checks


def check_table_ii() -> List[Check]:
    expected = {
        "48x3": (6.00e-9, 20e-9, 3.3e-9),
        "32x2": (2.67e-9, 10e-9, 1.7e-9),
        "16x1": (0.67e-9, 4e-9, 0.7e-9),
    }
    rdyn1 = transfer_functions(SQUID_C1).R_dyn
    checks = []
    for label, (P, L2, tau) in expected.items():
        d = DESIGNS[label]
        s = scale_array(d)
        checks.append(_rel(4, f"{label} power P (nW)", s.P * 1e9, P * 1e9, 0.01))
        checks.append(_rel(4, f"{label} input inductance L2 (nH)", input_inductance(d) * 1e9, L2 * 1e9, 0.05))
        checks.append(_rel(4, f"{label} time constant tau (ns)", coupling_time_constant(d, rdyn1) * 1e9, tau * 1e9, 0.05))
        checks.append(_rel(4, f"{label} dynamic resistance (Ohm)", s.dV_dI, 50.0, 0.05))
    return checks


def check_table_i() -> List[Check]:
    d = SecondStageDesign(20, 1, T2=4.0)
    proto = d.proto
    meas_preamp = OpAmpPreamp(Vn=proto.meas_Vn, In=proto.meas_In, Rlead=0.0)
    phi_pa = math.sqrt(opamp_referred_flux_noise(d, meas_preamp)) / MICRO_PHI0
    phi_sq = math.sqrt((proto.meas_Phi_n_total / MICRO_PHI0) ** 2 - phi_pa**2)
    return [
        _rel(5, "Magnicon noise referred to 20x1 array (uPhi0/rtHz)", phi_pa, 0.259, 0.01),
        _rel(5, "array noise after quadrature subtraction (uPhi0/rtHz)", phi_sq, 0.297, 0.01),
    ]


def check_fig4_bound() -> List[Check]:
    chain = ChainConfig(SQUID_C1, DEFAULT_COUPLING, DESIGNS["48x3"], CRYO_BANDS)
    freqs = np.linspace(5e6, 50e6, 46)
    eps = [epsilon_uc_system(chain, 2 * math.pi * f) / HBAR for f in freqs]
    worst = int(np.argmax(eps))
    return [
        _below(
            6,
            f"max epsilon_uc / hbar, 48x3 + cryo RF, 5-50 MHz (at {freqs[worst] / 1e6:.0f} MHz)",
            eps[worst],
            7.6,
        )
    ]


def random_budgets(n: int, seed: int = 20241016) -> List[NoiseBudget]:
    """Budgets with log-uniform PSDs over four decades and random correlation."""
    rng = np.random.default_rng(seed)
    budgets = []
    for _ in range(n):
        S_VV = 10 ** rng.uniform(-24, -20)
        S_II = 10 ** rng.uniform(-26, -22)
        rho = rng.uniform(-0.95, 0.95)
        omega = 2 * math.pi * 10 ** rng.uniform(6, 8.5)
        budgets.append(NoiseBudget(omega, S_II, S_VV, rho * math.sqrt(S_VV * S_II)))
    return budgets


def oracle_ranges(budget: NoiseBudget):
    scale = math.sqrt(budget.S_VV / budget.S_II_sys)
    return (1e-2 * scale, 1e2 * scale), (-2 * scale, 2 * scale)


def check_oracle() -> List[Check]:
    worst_t = worst_z = worst_real = 0.0
    for b in random_budgets(50):
        r_range, x_range = oracle_ranges(b)
        res = brute_force_min_noise(b, r_range, x_range, grid_points=300)
        worst_t = max(worst_t, abs(res.T_min / t_min_complex(b) - 1))
        z = optimal_complex_source(b)
        worst_z = max(worst_z, abs(res.Z_at_min - z) / abs(z))
        real = brute_force_min_noise(b, r_range, (0.0, 0.0), grid_points=300)
        worst_real = max(worst_real, abs(real.T_min / t_min_on_resonance(b) - 1))
    return [
        _abs(7, "oracle vs closed-form T_min, 50 budgets (max rel dev)", worst_t, 0.0, 1e-3),
        _abs(7, "oracle vs closed-form Z_opt, 50 budgets (max rel dev)", worst_z, 0.0, 1e-3),
        _abs(7, "real-axis oracle vs on-resonance T_min (max rel dev)", worst_real, 0.0, 1e-3),
    ]


def check_tc_identities() -> List[Check]:
    sq = SQUID_C1
    omega = 2 * math.pi * 30e6
    unit = K_B * sq.Tj * sq.Lsq * omega / sq.Rj
    b = noise_budget(TC_ONLY, omega)
    res = Resonator.from_target(30e6, 1e6, 1e-6, 0.01)
    kg = match_on_resonance(TC_ONLY, res).kappa_g
    return [
        _rel(8, "on-resonance T_min coefficient", K_B * t_min_on_resonance(b) / unit, 2 * math.sqrt(11), MACHINE),
        _rel(8, "complex-source T_min coefficient", K_B * t_min_complex(b) / unit, 2 * math.sqrt(2), MACHINE),
        _rel(8, "correlation fraction Im(S_IV)^2 / (S_VV S_II)", b.imS_IV**2 / (b.S_VV * b.S_II_sys), 144 / 176, MACHINE),
        _rel(8, "on-resonance match kappa_g^2 * Q", kg**2 * res.Q, 4 / math.sqrt(11), MACHINE),
        _rel(8, "Euler chain-rule product", euler_product(transfer_functions(sq)), -1.0, MACHINE),
    ]


def check_clarke() -> List[Check]:
    sq = SQUID_C1
    omega = 2 * math.pi * 30e6
    res = detuned_resonator_for_optimum(TC_ONLY, omega, Ltot=1e-6, Tres=0.01)
    T = noise_temperature(noise_budget(TC_ONLY, omega), res.impedance(omega))
    coeff = K_B * T / (K_B * sq.Tj * sq.Lsq * omega / sq.Rj)
    return [_rel(9, "detuned-resonator T_min coefficient vs 2.8", coeff, 2.8, 0.015)]


def check_scan_match() -> List[Check]:
    chain = ChainConfig(SQUID_C1, DEFAULT_COUPLING, DESIGNS["32x2"], CRYO_BANDS)
    f0, Ltot = 30e6, 1e-6
    lo = Resonator.from_target(f0, 1e5, Ltot, 0.01)
    hi = Resonator.from_target(f0, 1e6, Ltot, 0.01)
    ratio_q = match_scan_sensitivity(chain, lo) ** 2 / match_scan_sensitivity(chain, hi) ** 2

    kg = match_scan_sensitivity(chain, hi)
    matched = chain.with_coupling(InputCoupling(Lin=Ltot, kappa=kg))
    omega0 = hi.omega0
    n = thermal_occupation(omega0, hi.Tres)
    target = scan_optimal_imprecision(omega0, hi.R, eta(noise_budget(chain, omega0)), n)
    achieved = full_system_imprecision(matched, omega0)

    k1 = match_scan_sensitivity(chain, hi, n=1e4) ** 2
    k2 = match_scan_sensitivity(chain, hi, n=2e4) ** 2
    return [
        _rel(10, "kappa_g^2(Q=1e5) / kappa_g^2(Q=1e6)", ratio_q, 10.0, MACHINE),
        _rel(10, "S_II_sys at scan match / scan-optimal target", achieved / target, 1.0, 1e-6),
        _rel(10, "kappa_g^2(n=2e4) / kappa_g^2(n=1e4)", k2 / k1, 2.0, 1e-3),
    ]


def check_coupling_invariance() -> List[Check]:
    chains = {
        "TC only": (None, ()),
        "48x3 + cryo RF": (DESIGNS["48x3"], CRYO_BANDS),
        "16x1 + RT": (DESIGNS["16x1"], RT_BANDS),
    }
    worst = 0.0
    for design, bands in chains.values():
        for f in (10e6, 45e6, 120e6):
            omega = 2 * math.pi * f
            vals = []
            for kappa, Lin in ((0.1, 100e-9), (0.01, 10e-6), (1.0, 1e-9)):
                c = ChainConfig(SQUID_C1, InputCoupling(Lin, kappa), design, bands)
                vals.append((eta(noise_budget(c, omega)), epsilon_uc_system(c, omega)))
            for e, eps in vals[1:]:
                worst = max(worst, abs(e / vals[0][0] - 1), abs(eps / vals[0][1] - 1))
    return [_abs(11, "eta, epsilon_uc change at fixed kappa^2 Lin (max rel)", worst, 0.0, 1e-9)]


CRITERIA: Dict[int, Callable[[], List[Check]]] = {
    1: check_eta_tc,
    2: check_on_res_ratio,
    3: check_epsilon_uc_tc,
    4: check_table_ii,
    5: check_table_i,
    6: check_fig4_bound,
    7: check_oracle,
    8: check_tc_identities,
    9: check_clarke,
    10: check_scan_match,
    11: check_coupling_invariance,
}


def validate_reference_numbers() -> List[Check]:
    checks = []
    for run in CRITERIA.values():
        checks.extend(run())
    return checks


def format_report(checks: List[Check]) -> str:
    failed = sum(not c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines)
