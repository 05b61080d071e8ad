"""Noise temperatures, SQL-relative figures of merit and matching conditions.

Source convention: with a source impedance Z = R + iX at the input, the
total added noise is

    S_tot = S_VV + |Z|^2 S_II - 2 X Im(S_IV) + 2 R Re(S_IV)

and the noise temperature is S_tot / (4 k_B R) (two-sided PSDs). Under the
sign convention of :mod:`squidchain.first_stage` the optimal reactance is
inductive, X_opt = Im(S_IV) / S_II. Flipping the sign of Im(S_IV) mirrors
X_opt and leaves every minimum unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .constants import HBAR, K_B, _check_positive
from .first_stage import FirstStageNoise, FirstStageSquid, input_referred_noise
from .resonator import Resonator, thermal_occupation
from .second_stage import ChainConfig, full_system_imprecision


class InconsistentBudgetError(ValueError):
    """S_VV * S_II < Im(S_IV)^2: no physical minimum noise temperature exists."""


class CouplingError(ValueError):
    """The matching condition asks for a global coupling above 1."""


class OracleBoundaryError(RuntimeError):
    """The brute-force minimum sits on the edge of the search range."""


@dataclass(frozen=True)
class NoiseBudget:
    """Input-referred amplifier noise at one angular frequency.

    ``reS_IV`` is zero for TC chains but kept so the general minimum-noise
    expressions stay testable.
    """

    omega: float
    S_II_sys: float
    S_VV: float
    imS_IV: float
    reS_IV: float = 0.0

    def __post_init__(self):
        _check_positive("omega", self.omega)
        _check_positive("S_II_sys", self.S_II_sys)
        if self.S_VV < 0:
            raise ValueError("S_VV must be >= 0")

    @classmethod
    def from_first_stage(cls, noise: FirstStageNoise, S_II_extra: float = 0.0) -> NoiseBudget:
        return cls(noise.omega, noise.S_II + S_II_extra, noise.S_VV, noise.imS_IV)

    @property
    def radicand(self) -> float:
        return self.S_VV * self.S_II_sys - self.imS_IV**2


@dataclass(frozen=True)
class FiguresOfMerit:
    """Coupling-independent summary of a chain at one frequency.

    Temperatures in K, ``epsilon_uc`` in J/Hz. The coupling entries are
    ``None`` when no resonator Q was given.
    """

    T_min_on_res: float
    T_min_complex: float
    eta: float
    epsilon_uc: float
    kappa_g_opt_on_res: Optional[float] = None
    kappa_g_opt_scan: Optional[float] = None


class OnResonanceMatch(NamedTuple):
    kappa_g: float
    T_min: float
    k2L: float


class OracleResult(NamedTuple):
    T_min: float
    Z_at_min: complex


def noise_budget(chain: ChainConfig, omega: float) -> NoiseBudget:
    """Full-chain budget: TC backaction and correlation, system imprecision."""
    first = input_referred_noise(chain.first_stage, chain.coupling, omega)
    return NoiseBudget(omega, full_system_imprecision(chain, omega), first.S_VV, first.imS_IV)


def noise_temperature(budget: NoiseBudget, Z: complex) -> float:
    """Amplifier noise temperature (K) seen from source impedance ``Z``."""
    Z = complex(Z)
    if not Z.real > 0:
        raise ValueError(f"source resistance must be > 0, got {Z.real!r}")
    s_tot = (
        budget.S_VV
        + abs(Z) ** 2 * budget.S_II_sys
        - 2.0 * Z.imag * budget.imS_IV
        + 2.0 * Z.real * budget.reS_IV
    )
    return s_tot / (4.0 * K_B * Z.real)


def noise_temperature_real_source(budget: NoiseBudget, R: float) -> float:
    if not R > 0:
        raise ValueError(f"R must be > 0, got {R!r}")
    return noise_temperature(budget, complex(R, 0.0))


def optimal_real_source(budget: NoiseBudget) -> float:
    """Noise resistance sqrt(S_VV / S_II_sys)."""
    return math.sqrt(budget.S_VV / budget.S_II_sys)


def t_min_on_resonance(budget: NoiseBudget) -> float:
    """Minimum noise temperature over real sources (K); correlations drop out."""
    return (0.5 * math.sqrt(budget.S_VV * budget.S_II_sys) + 0.5 * budget.reS_IV) / K_B


def t_min_complex(budget: NoiseBudget) -> float:
    """Minimum noise temperature over all complex sources (K)."""
    rad = budget.radicand
    if rad < 0:
        raise InconsistentBudgetError(
            f"S_VV*S_II - Im(S_IV)^2 = {rad:.3e} < 0; budget is unphysical"
        )
    return (0.5 * math.sqrt(rad) + 0.5 * budget.reS_IV) / K_B


def optimal_complex_source(budget: NoiseBudget) -> complex:
    """Source impedance reaching :func:`t_min_complex`."""
    if budget.radicand < 0:
        raise InconsistentBudgetError("S_VV*S_II - Im(S_IV)^2 < 0; budget is unphysical")
    X = budget.imS_IV / budget.S_II_sys
    R = math.sqrt(max(budget.S_VV / budget.S_II_sys - X**2, 0.0))
    return complex(R, X)


def eta(budget: NoiseBudget) -> float:
    """Minimum complex-source noise temperature in units of the SQL hbar*omega/2."""
    return K_B * t_min_complex(budget) / (0.5 * HBAR * budget.omega)


def on_res_sql_ratio(squid: FirstStageSquid) -> float:
    """Bare TC SQUID: on-resonance minimum noise temperature over the SQL."""
    return 4.0 * math.sqrt(11.0) * K_B * squid.Tj * squid.Lsq / (HBAR * squid.Rj)


def epsilon_uc_system(chain: ChainConfig, omega: float) -> float:
    """Full-chain uncoupled energy sensitivity kappa^2 Lin S_II_sys / 2 (J/Hz)."""
    return chain.coupling.k2L * full_system_imprecision(chain, omega) / 2.0


def figures_of_merit(
    chain: ChainConfig,
    omega: float,
    Q: Optional[float] = None,
    Tres: Optional[float] = None,
) -> FiguresOfMerit:
    """All figures of merit at ``omega``; the couplings need ``Q`` (and ``Tres`` for scan)."""
    budget = noise_budget(chain, omega)
    kg_on = kg_scan = None
    if Q is not None:
        kg_on = math.sqrt(on_resonance_coupling_sq(chain, omega, Q))
        if Tres is not None:
            n = thermal_occupation(omega, Tres)
            kg_scan = math.sqrt(scan_coupling_sq(chain, omega, Q, n))
    return FiguresOfMerit(
        T_min_on_res=t_min_on_resonance(budget),
        T_min_complex=t_min_complex(budget),
        eta=eta(budget),
        epsilon_uc=epsilon_uc_system(chain, omega),
        kappa_g_opt_on_res=kg_on,
        kappa_g_opt_scan=kg_scan,
    )


def _check_coupling(kappa_g_sq: float) -> float:
    if kappa_g_sq > 1.0:
        raise CouplingError(
            f"matched kappa_g = {math.sqrt(kappa_g_sq):.4g} exceeds 1; resonator too lossy to match"
        )
    return kappa_g_sq


def on_resonance_coupling_sq(chain: ChainConfig, omega0: float, Q: float) -> float:
    """kappa_g^2 noise-matching a resonator of quality factor ``Q`` at ``omega0``.

    S_VV grows and S_II_sys shrinks exactly as kappa^2 Lin, so the matching
    condition R = sqrt(S_VV/S_II_sys) is solved in closed form for kappa^2 Lin.
    With R = omega0 Ltot / Q the resonator inductance drops out of kappa_g^2.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q!r}")
    k2L = chain.coupling.k2L
    budget = noise_budget(chain, omega0)
    backaction_per_k2L = budget.S_VV / k2L
    imprecision_times_k2L = budget.S_II_sys * k2L
    return _check_coupling(omega0 * math.sqrt(imprecision_times_k2L / backaction_per_k2L) / Q)


def match_on_resonance(chain: ChainConfig, resonator: Resonator) -> OnResonanceMatch:
    """Coupling that noise-matches ``resonator`` on resonance, and the T_min reached."""
    omega0, Q = resonator.resonance()
    kg_sq = on_resonance_coupling_sq(chain, omega0, Q)
    budget = noise_budget(chain, omega0)
    return OnResonanceMatch(math.sqrt(kg_sq), t_min_on_resonance(budget), kg_sq * resonator.Ltot)


def scan_optimal_imprecision(omega: float, R: float, eta: float, n: float) -> float:
    """System imprecision (A^2/Hz) that maximizes scan sensitivity."""
    _check_positive("omega", omega)
    _check_positive("R", R)
    _check_positive("eta", eta)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    a = 2.0 * n + 1.0
    return HBAR * omega / R * 2.0 * eta**2 / (a + math.sqrt(a * a + 8.0 * eta**2))


def scan_coupling_sq(chain: ChainConfig, omega: float, Q: float, n: float) -> float:
    budget = noise_budget(chain, omega)
    eta_ = eta(budget)
    eps = epsilon_uc_system(chain, omega)
    a = 2.0 * n + 1.0
    return _check_coupling(eps / HBAR * (a + math.sqrt(a * a + 8.0 * eta_**2)) / (Q * eta_**2))


def match_scan_sensitivity(
    chain: ChainConfig,
    resonator: Resonator,
    omega: Optional[float] = None,
    n: Optional[float] = None,
) -> float:
    """Global coupling kappa_g that optimizes scan sensitivity.

    ``omega`` defaults to the resonance and ``n`` to the thermal occupation
    at the resonator temperature. eta and epsilon_uc do not depend on the
    coupling, so no iteration is needed.
    """
    if omega is None:
        omega = resonator.omega0
    if n is None:
        n = thermal_occupation(omega, resonator.Tres)
    return math.sqrt(scan_coupling_sq(chain, omega, resonator.Q, n))


def detuned_resonator_for_optimum(
    chain: ChainConfig, omega: float, Ltot: float, Tres: float
) -> Resonator:
    """Series RLC presenting the optimal complex source impedance at ``omega``."""
    Z = optimal_complex_source(noise_budget(chain, omega))
    reactance_left = omega * Ltot - Z.imag
    if reactance_left <= 0:
        raise ValueError(
            f"omega*Ltot = {omega * Ltot:.4g} Ohm does not exceed X_opt = {Z.imag:.4g} Ohm; "
            "no positive capacitance realizes the optimum"
        )
    return Resonator(Ltot=Ltot, Cres=1.0 / (omega * reactance_left), R=Z.real, Tres=Tres)


def _golden_section(f, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def brute_force_min_noise(
    budget: NoiseBudget,
    R_range: Tuple[float, float],
    X_range: Tuple[float, float],
    grid_points: int = 300,
    rtol: float = 1e-6,
) -> OracleResult:
    """Grid search for the minimum noise temperature, then golden-section refinement.

    Independent of the closed forms: the noise temperature is evaluated
    directly on a grid over (R, X). ``X_range=(0, 0)`` restricts the search
    to real sources. R is log-spaced when the range spans more than a decade.
    """
    if grid_points < 100:
        raise ValueError("grid_points must be >= 100")
    r_lo, r_hi = R_range
    x_lo, x_hi = X_range
    if not 0 < r_lo < r_hi:
        raise ValueError(f"invalid R_range {R_range!r}")
    if x_hi < x_lo:
        raise ValueError(f"invalid X_range {X_range!r}")

    def objective(R, X):
        s_tot = (
            budget.S_VV
            + (R * R + X * X) * budget.S_II_sys
            - 2.0 * X * budget.imS_IV
            + 2.0 * R * budget.reS_IV
        )
        return s_tot / (4.0 * K_B * R)

    if r_hi / r_lo > 10:
        R = np.geomspace(r_lo, r_hi, grid_points)
    else:
        R = np.linspace(r_lo, r_hi, grid_points)
    fixed_x = x_hi == x_lo
    X = np.array([x_lo]) if fixed_x else np.linspace(x_lo, x_hi, grid_points)

    T = objective(R[:, None], X[None, :])
    i, j = np.unravel_index(np.argmin(T), T.shape)
    if i in (0, len(R) - 1) or (not fixed_x and j in (0, len(X) - 1)):
        raise OracleBoundaryError(
            f"grid minimum at R={R[i]:.4g}, X={X[j]:.4g} lies on the search boundary"
        )

    r_best, x_best = float(R[i]), float(X[j])
    r_bracket = (float(R[i - 1]), float(R[i + 1]))
    x_bracket = None if fixed_x else (float(X[j - 1]), float(X[j + 1]))
    x_scale = max(abs(x_lo), abs(x_hi))
    for _ in range(50):
        r_new = _golden_section(lambda r: objective(r, x_best), *r_bracket, rtol * r_best)
        x_new = x_best
        if x_bracket is not None:
            x_new = _golden_section(lambda x: objective(r_new, x), *x_bracket, rtol * x_scale)
        done = abs(r_new - r_best) <= rtol * r_best and abs(x_new - x_best) <= rtol * x_scale
        r_best, x_best = r_new, x_new
        if done:
            break
    return OracleResult(float(objective(r_best, x_best)), complex(r_best, x_best))
