import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from squidchain.constants import HBAR, K_B
from squidchain.resonator import Resonator, thermal_occupation


def test_from_target_round_trip():
    r = Resonator.from_target(30e6, 1e6, 1e-6, 0.01)
    omega0, Q = r.resonance()
    assert omega0 == pytest.approx(2 * math.pi * 30e6, rel=1e-12)
    assert Q == pytest.approx(1e6, rel=1e-12)
    assert r.R == pytest.approx(2 * math.pi * 30e6 * 1e-6 / 1e6)


def test_impedance_real_at_resonance():
    r = Resonator.from_target(30e6, 1e4, 1e-6, 0.01)
    z = r.impedance(r.omega0)
    assert z.real == pytest.approx(r.R)
    assert abs(z.imag) < 1e-9 * r.omega0 * r.Ltot


def test_impedance_inductive_above_resonance():
    r = Resonator.from_target(30e6, 1e4, 1e-6, 0.01)
    assert r.impedance(1.01 * r.omega0).imag > 0
    assert r.impedance(0.99 * r.omega0).imag < 0


@pytest.mark.parametrize("field", ["Ltot", "Cres", "R"])
def test_validation(field):
    kwargs = dict(Ltot=1e-6, Cres=1e-11, R=1e-3, Tres=0.01)
    kwargs[field] = 0.0
    with pytest.raises(ValueError):
        Resonator(**kwargs)


def test_thermal_occupation_value():
    omega = 2 * math.pi * 30e6
    x = HBAR * omega / (K_B * 0.01)
    assert thermal_occupation(omega, 0.01) == pytest.approx(1 / (math.exp(x) - 1), rel=1e-12)


def test_thermal_occupation_zero_temperature():
    assert thermal_occupation(2 * math.pi * 1e9, 0.0) == 0.0


def test_thermal_occupation_deep_quantum_no_overflow():
    assert thermal_occupation(2 * math.pi * 1e12, 1e-4) == 0.0


@given(st.floats(1e5, 1e9), st.floats(1.0, 10.0))
def test_classical_limit(f, T):
    omega = 2 * math.pi * f
    x = HBAR * omega / (K_B * T)
    # n + 1/2 approaches kT/hbar omega when x << 1
    n = thermal_occupation(omega, T)
    assert n + 0.5 == pytest.approx(1 / x, rel=x**2 / 10 + 1e-12)
