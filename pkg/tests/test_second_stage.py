import math
import warnings

import pytest

from squidchain.constants import K_B, PHI0
from squidchain.first_stage import SQUID_C1, InputCoupling
from squidchain.second_stage import (
    CRYO_RF,
    HIGH_SPEED_RT,
    MAGNICON_XXF1,
    ChainConfig,
    ChainWarning,
    CryoRFPreamp,
    OpAmpPreamp,
    OutOfBandError,
    PreampBand,
    PrototypeRecord,
    SecondStageDesign,
    coupling_time_constant,
    cryo_rf_referred_flux_noise,
    full_system_imprecision,
    input_inductance,
    opamp_referred_flux_noise,
    referred_imprecision,
    scale_array,
    total_second_stage_flux_noise,
)

U_PHI0 = 1e-6 * PHI0


def test_prototype_reproduced_at_its_own_size():
    proto = PrototypeRecord()
    s = scale_array(SecondStageDesign(20, 1, T2=4.0))
    assert s.P == pytest.approx(proto.P)
    assert s.dPhi_dI == pytest.approx(proto.dPhi_dI)
    assert s.dV_dI == pytest.approx(proto.dV_dI)
    assert s.dV_dPhi == pytest.approx(proto.dV_dPhi)
    assert s.Phi_n_squid == pytest.approx(proto.Phi_n_squid)


@pytest.mark.parametrize(
    "n_ser, n_par, P, L2, dV_dPhi",
    [
        (16, 1, 0.6672e-9, 4.16e-9, 5.44e11),
        (32, 2, 2.6688e-9, 10.16e-9, 1.088e12),
        (48, 3, 6.0048e-9, 20.0e-9, 1.632e12),
    ],
)
def test_design_table(n_ser, n_par, P, L2, dV_dPhi):
    d = SecondStageDesign(n_ser, n_par, T2=1.0)
    s = scale_array(d)
    assert s.P == pytest.approx(P, rel=1e-9)
    assert input_inductance(d) == pytest.approx(L2, rel=1e-9)
    assert s.dV_dPhi == pytest.approx(dV_dPhi, rel=1e-9)
    assert s.dV_dI == pytest.approx(64.9 * 0.8, rel=1e-9)
    assert coupling_time_constant(d, 6.0) == pytest.approx(L2 / 6.0, rel=1e-9)


def test_array_noise_scales_with_temperature_and_count():
    a = scale_array(SecondStageDesign(48, 3, T2=1.0)).Phi_n_squid
    b = scale_array(SecondStageDesign(48, 3, T2=2.0)).Phi_n_squid
    assert (b / a) ** 2 == pytest.approx(2.0)
    expected = 0.297 * math.sqrt(20 / 144 / 4)
    assert a / U_PHI0 == pytest.approx(expected, rel=1e-9)


def test_negative_slope_record():
    neg = PrototypeRecord.negative_slope()
    assert neg.slope == "negative"
    assert neg.dV_dI == 154.0
    assert neg.Phi_n_squid / U_PHI0 == pytest.approx(0.247)


def test_low_t2_warns():
    with pytest.warns(ChainWarning, match="T2"):
        scale_array(SecondStageDesign(48, 3, T2=0.5))


def test_magnicon_referred_to_prototype():
    d = SecondStageDesign(20, 1, T2=4.0)
    bare = OpAmpPreamp(Vn=0.32e-9, In=2.7e-12)
    assert math.sqrt(opamp_referred_flux_noise(d, bare)) / U_PHI0 == pytest.approx(0.2595, rel=1e-3)


def test_lead_noise_adds_in_quadrature():
    d = SecondStageDesign(16, 1, T2=1.0)
    bare = OpAmpPreamp(Vn=0.33e-9, In=2.6e-12)
    leads = OpAmpPreamp(Vn=0.33e-9, In=2.6e-12, Rlead=1.0, Tlead=200.0)
    extra = opamp_referred_flux_noise(d, leads) - opamp_referred_flux_noise(d, bare)
    assert extra == pytest.approx(4 * K_B * 200.0 / (6.8e11 * 16 / 20) ** 2, rel=1e-9)


def test_cryo_rf_referral():
    d = SecondStageDesign(20, 1, T2=4.0)
    with pytest.warns(ChainWarning):
        phi = math.sqrt(cryo_rf_referred_flux_noise(d, CRYO_RF)) / U_PHI0
    assert phi == pytest.approx(0.06023, rel=1e-3)


def test_cryo_rf_mismatch_warns():
    d = SecondStageDesign(20, 4, T2=1.0)
    with pytest.warns(ChainWarning, match="R_dyn"):
        cryo_rf_referred_flux_noise(d, CRYO_RF)


def test_total_flux_noise_48x3_cryo():
    d = SecondStageDesign(48, 3, T2=1.0)
    phi = math.sqrt(total_second_stage_flux_noise(d, CRYO_RF)) / U_PHI0
    assert phi == pytest.approx(0.0597216, rel=1e-5)


def test_band_must_fit_preamp():
    with pytest.raises(ValueError, match="exceeds"):
        PreampBand(0.0, 100e6, MAGNICON_XXF1)
    with pytest.raises(ValueError):
        PreampBand(1e6, 100e6, CRYO_RF)


def test_overlapping_bands_rejected():
    with pytest.raises(ValueError, match="disjoint"):
        ChainConfig(
            SQUID_C1,
            InputCoupling(100e-9, 0.1),
            SecondStageDesign(16, 1, T2=1.0),
            (PreampBand(0.0, 50e6, MAGNICON_XXF1), PreampBand(40e6, 300e6, HIGH_SPEED_RT)),
        )


def test_second_stage_requires_band():
    with pytest.raises(ValueError):
        ChainConfig(SQUID_C1, InputCoupling(100e-9, 0.1), SecondStageDesign(16, 1, T2=1.0))


def test_shared_edge_goes_to_lower_band(rt_chain):
    assert rt_chain.preamp_at(50e6) is MAGNICON_XXF1
    assert rt_chain.preamp_at(50.000001e6) is HIGH_SPEED_RT
    with pytest.raises(OutOfBandError):
        rt_chain.preamp_at(301e6)


def test_covers(rt_chain, cryo_chain, tc_chain):
    assert rt_chain.covers(1e6, 300e6)
    assert not rt_chain.covers(1e6, 301e6)
    assert not cryo_chain.covers(1e6, 50e6)
    assert tc_chain.covers(1.0, 1e12)
    assert tc_chain.top_band_edge == math.inf


def test_tc_only_has_no_follow_on_noise(tc_chain):
    assert referred_imprecision(tc_chain, 2 * math.pi * 30e6) == 0.0


def test_rolloff(cryo_chain):
    tau = 20e-9 / 6.0
    lo = referred_imprecision(cryo_chain, 2 * math.pi * 5e6)
    hi = referred_imprecision(cryo_chain, 2 * math.pi * 50e6)
    ratio = (1 + (2 * math.pi * 50e6 * tau) ** 2) / (1 + (2 * math.pi * 5e6 * tau) ** 2)
    assert hi / lo == pytest.approx(ratio, rel=1e-12)


def test_referral_matches_closed_form(cryo_chain):
    # dI/dPhi = -1/Lsq and M^2 = k2L Lsq give S = Phi^2 (1+w^2 tau^2) Lsq / (M_IN2^2 k2L)
    omega = 2 * math.pi * 30e6
    phi_sq = total_second_stage_flux_noise(cryo_chain.second_stage, CRYO_RF)
    tau = 20e-9 / 6.0
    expected = phi_sq * (1 + (omega * tau) ** 2) * 200e-12 / (105e-12**2 * 1e-9)
    assert referred_imprecision(cryo_chain, omega) == pytest.approx(expected, rel=1e-12)


def test_full_imprecision_exceeds_tc(cryo_chain, tc_chain):
    omega = 2 * math.pi * 30e6
    assert full_system_imprecision(cryo_chain, omega) > full_system_imprecision(tc_chain, omega)


def test_preamp_validation():
    with pytest.raises(ValueError):
        OpAmpPreamp(Vn=-1e-9, In=1e-12)
    with pytest.raises(ValueError):
        CryoRFPreamp(Tn=-1.0)
    with pytest.raises(ValueError):
        SecondStageDesign(0, 1, T2=1.0)
    with pytest.raises(ValueError):
        PrototypeRecord(slope="flat")


def test_no_warnings_for_presets(cryo_chain, rt_chain):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for chain in (cryo_chain, rt_chain):
            full_system_imprecision(chain, 2 * math.pi * 30e6)
