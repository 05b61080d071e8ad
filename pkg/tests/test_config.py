import math

import pytest

from squidchain.config import (
    ConfigError,
    SweepConfig,
    assemble_bands,
    build_config,
    config_from_presets,
    load_config,
)
from squidchain.second_stage import CRYO_RF, HIGH_SPEED_RT, MAGNICON_XXF1

FULL = """
[first_stage]
preset = "c1"

[coupling]
Lin = "100 nH"
kappa = 0.1

[second_stage]
preset = "48x3"
T2 = "1 K"

[[preamp]]
preset = "cryorf"

[sweep]
f_start = "5 MHz"
f_stop = "50 MHz"
points = 46
grid = "linear"
outputs = ["eta", "epsilon_uc", "kappa_g_scan"]

[resonator]
Q = 1e5
T = "20 mK"
"""


def write(tmp_path, text):
    path = tmp_path / "chain.toml"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_full(tmp_path):
    cfg = load_config(write(tmp_path, FULL))
    assert cfg.chain.second_stage.label == "48x3"
    assert cfg.chain.preamp_bands[0].preamp == CRYO_RF
    assert (cfg.f_start, cfg.f_stop, cfg.points, cfg.grid) == (5e6, 50e6, 46, "linear")
    assert cfg.outputs == ("eta", "epsilon_uc", "kappa_g_scan")
    assert cfg.resonator_Q == 1e5
    assert cfg.resonator_T == pytest.approx(0.02)


def test_defaults_are_tc_only():
    cfg = build_config({})
    assert cfg.chain.second_stage is None
    assert cfg.f_start == 5e6 and cfg.f_stop == 300e6


def test_default_preamps_cover_to_300_mhz():
    cfg = build_config({"second_stage": {"preset": "16x1"}})
    assert [b.preamp for b in cfg.chain.preamp_bands] == [MAGNICON_XXF1, HIGH_SPEED_RT]
    assert cfg.f_stop == 300e6


def test_f_stop_defaults_to_top_band_edge():
    cfg = build_config({"second_stage": {"preset": "16x1"}, "preamp": [{"preset": "magnicon"}]})
    assert cfg.f_stop == 50e6


def test_custom_components():
    cfg = build_config(
        {
            "first_stage": {"I0": "10 uA", "Rj": "4 ohm", "Lsq": "100 pH", "Tj": "100 mK"},
            "second_stage": {"N_ser": 24, "N_par": 2, "T2": "2 K", "slope": "negative"},
            "preamp": [{"type": "opamp", "Vn": "1 nV/rtHz", "In": "1 pA/rtHz", "f_max": "20 MHz"}],
        }
    )
    assert cfg.chain.first_stage.Lsq == pytest.approx(100e-12)
    assert cfg.chain.second_stage.proto.slope == "negative"
    assert cfg.f_stop == 20e6


def test_explicit_bands():
    cfg = build_config(
        {
            "second_stage": {"preset": "32x2"},
            "preamp": [
                {"preset": "rt300", "band": ["30 MHz", "300 MHz"]},
                {"preset": "magnicon", "band": ["0 Hz", "30 MHz"]},
            ],
            "sweep": {"f_start": "1 MHz", "f_stop": "200 MHz"},
        }
    )
    assert [b.preamp.name for b in cfg.chain.preamp_bands] == ["magnicon", "rt300"]
    assert cfg.chain.preamp_at(30e6) == MAGNICON_XXF1


def test_assemble_bands_implicit():
    bands = assemble_bands([(HIGH_SPEED_RT, None), (MAGNICON_XXF1, None)])
    assert [(b.f_lo, b.f_hi) for b in bands] == [(0.0, 50e6), (50e6, 300e6)]


def test_mixed_bands_rejected():
    with pytest.raises(ConfigError, match="every entry or for none"):
        assemble_bands([(HIGH_SPEED_RT, (50e6, 300e6)), (MAGNICON_XXF1, None)])


@pytest.mark.parametrize(
    "data, match",
    [
        ({"bogus": {}}, "unknown key"),
        ({"coupling": {"Lin": "1 nH", "kappa": 2.0}}, "coupling"),
        ({"coupling": {"Lin": 1e-9}}, "coupling.Lin"),
        ({"first_stage": {"preset": "c9"}}, "unknown preset"),
        ({"first_stage": {"Rj": "6 ohm"}}, "missing key"),
        ({"second_stage": {"N_ser": 0, "N_par": 1, "T2": "1 K"}}, "N_ser"),
        ({"second_stage": {"preset": "16x1", "slope": "flat"}}, "slope"),
        ({"preamp": [{"preset": "cryorf"}]}, "second_stage"),
        ({"second_stage": {"preset": "16x1"}, "preamp": []}, "non-empty"),
        ({"second_stage": {"preset": "16x1"}, "preamp": [{"preset": "cryorf", "Vn": "1 nV/rtHz"}]}, "do not apply"),
        ({"second_stage": {"preset": "48x3"}, "preamp": [{"preset": "cryorf"}], "sweep": {"f_start": "1 MHz"}}, "not covered"),
        ({"sweep": {"f_start": "10 MHz", "f_stop": "1 MHz"}}, "f_start < f_stop"),
        ({"sweep": {"points": 1}}, "points"),
        ({"sweep": {"grid": "cubic"}}, "grid"),
        ({"sweep": {"outputs": ["noise"]}}, "unknown output"),
        ({"resonator": {"Q": 0.5}}, "resonator.Q"),
        ({"resonator": {"T": "-1 K"}}, "resonator.T"),
    ],
)
def test_invalid(data, match):
    with pytest.raises(ConfigError, match=match):
        build_config(data)


def test_parse_error_names_location(tmp_path):
    with pytest.raises(ConfigError, match="line 2"):
        load_config(write(tmp_path, "[sweep]\npoints = = 3\n"))


def test_validation_error_names_file(tmp_path):
    path = write(tmp_path, "[sweep]\npoints = 1\n")
    with pytest.raises(ConfigError, match="chain.toml"):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "absent.toml")


def test_presets():
    cfg = config_from_presets(["c1", "48x3", "cryorf"], {"sweep": {"f_stop": "50 MHz"}})
    assert cfg.chain.second_stage.label == "48x3"
    assert cfg.f_stop == 50e6
    with pytest.raises(ConfigError, match="unknown preset"):
        config_from_presets(["c2"])


def test_sweep_config_is_frozen():
    cfg = build_config({})
    with pytest.raises(AttributeError):
        cfg.points = 3
    assert isinstance(cfg, SweepConfig)
    assert math.isinf(cfg.chain.top_band_edge)
