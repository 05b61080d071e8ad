import pytest

from squidchain.constants import PHI0
from squidchain.units import UnitError, format_quantity, parse_quantity


@pytest.mark.parametrize(
    "text, dimension, value",
    [
        ("200 pH", "inductance", 200e-12),
        ("200pH", "inductance", 200e-12),
        ("6 Ohm", "resistance", 6.0),
        ("6 Ω", "resistance", 6.0),
        ("150 mK", "temperature", 0.15),
        ("6.3 uA", "current", 6.3e-6),
        ("6.3 µA", "current", 6.3e-6),
        ("1e-3 GHz", "frequency", 1e6),
        ("0.33 nV/rtHz", "voltage_asd", 0.33e-9),
        ("2.6 pA/sqrt(Hz)", "current_asd", 2.6e-12),
        ("0.3 uPhi0/rtHz", "flux_asd", 0.3e-6 * PHI0),
    ],
)
def test_parse(text, dimension, value):
    assert parse_quantity(text, dimension) == pytest.approx(value, rel=1e-12)


@pytest.mark.parametrize(
    "text, dimension",
    [("200", "inductance"), (200e-12, "inductance"), ("200 pF", "inductance"), ("abc", "frequency"), ("5 xHz", "frequency")],
)
def test_parse_rejects(text, dimension):
    with pytest.raises(UnitError):
        parse_quantity(text, dimension)


@pytest.mark.parametrize(
    "value, unit, text",
    [(20e-9, "H", "20 nH"), (6.0, "Ohm", "6 Ohm"), (30e6, "Hz", "30 MHz"), (0.0, "K", "0 K"), (1.5e-3, "K", "1.5 mK")],
)
def test_format(value, unit, text):
    assert format_quantity(value, unit) == text
