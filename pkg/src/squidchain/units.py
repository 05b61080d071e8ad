"""Parsing and formatting of engineering-unit strings such as ``"200 pH"``.

Only the handful of dimensions this package needs are known. A quantity
string is a number, optional whitespace, an SI prefix and a base unit.
"""

import math
import re

from .constants import PHI0

PREFIXES = {
    "f": 1e-15,
    "p": 1e-12,
    "n": 1e-9,
    "u": 1e-6,
    "µ": 1e-6,
    "μ": 1e-6,
    "m": 1e-3,
    "": 1.0,
    "k": 1e3,
    "M": 1e6,
    "G": 1e9,
}

# base-unit spellings per dimension
DIMENSIONS = {
    "inductance": ("H",),
    "capacitance": ("F",),
    "resistance": ("ohm", "Ohm", "Ω"),
    "current": ("A",),
    "temperature": ("K",),
    "frequency": ("Hz",),
    "power": ("W",),
    "voltage_asd": ("V/rtHz", "V/sqrt(Hz)", "V/√Hz"),
    "current_asd": ("A/rtHz", "A/sqrt(Hz)", "A/√Hz"),
    "flux_asd": ("Phi0/rtHz", "Phi0/sqrt(Hz)", "Φ0/√Hz"),
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S.*?)?\s*$")


class UnitError(ValueError):
    pass


def parse_quantity(text, dimension: str) -> float:
    """Return the SI value of ``text`` checked against ``dimension``.

    Bare numbers are rejected: every dimensioned value must say its unit.
    """
    bases = DIMENSIONS[dimension]
    if not isinstance(text, str):
        raise UnitError(f"expected a string with a {dimension} unit (e.g. '1 {bases[0]}'), got {text!r}")
    m = _QUANTITY.match(text)
    if m is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    number, unit = float(m.group(1)), (m.group(2) or "").replace(" ", "")
    if not unit:
        raise UnitError(f"{text!r} has no unit; expected {dimension} such as '1 {bases[0]}'")
    for base in bases:
        if unit.endswith(base):
            prefix = unit[: -len(base)]
            if prefix in PREFIXES:
                value = number * PREFIXES[prefix]
                if dimension == "flux_asd":
                    value *= PHI0
                if not math.isfinite(value):
                    raise UnitError(f"{text!r} is not finite")
                return value
    raise UnitError(f"unit {unit!r} in {text!r} is not a {dimension} unit ({', '.join(bases)})")


def format_quantity(value: float, unit: str, digits: int = 4) -> str:
    """Engineering notation with an SI prefix, e.g. ``format_quantity(2e-8, 'H') -> '20 nH'``."""
    if value == 0 or not math.isfinite(value):
        return f"{value:g} {unit}"
    exp3 = int(math.floor(math.log10(abs(value)) / 3) * 3)
    exp3 = min(max(exp3, -15), 9)
    prefix = {-15: "f", -12: "p", -9: "n", -6: "u", -3: "m", 0: "", 3: "k", 6: "M", 9: "G"}[exp3]
    return f"{value / 10**exp3:.{digits}g} {prefix}{unit}"
