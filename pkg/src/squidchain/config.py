"""Sweep configuration files and built-in presets.

Configuration is TOML. Every dimensioned value is a string with a unit
(``Lsq = "200 pH"``); bare numbers are accepted only for dimensionless keys.
Unknown sections or keys are errors. Example::

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
    grid = "log"
    outputs = ["eta", "epsilon_uc"]

    [resonator]
    Q = 1e6
    T = "10 mK"

Preamplifier bands: each ``[[preamp]]`` entry may give ``band = [lo, hi]``.
Without one, entries are ordered by their upper frequency limit and each
band runs from the previous band's top (or the amplifier's own lower limit)
to its own upper limit.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .first_stage import SQUID_C1, FirstStageSquid, InputCoupling
from .second_stage import (
    CRYO_RF,
    HIGH_SPEED_RT,
    MAGNICON_XXF1,
    ChainConfig,
    CryoRFPreamp,
    OpAmpPreamp,
    PreampBand,
    PrototypeRecord,
    SecondStageDesign,
)
from .units import UnitError, parse_quantity

OUTPUTS = ("eta", "epsilon_uc", "t_min_on_res", "t_min_complex", "kappa_g_on_res", "kappa_g_scan")

# First-stage SQUIDs. c1: device C1 of Wellstood, Urbina and Clarke (1987),
# I0 = 6.3 uA, Rj = 6 Ohm, Lsq = 200 pH, shunts self-heated to 150 mK.
FIRST_STAGE_PRESETS = {"c1": SQUID_C1}

# Second-stage arrays scaled from the measured 20x1 prototype (positive
# feedback slope), operated at T2 = 1 K with L_SQ2 = 120 pH per unit SQUID
# and 2 nH of interconnect. 16x1 is the high-bandwidth, 32x2 the medium and
# 48x3 the low-bandwidth design.
SECOND_STAGE_PRESETS = {
    "16x1": SecondStageDesign(N_ser=16, N_par=1, T2=1.0),
    "32x2": SecondStageDesign(N_ser=32, N_par=2, T2=1.0),
    "48x3": SecondStageDesign(N_ser=48, N_par=3, T2=1.0),
}

# Follow-on amplifiers. magnicon: Magnicon XXF-1 datasheet (0.33 nV/rtHz,
# 2.6 pA/rtHz, 50 MHz). rt300: ultra-high-speed SQUID electronics of Drung
# et al. (0.3 nV/rtHz, 6 pA/rtHz, 300 MHz). Both read out through copper
# coax modelled as 1 Ohm at 200 K. cryorf: 4 K, 50 Ohm amplifier with
# Tn = 2 K over 5-500 MHz, on superconducting coax.
PREAMP_PRESETS = {"magnicon": MAGNICON_XXF1, "rt300": HIGH_SPEED_RT, "cryorf": CRYO_RF}

PRESET_NAMES = tuple(FIRST_STAGE_PRESETS) + tuple(SECOND_STAGE_PRESETS) + tuple(PREAMP_PRESETS)

# Any coupling gives the same eta, epsilon_uc and kappa_g; kappa^2 Lin = 1 nH.
DEFAULT_COUPLING = InputCoupling(Lin=100e-9, kappa=0.1)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class SweepConfig:
    chain: ChainConfig
    f_start: float = 5e6
    f_stop: float = 300e6
    points: int = 200
    grid: str = "log"
    resonator_Q: float = 1e6
    resonator_T: float = 0.01
    outputs: tuple = ("eta", "epsilon_uc")

    def __post_init__(self):
        if not 0 < self.f_start < self.f_stop:
            raise ConfigError(f"sweep: need 0 < f_start < f_stop, got {self.f_start:g}, {self.f_stop:g}")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError(f"sweep.points: need an integer >= 2, got {self.points!r}")
        if self.grid not in ("log", "linear"):
            raise ConfigError(f"sweep.grid: must be 'log' or 'linear', got {self.grid!r}")
        if not self.outputs:
            raise ConfigError("sweep.outputs: at least one output is required")
        for name in self.outputs:
            if name not in OUTPUTS:
                raise ConfigError(f"sweep.outputs: unknown output {name!r}; choose from {', '.join(OUTPUTS)}")
        if not self.resonator_Q >= 1:
            raise ConfigError(f"resonator.Q: must be >= 1, got {self.resonator_Q!r}")
        if not self.resonator_T >= 0:
            raise ConfigError(f"resonator.T: must be >= 0, got {self.resonator_T!r}")
        top = self.chain.top_band_edge
        if self.f_stop > top or not self.chain.covers(self.f_start, self.f_stop):
            raise ConfigError(
                f"sweep: range {self.f_start:.6g}-{self.f_stop:.6g} Hz is not covered by the "
                f"preamplifier bands (top edge {top:.6g} Hz)"
            )


def _quantity(section: Mapping, key: str, dimension: str, where: str) -> float:
    try:
        return parse_quantity(section[key], dimension)
    except UnitError as exc:
        raise ConfigError(f"{where}.{key}: {exc}") from None


def _number(section: Mapping, key: str, where: str) -> float:
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _check_keys(section: Any, allowed: Iterable[str], where: str) -> None:
    if not isinstance(section, Mapping):
        raise ConfigError(f"{where}: expected a table, got {type(section).__name__}")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _preset(table: Mapping, where: str, presets: Mapping):
    name = table.get("preset")
    if name is None:
        return None
    if name not in presets:
        raise ConfigError(f"{where}.preset: unknown preset {name!r}; choose from {', '.join(presets)}")
    return presets[name]


_FIRST_UNITS = {"I0": "current", "Rj": "resistance", "Lsq": "inductance", "Tj": "temperature", "Cj": "capacitance"}


def _first_stage(table: Mapping) -> FirstStageSquid:
    where = "first_stage"
    _check_keys(table, {"preset", *_FIRST_UNITS}, where)
    base = _preset(table, where, FIRST_STAGE_PRESETS)
    fields = {k: _quantity(table, k, dim, where) for k, dim in _FIRST_UNITS.items() if k in table}
    if base is None:
        missing = [k for k in ("I0", "Rj", "Lsq", "Tj") if k not in fields]
        if missing:
            raise ConfigError(f"{where}: missing key(s) {', '.join(missing)} (or give a preset)")
        base = FirstStageSquid(**fields)
    else:
        base = replace(base, **fields)
    return base


def _coupling(table: Mapping) -> InputCoupling:
    where = "coupling"
    _check_keys(table, {"Lin", "kappa"}, where)
    Lin = _quantity(table, "Lin", "inductance", where) if "Lin" in table else DEFAULT_COUPLING.Lin
    kappa = _number(table, "kappa", where) if "kappa" in table else DEFAULT_COUPLING.kappa
    try:
        return InputCoupling(Lin=Lin, kappa=kappa)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


_SECOND_UNITS = {"T2": "temperature", "L_SQ2": "inductance", "L_int": "inductance"}


def _second_stage(table: Mapping) -> SecondStageDesign:
    where = "second_stage"
    _check_keys(table, {"preset", "N_ser", "N_par", "slope", *_SECOND_UNITS}, where)
    base = _preset(table, where, SECOND_STAGE_PRESETS)
    fields: dict = {k: _quantity(table, k, dim, where) for k, dim in _SECOND_UNITS.items() if k in table}
    for key in ("N_ser", "N_par"):
        if key in table:
            n = table[key]
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ConfigError(f"{where}.{key}: expected an integer >= 1, got {n!r}")
            fields[key] = n
    if "slope" in table:
        slope = table["slope"]
        if slope == "positive":
            fields["proto"] = PrototypeRecord()
        elif slope == "negative":
            fields["proto"] = PrototypeRecord.negative_slope()
        else:
            raise ConfigError(f"{where}.slope: must be 'positive' or 'negative', got {slope!r}")
    try:
        if base is None:
            missing = [k for k in ("N_ser", "N_par", "T2") if k not in fields]
            if missing:
                raise ConfigError(f"{where}: missing key(s) {', '.join(missing)} (or give a preset)")
            return SecondStageDesign(**fields)
        return replace(base, **fields)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


_OPAMP_UNITS = {"Vn": "voltage_asd", "In": "current_asd", "Rlead": "resistance", "Tlead": "temperature", "f_max": "frequency"}
_CRYO_UNITS = {"Tn": "temperature", "f_min": "frequency", "f_max": "frequency"}


def _preamp(table: Mapping, index: int):
    """Returns (preamp, explicit band or None)."""
    where = f"preamp[{index}]"
    _check_keys(table, {"preset", "type", "band", "name", *_OPAMP_UNITS, *_CRYO_UNITS}, where)
    base = _preset(table, where, PREAMP_PRESETS)
    kind = table.get("type")
    if kind is None:
        if base is None:
            raise ConfigError(f"{where}: give either a preset or a type ('opamp' or 'cryorf')")
        kind = "opamp" if isinstance(base, OpAmpPreamp) else "cryorf"
    if kind not in ("opamp", "cryorf"):
        raise ConfigError(f"{where}.type: must be 'opamp' or 'cryorf', got {kind!r}")
    units = _OPAMP_UNITS if kind == "opamp" else _CRYO_UNITS
    extra = set(table) & (set(_OPAMP_UNITS) | set(_CRYO_UNITS)) - set(units)
    if extra:
        raise ConfigError(f"{where}: key(s) {', '.join(sorted(extra))} do not apply to a {kind} preamp")
    fields: dict = {k: _quantity(table, k, dim, where) for k, dim in units.items() if k in table}
    if "name" in table:
        fields["name"] = str(table["name"])
    cls = OpAmpPreamp if kind == "opamp" else CryoRFPreamp
    try:
        if base is not None:
            if not isinstance(base, cls):
                raise ConfigError(f"{where}: preset {table['preset']!r} is not a {kind} preamp")
            preamp = replace(base, **fields)
        else:
            required = ("Vn", "In") if kind == "opamp" else ("Tn",)
            missing = [k for k in required if k not in fields]
            if missing:
                raise ConfigError(f"{where}: missing key(s) {', '.join(missing)}")
            preamp = cls(**fields)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None

    band = None
    if "band" in table:
        raw = table["band"]
        if not isinstance(raw, list) or len(raw) != 2:
            raise ConfigError(f"{where}.band: expected [low, high], got {raw!r}")
        band = tuple(_quantity({"band": v}, "band", "frequency", where) for v in raw)
    return preamp, band


def assemble_bands(entries) -> tuple:
    """Turn (preamp, explicit band or None) pairs into ordered PreampBands."""
    entries = list(entries)
    if all(band is not None for _, band in entries):
        ordered = sorted(entries, key=lambda e: e[1][0])
        specs = [(band[0], band[1], p) for p, band in ordered]
    elif all(band is None for _, band in entries):
        ordered = sorted(entries, key=lambda e: e[0].f_max)
        specs, edge = [], 0.0
        for p, _ in ordered:
            lo = max(edge, p.f_min)
            specs.append((lo, p.f_max, p))
            edge = p.f_max
    else:
        raise ConfigError("preamp: give a band for every entry or for none")
    try:
        return tuple(PreampBand(lo, hi, p) for lo, hi, p in specs)
    except ValueError as exc:
        raise ConfigError(f"preamp: {exc}") from None


def build_chain(data: Mapping) -> ChainConfig:
    first = _first_stage(data.get("first_stage", {"preset": "c1"}))
    coupling = _coupling(data.get("coupling", {}))
    second = None
    bands: tuple = ()
    if "second_stage" in data:
        second = _second_stage(data["second_stage"])
        raw = data.get("preamp", [{"preset": "magnicon"}, {"preset": "rt300"}])
        if not isinstance(raw, list) or not raw:
            raise ConfigError("preamp: expected a non-empty array of tables ([[preamp]])")
        bands = assemble_bands(_preamp(t, i) for i, t in enumerate(raw))
    elif "preamp" in data:
        raise ConfigError("preamp: preamplifiers need a [second_stage]")
    try:
        return ChainConfig(first, coupling, second, bands)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_config(data: Mapping) -> SweepConfig:
    """Validate an already-parsed mapping (as read from TOML)."""
    _check_keys(data, {"first_stage", "coupling", "second_stage", "preamp", "sweep", "resonator"}, "config")
    chain = build_chain(data)

    sweep = data.get("sweep", {})
    _check_keys(sweep, {"f_start", "f_stop", "points", "grid", "outputs"}, "sweep")
    kwargs: dict = {}
    if "f_start" in sweep:
        kwargs["f_start"] = _quantity(sweep, "f_start", "frequency", "sweep")
    if "f_stop" in sweep:
        kwargs["f_stop"] = _quantity(sweep, "f_stop", "frequency", "sweep")
    elif math.isfinite(chain.top_band_edge):
        kwargs["f_stop"] = min(chain.top_band_edge, SweepConfig.f_stop)
    if "points" in sweep:
        points = sweep["points"]
        if isinstance(points, bool) or not isinstance(points, int):
            raise ConfigError(f"sweep.points: expected an integer, got {points!r}")
        kwargs["points"] = points
    if "grid" in sweep:
        kwargs["grid"] = sweep["grid"]
    if "outputs" in sweep:
        outputs = sweep["outputs"]
        if not isinstance(outputs, list):
            raise ConfigError(f"sweep.outputs: expected a list, got {outputs!r}")
        kwargs["outputs"] = tuple(outputs)

    res = data.get("resonator", {})
    _check_keys(res, {"Q", "T"}, "resonator")
    if "Q" in res:
        kwargs["resonator_Q"] = _number(res, "Q", "resonator")
    if "T" in res:
        kwargs["resonator_T"] = _quantity(res, "T", "temperature", "resonator")
    return SweepConfig(chain=chain, **kwargs)


def load_config(path) -> SweepConfig:
    """Read and validate a TOML sweep configuration.

    Raises ConfigError for parse errors (with line and column) and for
    validation errors (naming the key). OSError propagates for I/O problems.
    """
    path = Path(path)
    with path.open("rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: parse error: {exc}") from None
    try:
        return build_config(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def config_from_presets(names: Iterable[str], overrides: Optional[Mapping] = None) -> SweepConfig:
    """Assemble a config from preset names, e.g. ``["c1", "48x3", "cryorf"]``."""
    data: dict = {}
    preamps = []
    for name in names:
        if name in FIRST_STAGE_PRESETS:
            data["first_stage"] = {"preset": name}
        elif name in SECOND_STAGE_PRESETS:
            data["second_stage"] = {"preset": name}
        elif name in PREAMP_PRESETS:
            preamps.append({"preset": name})
        else:
            raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    if preamps:
        data["preamp"] = preamps
    for key, value in (overrides or {}).items():
        data.setdefault(key, {}).update(value)
    return build_config(data)
