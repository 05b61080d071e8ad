"""Frequency sweeps of the figures of merit and CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import SweepConfig
from .constants import HBAR
from .matching import (
    epsilon_uc_system,
    eta,
    noise_budget,
    on_resonance_coupling_sq,
    scan_coupling_sq,
    t_min_complex,
    t_min_on_resonance,
)
from .resonator import thermal_occupation

# CSV column for each output, with its unit as a suffix.
COLUMNS = {
    "eta": "eta",
    "epsilon_uc": "epsilon_uc_hbar",
    "t_min_on_res": "t_min_on_res_K",
    "t_min_complex": "t_min_complex_K",
    "kappa_g_on_res": "kappa_g_on_res",
    "kappa_g_scan": "kappa_g_scan",
}


class SweepIOError(OSError):
    pass


@dataclass
class SweepRow:
    f: float
    values: Dict[str, Optional[float]] = field(default_factory=dict)
    error: Optional[str] = None


def frequency_grid(config: SweepConfig) -> np.ndarray:
    if config.grid == "log":
        f = np.geomspace(config.f_start, config.f_stop, config.points)
    else:
        f = np.linspace(config.f_start, config.f_stop, config.points)
    # pin the end points exactly; geomspace can land one ulp off
    f[0], f[-1] = config.f_start, config.f_stop
    return f


def _evaluate(name: str, config: SweepConfig, omega: float) -> float:
    chain = config.chain
    if name == "eta":
        return eta(noise_budget(chain, omega))
    if name == "epsilon_uc":
        return epsilon_uc_system(chain, omega) / HBAR
    if name == "t_min_on_res":
        return t_min_on_resonance(noise_budget(chain, omega))
    if name == "t_min_complex":
        return t_min_complex(noise_budget(chain, omega))
    if name == "kappa_g_on_res":
        return math.sqrt(on_resonance_coupling_sq(chain, omega, config.resonator_Q))
    if name == "kappa_g_scan":
        n = thermal_occupation(omega, config.resonator_T)
        return math.sqrt(scan_coupling_sq(chain, omega, config.resonator_Q, n))
    raise KeyError(name)


def run_sweep(config: SweepConfig) -> List[SweepRow]:
    """Evaluate the requested outputs on the frequency grid, ascending in f.

    A failing output (for example an unreachable coupling) leaves its cell
    empty and records the message in the row's ``error``; the sweep goes on.
    """
    rows = []
    for f in frequency_grid(config):
        f = float(f)
        omega = 2.0 * math.pi * f
        row = SweepRow(f)
        errors = []
        for name in config.outputs:
            try:
                row.values[name] = _evaluate(name, config, omega)
            except ValueError as exc:
                row.values[name] = None
                errors.append(f"{name}: {exc}")
        row.error = "; ".join(errors) or None
        rows.append(row)
    return rows


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.9g}"


def format_csv(rows: Sequence[SweepRow], outputs: Optional[Sequence[str]] = None) -> str:
    """CSV text: header ``f_Hz,<columns>`` (plus ``error`` if any row failed)."""
    if not rows:
        raise ValueError("no rows to write")
    if outputs is None:
        outputs = list(rows[0].values)
    with_error = any(r.error for r in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["f_Hz"] + [COLUMNS[name] for name in outputs]
    writer.writerow(header + (["error"] if with_error else []))
    for r in rows:
        line = [_fmt(r.f)] + [_fmt(r.values.get(name)) for name in outputs]
        writer.writerow(line + ([r.error or ""] if with_error else []))
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path, outputs: Optional[Sequence[str]] = None) -> None:
    """Write rows to ``path``. Nothing is created when ``rows`` is empty."""
    text = format_csv(rows, outputs)
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise SweepIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
