"""Command-line interface: ``squidchain {report,sweep,match,validate}``.

Exit codes: 0 success, 1 validation failure, 2 bad configuration or
arguments, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
import warnings
from typing import List, Optional

from .config import OUTPUTS, PRESET_NAMES, SweepConfig, config_from_presets, load_config
from .constants import HBAR
from .matching import (
    detuned_resonator_for_optimum,
    figures_of_merit,
    match_on_resonance,
    match_scan_sensitivity,
    noise_budget,
    noise_temperature,
    optimal_complex_source,
)
from .resonator import Resonator, thermal_occupation
from .sweep import emit_csv, format_csv, run_sweep
from .units import UnitError, format_quantity, parse_quantity
from .validation import format_report, validate_reference_numbers

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _quantity_arg(dimension: str):
    """argparse type accepting ``"30 MHz"`` or a bare SI number."""

    def parse(text: str) -> float:
        try:
            return float(text)
        except ValueError:
            pass
        try:
            return parse_quantity(text, dimension)
        except UnitError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def _add_chain_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="TOML", help="sweep configuration file")
    src.add_argument(
        "--preset",
        action="append",
        metavar="NAME",
        help=f"preset component, repeatable ({', '.join(PRESET_NAMES)}); default c1 alone",
    )
    p.add_argument("--Q", type=float, help="resonator quality factor")
    p.add_argument("--T-res", type=_quantity_arg("temperature"), help="resonator temperature, e.g. '10 mK'")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squidchain",
        description="Noise figures of merit for a two-stage dc SQUID amplifier chain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    report = sub.add_parser("report", help="figures of merit at one frequency")
    _add_chain_args(report)
    report.add_argument("--freq", type=_quantity_arg("frequency"), default=30e6, help="default 30 MHz")

    sweep = sub.add_parser("sweep", help="figures of merit over a frequency range, as CSV")
    _add_chain_args(sweep)
    sweep.add_argument("--f-start", type=_quantity_arg("frequency"))
    sweep.add_argument("--f-stop", type=_quantity_arg("frequency"))
    sweep.add_argument("--points", type=int)
    sweep.add_argument("--grid", choices=("log", "linear"))
    sweep.add_argument("--outputs", nargs="+", choices=OUTPUTS, metavar="OUTPUT", help=", ".join(OUTPUTS))
    sweep.add_argument("--out", metavar="CSV", help="output file (default: standard output)")

    match = sub.add_parser("match", help="optimal coupling to a resonator")
    _add_chain_args(match)
    match.add_argument("--freq", type=_quantity_arg("frequency"), default=30e6, help="resonance, default 30 MHz")
    match.add_argument("--Ltot", type=_quantity_arg("inductance"), default=1e-6, help="resonator inductance, default 1 uH")

    sub.add_parser("validate", help="regress the published reference numbers")
    return parser


def _load(args) -> SweepConfig:
    if args.config:
        config = load_config(args.config)
    else:
        config = config_from_presets(args.preset or ["c1"])
    changes = {}
    if args.Q is not None:
        changes["resonator_Q"] = args.Q
    if args.T_res is not None:
        changes["resonator_T"] = args.T_res
    for name in ("f_start", "f_stop", "points", "grid"):
        value = getattr(args, name, None)
        if value is not None:
            changes[name] = value
    if getattr(args, "outputs", None):
        changes["outputs"] = tuple(args.outputs)
    return dataclasses.replace(config, **changes) if changes else config


def _describe_chain(config: SweepConfig) -> List[str]:
    chain = config.chain
    sq = chain.first_stage
    lines = [
        f"first stage: I0={format_quantity(sq.I0, 'A')} Rj={format_quantity(sq.Rj, 'Ohm')} "
        f"Lsq={format_quantity(sq.Lsq, 'H')} Tj={format_quantity(sq.Tj, 'K')}",
        f"coupling: Lin={format_quantity(chain.coupling.Lin, 'H')} kappa={chain.coupling.kappa:g}",
    ]
    if chain.second_stage is None:
        lines.append("second stage: none (first-stage noise only)")
    else:
        d = chain.second_stage
        lines.append(f"second stage: {d.label} array at T2={format_quantity(d.T2, 'K')}")
        for band in chain.preamp_bands:
            lines.append(
                f"  preamp {band.preamp.name}: {format_quantity(band.f_lo, 'Hz')} - {format_quantity(band.f_hi, 'Hz')}"
            )
    return lines


def _rows(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"  {k.ljust(width)}  {v}" for k, v in pairs)


def _report(config: SweepConfig, f: float) -> int:
    omega = 2 * math.pi * f
    fom = figures_of_merit(config.chain, omega, Q=config.resonator_Q, Tres=config.resonator_T)
    b = noise_budget(config.chain, omega)
    z = optimal_complex_source(b)
    print("\n".join(_describe_chain(config)))
    print(f"at f = {format_quantity(f, 'Hz')}:")
    print(
        _rows(
            [
                ("S_II (system)", f"{b.S_II_sys:.4g} A^2/Hz"),
                ("S_VV", f"{b.S_VV:.4g} V^2/Hz"),
                ("Im S_IV", f"{b.imS_IV:.4g} W/Hz"),
                ("T_min on resonance", format_quantity(fom.T_min_on_res, "K")),
                ("T_min complex source", format_quantity(fom.T_min_complex, "K")),
                ("Z_opt", f"{format_quantity(z.real, 'Ohm')} + j{format_quantity(z.imag, 'Ohm')}"),
                ("eta", f"{fom.eta:.4g}"),
                ("epsilon_uc", f"{fom.epsilon_uc / HBAR:.4g} hbar"),
                ("kappa_g on resonance", f"{fom.kappa_g_opt_on_res:.4g} (Q={config.resonator_Q:g})"),
                ("kappa_g scan", f"{fom.kappa_g_opt_scan:.4g} (T={format_quantity(config.resonator_T, 'K')})"),
            ]
        )
    )
    return EXIT_OK


def _match(config: SweepConfig, f: float, Ltot: float) -> int:
    chain = config.chain
    omega = 2 * math.pi * f
    res = Resonator.from_target(f, config.resonator_Q, Ltot, config.resonator_T)
    on_res = match_on_resonance(chain, res)
    kg_scan = match_scan_sensitivity(chain, res)
    detuned = detuned_resonator_for_optimum(chain, omega, Ltot, config.resonator_T)
    print("\n".join(_describe_chain(config)))
    print(f"resonator: f0={format_quantity(f, 'Hz')} Q={res.Q:g} Ltot={format_quantity(Ltot, 'H')} "
          f"R={format_quantity(res.R, 'Ohm')} n={thermal_occupation(res.omega0, res.Tres):.4g}")
    print(
        _rows(
            [
                ("kappa_g on resonance", f"{on_res.kappa_g:.4g}"),
                ("kappa^2 Lin on resonance", format_quantity(on_res.k2L, "H")),
                ("T_min on resonance", format_quantity(on_res.T_min, "K")),
                ("kappa_g scan", f"{kg_scan:.4g}"),
                ("kappa^2 Lin scan", format_quantity(kg_scan**2 * Ltot, "H")),
                ("detuned C for Z_opt", format_quantity(detuned.Cres, "F")),
                ("detuned R for Z_opt", format_quantity(detuned.R, "Ohm")),
                ("T_min detuned", format_quantity(noise_temperature(noise_budget(chain, omega), detuned.impedance(omega)), "K")),
            ]
        )
    )
    return EXIT_OK


def _sweep(config: SweepConfig, out: Optional[str]) -> int:
    rows = run_sweep(config)
    if out:
        emit_csv(rows, out, config.outputs)
        print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    else:
        sys.stdout.write(format_csv(rows, config.outputs))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK

    if args.command == "validate":
        checks = validate_reference_numbers()
        print(format_report(checks))
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            config = _load(args)
            if args.command == "report":
                return _report(config, args.freq)
            if args.command == "match":
                return _match(config, args.freq, args.Ltot)
            return _sweep(config, args.out)
    except OSError as exc:
        print(f"squidchain: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"squidchain: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
