"""Command-line front end.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure
of a requested scalar result.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, GrapheneSpec, MetalSpec, parse_config
from .core import CONSTANTS
from .ghshift import GHError, gh_beam, gh_stationary
from .presets import PRESET_NAMES, preset
from .scatter import (
    NoResonanceError,
    StackError,
    find_reflection_minimum,
    find_resonance,
    stack_t_of_ky,
)
from .sweep import build_stack, emit_csv, emit_plotscript, point_at, run_sweep, sheet_sigma

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        return parse_config(text, name=Path(path).stem)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _write(path, data: bytes):
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror}") from None


def _stamp(table, enabled):
    if enabled:
        now = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0)
        table.metadata.append(f"created = {now.isoformat()}")


def cmd_sweep(args):
    cfg = _load(args.config)
    table = run_sweep(cfg, threads=args.threads)
    _stamp(table, args.stamp)
    data = emit_csv(table)
    if args.out:
        _write(args.out, data)
    else:
        sys.stdout.buffer.write(data)
    if args.plot:
        if not args.out:
            raise ConfigError("--plot needs --out so the script can reference the CSV")
        rel = os.path.relpath(args.out, start=Path(args.plot).resolve().parent)
        _write(args.plot, emit_plotscript([table], [rel]))
    return EXIT_OK


def _parse_sigma(text):
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot read sigma {text!r}") from None


def cmd_preset(args):
    sigma = _parse_sigma(args.sigma) if args.sigma else None
    try:
        configs = preset(args.name, sigma=sigma)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables, names = [], []
    for cfg in configs:
        table = run_sweep(cfg, threads=args.threads)
        _stamp(table, args.stamp)
        fname = f"{cfg.name}.csv"
        _write(out / fname, emit_csv(table))
        tables.append(table)
        names.append(fname)
        print(out / fname)
    script = out / f"{args.name}.plt"
    _write(script, emit_plotscript(tables, names))
    print(script)
    return EXIT_OK


def _single_point(cfg, theta0):
    """The config evaluated at ``theta0``; a non-angle sweep is pinned to its start."""
    pt = point_at(cfg, theta0 if cfg.sweep.variable == "theta0" else cfg.sweep.start)
    return replace(pt, theta0=theta0)


def cmd_resonance(args):
    cfg = _load(args.config)
    g = cfg.geometry
    lo, hi = cfg.theta_c + 1e-7, math.pi / 2 - 1e-7
    if cfg.sweep.variable == "theta0":
        lo, hi = max(lo, cfg.sweep.start), min(hi, cfg.sweep.stop)
        if not lo < hi:
            raise ConfigError("theta0 sweep range does not extend above the critical angle")
    pt = _single_point(cfg, lo)
    st = pt.structure
    if isinstance(st, MetalSpec):
        theta = find_reflection_minimum(build_stack(cfg, pt), pt.wavelength, (lo, hi), g.n_gap)
    else:
        omega = 2.0 * math.pi * CONSTANTS.c / pt.wavelength
        sigma = sheet_sigma(st, omega) if isinstance(st, GrapheneSpec) else 0j
        theta = find_resonance(sigma, pt.wavelength, g.n_prism, g.n_gap, pt.a, (lo, hi))
    print(f"{math.degrees(theta):.6f}")
    return EXIT_OK


def cmd_beam(args):
    cfg = _load(args.config)
    if cfg.beam is None:
        raise ConfigError("a [beam] block is required for this command")
    if cfg.theta0 is None:
        raise ConfigError("[source] theta0 is required for this command")
    theta0 = cfg.theta0
    pt = _single_point(cfg, theta0)
    g = cfg.geometry
    t_of_ky = stack_t_of_ky(build_stack(cfg, pt), pt.wavelength, g.n_gap)
    st = gh_stationary(t_of_ky, theta0, pt.wavelength, g.n_prism)
    bm = gh_beam(t_of_ky, theta0, cfg.beam, pt.wavelength, g.n_prism)
    rel = abs(bm.s - st.s) / abs(st.s) if st.s else math.inf
    print(f"theta0_deg      {math.degrees(theta0):.6f}")
    print(f"stationary s_m  {st.s:.12g}  s/lambda {st.s_over_lambda:.9g}  err {st.err_est:.3g}")
    print(f"beam s_m        {bm.s:.12g}  s/lambda {bm.s_over_lambda:.9g}  err {bm.err_est:.3g}")
    print(f"relative_diff   {rel:.6g}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="ftir-gh", description=(
        "Transmission and Goos-Hanchen shift of a two-prism FTIR structure "
        "with graphene or metal coatings."))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="run a 1-D sweep from a config file")
    s.add_argument("config")
    s.add_argument("--out", help="CSV file (default: stdout)")
    s.add_argument("--plot", help="gnuplot script referencing the CSV")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--stamp", action="store_true", help="add a UTC timestamp to the metadata")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("preset", help="reproduce one figure's curves")
    s.add_argument("name", choices=PRESET_NAMES)
    s.add_argument("--out-dir", default=".")
    s.add_argument("--sigma", help="override the fixed THz sheet conductance, e.g. 0.0131i")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--stamp", action="store_true")
    s.set_defaults(func=cmd_preset)

    s = sub.add_parser("resonance", help="print the resonance angle in degrees")
    s.add_argument("config")
    s.set_defaults(func=cmd_resonance)

    s = sub.add_parser("beam", help="compare stationary-phase and beam-centroid GH shifts")
    s.add_argument("config")
    s.set_defaults(func=cmd_beam)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; here 2 means a numerical failure
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoResonanceError, GHError, StackError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
