"""Row evaluation, 1-D sweeps and CSV / gnuplot emission."""
from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import PurePosixPath

import numpy as np

from .config import GrapheneSpec, MetalSpec, SweepConfig, format_config
from .core import CONSTANTS, kinematics
from .ghshift import GHError, gh_beam, gh_stationary
from .materials import (
    EV,
    GrapheneParams,
    drude_epsilon,
    graphene_sigma_full,
    graphene_sigma_intra,
)
from .scatter import LayerStack, Sheet, Slab, StackError, stack_t_of_ky, stack_transfer

CSV_DIGITS = 12

_DISPLAY = {  # sweep variable -> (unit label, internal -> display factor)
    "theta0": ("deg", 180.0 / math.pi),
    "mu": ("eV", 1.0 / EV),
    "tau": ("s", 1.0),
    "lambda": ("m", 1.0),
    "a": ("m", 1.0),
}


@dataclass(frozen=True)
class Point:
    """Fully resolved parameters for one row."""

    theta0: float
    wavelength: float
    a: float
    structure: object


@dataclass
class ResultTable:
    name: str
    sweep_variable: str
    columns: list
    rows: list
    metadata: list

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([row[j] for row in self.rows], dtype=float if name != "flags" else object)


def sweep_values(cfg: SweepConfig) -> np.ndarray:
    sw = cfg.sweep
    return np.linspace(sw.start, sw.stop, sw.count)


def point_at(cfg: SweepConfig, value: float) -> Point:
    var = cfg.sweep.variable
    st = cfg.structure
    if var == "mu":
        st = replace(st, mu=value)
    elif var == "tau":
        st = replace(st, tau=value)
    return Point(theta0=value if var == "theta0" else cfg.theta0,
                 wavelength=value if var == "lambda" else cfg.wavelength,
                 a=value if var == "a" else cfg.geometry.a,
                 structure=st)


def sheet_sigma(spec: GrapheneSpec, omega: float) -> complex:
    if spec.sigma is not None:
        return complex(spec.sigma)
    p = GrapheneParams(spec.mu, spec.tau, spec.temperature)
    fn = graphene_sigma_full if spec.model == "full" else graphene_sigma_intra
    return complex(fn(p, omega))


def build_stack(cfg: SweepConfig, pt: Point) -> LayerStack:
    g = cfg.geometry
    gap = Slab(g.n_gap**2, pt.a)
    omega = 2.0 * math.pi * CONSTANTS.c / pt.wavelength
    st = pt.structure
    if isinstance(st, GrapheneSpec):
        sheet = Sheet(sheet_sigma(st, omega))
        return LayerStack(g.n_prism, (sheet, gap, sheet))
    if isinstance(st, MetalSpec):
        eps = st.eps_rel if st.eps_rel is not None else complex(drude_epsilon(st.drude, omega))
        film = Slab(eps, st.d)
        return LayerStack(g.n_prism, (film, gap, film))
    return LayerStack(g.n_prism, (gap,))


def evaluate_point(cfg: SweepConfig, value: float) -> dict:
    """All output quantities for one sweep value; failures become flags, never raise."""
    out = {c: math.nan for c in ("T", "R", "A", "s_m", "s_over_lambda", "s_beam_m")}
    flags = []
    pt = point_at(cfg, value)
    out["theta0_deg"] = math.degrees(pt.theta0)
    g = cfg.geometry
    try:
        stack = build_stack(cfg, pt)
        res = stack_transfer(stack, kinematics(pt.theta0, pt.wavelength, g.n_prism, g.n_gap))
        out.update(T=float(res.T), R=float(res.R), A=float(res.absorbed))
    except (StackError, ValueError, ArithmeticError) as exc:
        return {**out, "flags": _flag("scatter", exc)}
    t_of_ky = stack_t_of_ky(stack, pt.wavelength, g.n_gap)
    try:
        gh = gh_stationary(t_of_ky, pt.theta0, pt.wavelength, g.n_prism)
        out.update(s_m=gh.s, s_over_lambda=gh.s_over_lambda)
    except (GHError, StackError, ValueError) as exc:
        flags.append(_flag("gh", exc))
    if cfg.beam is not None:
        try:
            out["s_beam_m"] = gh_beam(t_of_ky, pt.theta0, cfg.beam, pt.wavelength, g.n_prism).s
        except (GHError, StackError, ValueError) as exc:
            flags.append(_flag("beam", exc))
    out["flags"] = ";".join(flags) or "ok"
    return out


def _flag(stage, exc):
    text = str(exc).split("(")[0].strip().replace(",", "").replace(" ", "_")
    return f"{stage}:{text}"


def table_columns(cfg: SweepConfig) -> list:
    return ["sweep_var", "theta0_deg", *cfg.outputs, "flags"]


def run_sweep(cfg: SweepConfig, threads: int = 1) -> ResultTable:
    """Evaluate every sweep value; rows are independent, so ``threads`` never changes output."""
    values = sweep_values(cfg)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda v: evaluate_point(cfg, v), values))
    else:
        results = [evaluate_point(cfg, v) for v in values]
    unit, scale = _DISPLAY[cfg.sweep.variable]
    cols = table_columns(cfg)
    rows = []
    for v, res in zip(values, results):
        res = {**res, "sweep_var": float(v) * scale}
        rows.append(tuple(res[c] for c in cols))
    return ResultTable(name=cfg.name, sweep_variable=cfg.sweep.variable,
                       columns=cols, rows=rows, metadata=_metadata(cfg, unit))


def _metadata(cfg: SweepConfig, unit: str) -> list:
    c = CONSTANTS
    meta = [
        f"table = {cfg.name}",
        f"sweep_var = {cfg.sweep.variable} [{unit}]",
        f"constants = {c.version}",
        f"e = {c.e!r} C; hbar = {c.hbar!r} J s; k_B = {c.k_B!r} J/K",
        f"eps0 = {c.eps0!r} F/m; c = {c.c!r} m/s; m_e = {c.m_e!r} kg",
        f"theta_c = {math.degrees(cfg.theta_c)!r} deg",
        "time convention = exp(-i omega t); GH shift = Im(d ln t / d k_y)",
    ]
    st = cfg.structure
    if isinstance(st, GrapheneSpec) and st.reference_mu is not None:
        omega = 2.0 * math.pi * c.c / cfg.wavelength
        tau = st.tau if st.tau is not None else math.inf
        ref = graphene_sigma_intra(GrapheneParams(st.reference_mu, tau, st.temperature), omega)
        meta.append(f"sigma at reference mu {st.reference_mu / EV:.6g} eV (lossless) = "
                    f"{ref.real:.6g}{ref.imag:+.6g}i S; sheet uses {complex(st.sigma)} S")
    meta += list(cfg.notes)
    meta.append("resolved config:")
    meta += format_config(cfg).splitlines()
    return meta


# ---------------------------------------------------------------- emission

def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{x:.{CSV_DIGITS}g}"


def emit_csv(table: ResultTable) -> bytes:
    if not table.rows:
        raise ValueError("cannot emit an empty table")
    buf = io.StringIO()
    for line in table.metadata:
        buf.write(f"# {line}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue().encode("utf-8")


def read_csv(data: bytes) -> tuple[list, list]:
    """Parse an emitted CSV back into ``(columns, rows)``; numbers as floats."""
    lines = [ln for ln in data.decode("utf-8").splitlines() if ln and not ln.startswith("#")]
    cols = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        rows.append(tuple(c if name == "flags" else float(c) for name, c in zip(cols, cells)))
    return cols, rows


def emit_plotscript(tables: list, csv_paths: list) -> bytes:
    """gnuplot script drawing one curve per table: T, then s/lambda, against the sweep value."""
    if not tables:
        raise ValueError("cannot emit a plot script for no tables")
    var = tables[0].sweep_variable
    unit = _DISPLAY[var][0]
    xcol = 2 if var == "theta0" else 1
    xlabel = "theta_0 (deg)" if var == "theta0" else f"{var} ({unit})"
    out = ["set datafile separator ','", "set datafile commentschars '#'",
           f"set xlabel '{xlabel}'", "set key outside right", "set grid"]
    panels = [("T", "Transmittance T"), ("s_over_lambda", "GH shift s / lambda")]
    panels = [p for p in panels if all(p[0] in t.columns for t in tables)]
    if not panels:
        raise ValueError("tables carry neither T nor s_over_lambda")
    out.append(f"set multiplot layout {len(panels)},1")
    for col, label in panels:
        out.append(f"set ylabel '{label}'")
        curves = []
        for t, path in zip(tables, csv_paths):
            ycol = t.columns.index(col) + 1
            rel = PurePosixPath(str(path).replace("\\", "/")).as_posix()
            # skip counts raw lines: metadata comments plus the header
            skip = len(t.metadata) + 1
            curves.append(f"'{rel}' skip {skip} using {xcol}:{ycol} with lines title '{t.name}'")
        out.append("plot " + ", \\\n     ".join(curves))
    out.append("unset multiplot")
    return ("\n".join(out) + "\n").encode("utf-8")


def emit(table_or_tables, fmt: str, csv_paths=None) -> bytes:
    if fmt == "csv":
        return emit_csv(table_or_tables)
    if fmt == "plotscript":
        tables = table_or_tables if isinstance(table_or_tables, list) else [table_or_tables]
        if csv_paths is None:
            raise ValueError("plot script needs the CSV path(s) it refers to")
        paths = csv_paths if isinstance(csv_paths, list) else [csv_paths]
        return emit_plotscript(tables, paths)
    raise ValueError(f"unknown output format {fmt!r}")
