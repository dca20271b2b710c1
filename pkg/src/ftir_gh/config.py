"""Sweep configuration: data model, ``key = value`` parser and canonical writer.

The grammar is documented in docs/config_format.md.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Union

from .core import CONSTANTS, critical_angle
from .ghshift import BeamSpec
from .materials import DEFAULT_T_G, DEFAULT_TEMPERATURE, EV, DrudeParams

SWEEP_VARIABLES = ("theta0", "mu", "tau", "lambda", "a")
OUTPUT_COLUMNS = ("T", "R", "A", "s_m", "s_over_lambda", "s_beam_m")
DEFAULT_OUTPUTS = ("T", "R", "A", "s_m", "s_over_lambda")
DEFAULT_TAU = 6e-12


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    n_prism: float
    n_gap: float
    a: float


@dataclass(frozen=True)
class GrapheneSpec:
    """Either a fixed sheet conductance or (mu, tau, temperature)."""

    sigma: complex | None = None
    mu: float | None = None
    tau: float | None = None
    temperature: float = DEFAULT_TEMPERATURE
    model: str = "intra"
    t_g: float = DEFAULT_T_G
    # reported next to a fixed sigma for comparison, never used in the solve
    reference_mu: float | None = None

    kind = "graphene"


@dataclass(frozen=True)
class MetalSpec:
    d: float
    eps_rel: complex | None = None
    drude: DrudeParams | None = None

    kind = "metal"


@dataclass(frozen=True)
class BareSpec:
    kind = "bare"


Structure = Union[GrapheneSpec, MetalSpec, BareSpec]


@dataclass(frozen=True)
class SweepSpec:
    """1-D scan; start/stop in internal units (rad, J, s, m)."""

    variable: str
    start: float
    stop: float
    count: int


@dataclass(frozen=True)
class SweepConfig:
    name: str
    geometry: Geometry
    structure: Structure
    wavelength: float
    sweep: SweepSpec
    theta0: float | None = None
    outputs: tuple = DEFAULT_OUTPUTS
    beam: BeamSpec | None = None
    notes: tuple = field(default=())

    @property
    def theta_c(self) -> float:
        return critical_angle(self.geometry.n_prism, self.geometry.n_gap)

    def with_sweep(self, **kw) -> "SweepConfig":
        return replace(self, sweep=replace(self.sweep, **kw))


# ---------------------------------------------------------------- units

_UNITS = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9},
    "time": {"s": 1.0, "ps": 1e-12, "fs": 1e-15},
    "energy": {"J": 1.0, "eV": EV, "meV": 1e-3 * EV},
    "temperature": {"K": 1.0},
    "angle": {"deg": math.pi / 180.0, "rad": 1.0},
    "frequency": {"rad/s": 1.0},
    "density": {"m^-3": 1.0, "1/m^3": 1.0},
    "conductance": {"S": 1.0},
    "permittivity": {"F/m": 1.0},
    "none": {},
}
_DEFAULT_UNIT = {"length": "m", "time": "s", "energy": "eV", "temperature": "K",
                 "angle": "deg", "frequency": "rad/s", "density": "m^-3",
                 "conductance": "S", "permittivity": "F/m"}

_SWEEP_KIND = {"theta0": "angle", "mu": "energy", "tau": "time",
               "lambda": "length", "a": "length"}

_UNIT_TOKEN = re.compile(r"^[A-Za-zµ][A-Za-zµ/^\-0-9]*$")


def _split(text):
    """``"0.7 eV"`` -> ``("0.7", "eV")``; spaces inside a complex number are dropped."""
    tokens = text.split()
    unit = None
    if len(tokens) > 1 and _UNIT_TOKEN.match(tokens[-1]):
        unit = tokens.pop()
    return "".join(tokens), unit


def _parse_complex(s, lineno):
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"line {lineno}: cannot read {s!r} as a number") from None


def quantity(text: str, kind: str, lineno: int, complex_ok: bool = False):
    num, unit = _split(text)
    if complex_ok:
        value = _parse_complex(num, lineno)
    else:
        try:
            value = float(num)
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot read {num!r} as a number") from None
    table = _UNITS[kind]
    if unit is None:
        unit = _DEFAULT_UNIT.get(kind)
        if unit is None:
            return value
    if unit not in table:
        allowed = ", ".join(table) or "none"
        raise ConfigError(f"line {lineno}: unit {unit!r} not valid here (expected {allowed})")
    return value * table[unit]


# ---------------------------------------------------------------- parsing

_KEYS = {
    "geometry": {"n_prism", "n_gap", "a"},
    "source": {"wavelength", "theta0"},
    "graphene": {"sigma", "mu", "tau", "temperature", "model", "t_g", "reference_mu"},
    "metal": {"d", "eps_rel", "eps_abs", "omega_p", "nu", "tau"},
    "bare": set(),
    "sweep": {"variable", "start", "stop", "count"},
    "output": {"columns"},
    "beam": {"waist", "samples", "span"},
    "run": {"name"},
}
_STRUCTURES = ("graphene", "metal", "bare")


def _tokenise(text: str):
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    header_line: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header {raw.strip()!r}")
            current = line[1:-1].strip().lower()
            if current not in _KEYS:
                raise ConfigError(f"line {lineno}: unknown section [{current}]")
            if current in sections:
                raise ConfigError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = {}
            header_line[current] = lineno
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: key outside of any section")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS[current]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in [{current}]")
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        sections[current][key] = (value, lineno)
    return sections, header_line


def _require(sec, name, key, header):
    if key not in sec:
        raise ConfigError(f"line {header}: [{name}] needs key {key!r}")
    return sec[key]


def _positive(value, key, lineno):
    if not value > 0:
        raise ConfigError(f"line {lineno}: {key} must be positive")
    return value


def _parse_graphene(sec, header):
    def q(key, kind):
        v, ln = sec[key]
        return _positive(quantity(v, kind, ln), key, ln)

    has_sigma = "sigma" in sec
    has_mu = "mu" in sec
    if has_sigma and (has_mu or "tau" in sec or "model" in sec):
        raise ConfigError(f"line {sec['sigma'][1]}: sigma is mutually exclusive with mu/tau/model")
    if not (has_sigma or has_mu):
        raise ConfigError(f"line {header}: [graphene] needs sigma or mu")
    kw = {}
    if has_sigma:
        v, ln = sec["sigma"]
        kw["sigma"] = quantity(v, "conductance", ln, complex_ok=True)
        if kw["sigma"].real < 0:
            raise ConfigError(f"line {ln}: sigma must have Re >= 0 (passive sheet)")
    else:
        kw["mu"] = q("mu", "energy")
        kw["tau"] = q("tau", "time") if "tau" in sec else DEFAULT_TAU
    if "temperature" in sec:
        kw["temperature"] = q("temperature", "temperature")
    if "t_g" in sec:
        kw["t_g"] = q("t_g", "length")
    if "reference_mu" in sec:
        kw["reference_mu"] = q("reference_mu", "energy")
    if "model" in sec:
        v, ln = sec["model"]
        if v not in ("intra", "full"):
            raise ConfigError(f"line {ln}: model must be 'intra' or 'full'")
        kw["model"] = v
    return GrapheneSpec(**kw)


def _parse_metal(sec, header):
    v, ln = _require(sec, "metal", "d", header)
    d = _positive(quantity(v, "length", ln), "d", ln)
    given = [k for k in ("eps_rel", "eps_abs", "omega_p", "nu") if k in sec]
    if not given:
        raise ConfigError(f"line {header}: [metal] needs eps_rel, eps_abs, omega_p or nu")
    if len(given) > 1 and not set(given) <= {"omega_p", "nu"}:
        raise ConfigError(f"line {sec[given[1]][1]}: {given[0]} and {given[1]} are mutually exclusive")
    if given[0] in ("eps_rel", "eps_abs"):
        if "tau" in sec:
            raise ConfigError(f"line {sec['tau'][1]}: tau only applies to the Drude form")
        v, ln = sec[given[0]]
        if given[0] == "eps_rel":
            eps = quantity(v, "none", ln, complex_ok=True)
        else:
            eps = quantity(v, "permittivity", ln, complex_ok=True) / CONSTANTS.eps0
        return MetalSpec(d=d, eps_rel=complex(eps))
    v, ln = _require(sec, "metal", "tau", header)
    tau = _positive(quantity(v, "time", ln), "tau", ln)
    kw = {}
    if "omega_p" in sec:
        v, ln = sec["omega_p"]
        kw["omega_p"] = _positive(quantity(v, "frequency", ln), "omega_p", ln)
    if "nu" in sec:
        v, ln = sec["nu"]
        kw["nu"] = _positive(quantity(v, "density", ln), "nu", ln)
    try:
        return MetalSpec(d=d, drude=DrudeParams(tau=tau, **kw))
    except ValueError as exc:
        raise ConfigError(f"line {header}: {exc}") from None


def parse_config(text: str, name: str = "config") -> SweepConfig:
    sections, header = _tokenise(text)
    for required in ("geometry", "source", "sweep"):
        if required not in sections:
            raise ConfigError(f"missing [{required}] block")
    structs = sorted((s for s in _STRUCTURES if s in sections), key=header.get)
    if not structs:
        raise ConfigError("missing structure block: one of [graphene], [metal], [bare]")
    if len(structs) > 1:
        raise ConfigError(f"line {header[structs[1]]}: structure blocks "
                          f"[{structs[0]}] and [{structs[1]}] are mutually exclusive")

    geo = sections["geometry"]
    vals = {}
    for key, kind in (("n_prism", "none"), ("n_gap", "none"), ("a", "length")):
        if key == "n_gap" and key not in geo:
            vals[key] = 1.0
            continue
        v, ln = _require(geo, "geometry", key, header["geometry"])
        vals[key] = _positive(quantity(v, kind, ln), key, ln)
    if vals["n_gap"] > vals["n_prism"]:
        raise ConfigError(f"line {header['geometry']}: n_gap must not exceed n_prism")
    geometry = Geometry(**vals)

    src = sections["source"]
    v, ln = _require(src, "source", "wavelength", header["source"])
    wavelength = _positive(quantity(v, "length", ln), "wavelength", ln)
    theta0 = None
    if "theta0" in src:
        v, ln = src["theta0"]
        theta0 = quantity(v, "angle", ln)
        if not 0 <= theta0 < math.pi / 2:
            raise ConfigError(f"line {ln}: theta0 must lie in [0, 90) deg")

    s = structs[0]
    if s == "graphene":
        structure = _parse_graphene(sections[s], header[s])
    elif s == "metal":
        structure = _parse_metal(sections[s], header[s])
    else:
        structure = BareSpec()

    sw = sections["sweep"]
    v, ln = _require(sw, "sweep", "variable", header["sweep"])
    if v not in SWEEP_VARIABLES:
        raise ConfigError(f"line {ln}: sweep variable must be one of {', '.join(SWEEP_VARIABLES)}")
    variable = v
    kind = _SWEEP_KIND[variable]
    v, ln_start = _require(sw, "sweep", "start", header["sweep"])
    start = quantity(v, kind, ln_start)
    v, ln = _require(sw, "sweep", "stop", header["sweep"])
    stop = quantity(v, kind, ln)
    v, ln = _require(sw, "sweep", "count", header["sweep"])
    try:
        count = int(v)
    except ValueError:
        raise ConfigError(f"line {ln}: count must be an integer") from None
    if count < 2:
        raise ConfigError(f"line {ln}: count must be at least 2")
    if not start < stop:
        raise ConfigError(f"line {ln_start}: sweep start must be below stop")
    if variable == "theta0" and not (start >= 0 and stop < math.pi / 2):
        raise ConfigError(f"line {ln_start}: theta0 sweep must stay inside [0, 90) deg")
    if variable != "theta0" and theta0 is None:
        raise ConfigError(f"line {header['source']}: [source] needs theta0 unless theta0 is swept")
    if variable in ("mu", "tau") and not (isinstance(structure, GrapheneSpec) and structure.mu is not None):
        raise ConfigError(f"line {header['sweep']}: sweeping {variable} needs [graphene] with mu")
    if variable != "theta0" and not start > 0:
        raise ConfigError(f"line {ln_start}: {variable} sweep must stay positive")
    sweep = SweepSpec(variable, start, stop, count)

    beam = None
    if "beam" in sections:
        b = sections["beam"]
        v, ln = _require(b, "beam", "waist", header["beam"])
        kw = {"waist": _positive(quantity(v, "length", ln), "waist", ln)}
        for key, conv in (("samples", int), ("span", float)):
            if key in b:
                v, ln = b[key]
                try:
                    kw[key] = conv(v)
                except ValueError:
                    raise ConfigError(f"line {ln}: cannot read {key} {v!r}") from None
        try:
            beam = BeamSpec(**kw)
        except ValueError as exc:
            raise ConfigError(f"line {header['beam']}: {exc}") from None

    outputs = DEFAULT_OUTPUTS + (("s_beam_m",) if beam else ())
    if "output" in sections and "columns" in sections["output"]:
        v, ln = sections["output"]["columns"]
        cols = [c.strip() for c in v.split(",") if c.strip()]
        bad = [c for c in cols if c not in OUTPUT_COLUMNS]
        if bad:
            raise ConfigError(f"line {ln}: unknown output column(s) {', '.join(bad)}")
        if "s_beam_m" in cols and beam is None:
            raise ConfigError(f"line {ln}: s_beam_m needs a [beam] block")
        outputs = tuple(c for c in OUTPUT_COLUMNS if c in cols)

    if "run" in sections and "name" in sections["run"]:
        name = sections["run"]["name"][0]

    return SweepConfig(name=name, geometry=geometry, structure=structure,
                       wavelength=wavelength, sweep=sweep, theta0=theta0,
                       outputs=outputs, beam=beam)


# ---------------------------------------------------------------- writing

def _c(z: complex) -> str:
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{abs(z.imag)!r}i"


def _sweep_bound(variable, value):
    kind = _SWEEP_KIND[variable]
    if kind == "angle":
        return f"{value!r} rad"
    if kind == "energy":
        return f"{value!r} J"
    return f"{value!r} {_DEFAULT_UNIT[kind]}"


def format_config(cfg: SweepConfig) -> str:
    """Canonical, fully resolved text form; :func:`parse_config` reads it back exactly."""
    out = ["[run]", f"name = {cfg.name}",
           "[geometry]", f"n_prism = {cfg.geometry.n_prism!r}",
           f"n_gap = {cfg.geometry.n_gap!r}", f"a = {cfg.geometry.a!r} m",
           "[source]", f"wavelength = {cfg.wavelength!r} m"]
    if cfg.theta0 is not None:
        out.append(f"theta0 = {cfg.theta0!r} rad")
    st = cfg.structure
    if isinstance(st, GrapheneSpec):
        out.append("[graphene]")
        if st.sigma is not None:
            out.append(f"sigma = {_c(st.sigma)} S")
        else:
            out += [f"mu = {st.mu!r} J", f"tau = {st.tau!r} s", f"model = {st.model}"]
        out += [f"temperature = {st.temperature!r} K", f"t_g = {st.t_g!r} m"]
        if st.reference_mu is not None:
            out.append(f"reference_mu = {st.reference_mu!r} J")
    elif isinstance(st, MetalSpec):
        out += ["[metal]", f"d = {st.d!r} m"]
        if st.eps_rel is not None:
            out.append(f"eps_rel = {_c(st.eps_rel)}")
        else:
            out.append(f"tau = {st.drude.tau!r} s")
            if st.drude.omega_p is not None:
                out.append(f"omega_p = {st.drude.omega_p!r} rad/s")
            if st.drude.nu is not None:
                out.append(f"nu = {st.drude.nu!r} m^-3")
    else:
        out.append("[bare]")
    sw = cfg.sweep
    out += ["[sweep]", f"variable = {sw.variable}",
            f"start = {_sweep_bound(sw.variable, sw.start)}",
            f"stop = {_sweep_bound(sw.variable, sw.stop)}", f"count = {sw.count}",
            "[output]", f"columns = {', '.join(cfg.outputs)}"]
    if cfg.beam is not None:
        out += ["[beam]", f"waist = {cfg.beam.waist!r} m",
                f"samples = {cfg.beam.samples}", f"span = {cfg.beam.span!r}"]
    return "\n".join(out) + "\n"
