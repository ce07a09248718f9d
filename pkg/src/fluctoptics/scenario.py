"""Scenario files: INI-style sections binding a material, a state, a sweep and a solver.

Example::

    [scenario]
    name = demo
    outputs = csv, json

    [material]
    preset = cdgeas2

    [state]
    kind = squeezed_beam
    wavelength = 10.6 um
    medium_index = 3.5
    q = 1.5
    delta_k_over_k = 1e-3
    delta_theta = 0.1

    [sweep]
    axis = t
    start = 0
    stop = 37.1 um
    points = 401

Lengths default to micrometres, inverse lengths to um^-1, temperatures to
kelvin; a unit suffix after the number selects another unit.  Parsed
values are stored already converted, so a scenario re-serialized with
:func:`dump_config` parses back to an equal object.
"""

from __future__ import annotations

import configparser
import math
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import media
from .ambient import CasimirPlate, ThermalSource
from .propagate import FORMS, ModulationModel, PlaneWaveInit, ProbeGrid
from .qstates import CoherentMode, Mode, ModeSet, SqueezedBeam, SqueezedMode, default_mode_amplitude
from .units import DEFAULT_CONSTANTS, db_to_squeeze_parameter

__all__ = [
    "Scenario",
    "SolverSetup",
    "Sweep",
    "ConfigError",
    "parse_config",
    "load_config",
    "dump_config",
    "STATE_KINDS",
    "EXIT_CONFIG",
    "EXIT_NOINPUT",
]

EXIT_CONFIG = 2
EXIT_NOINPUT = 66

STATE_KINDS = ("squeezed_beam", "mode_set", "coherent", "single_squeezed", "thermal", "casimir")
BEAM_KINDS = ("squeezed_beam", "mode_set", "coherent", "single_squeezed")


class ConfigError(ValueError):
    """All problems found in a scenario, with the exit code the CLI should use."""

    def __init__(self, errors, exit_code: int = EXIT_CONFIG):
        self.errors = list(errors)
        self.exit_code = exit_code
        super().__init__("\n".join(self.errors))


# -- value parsing ----------------------------------------------------------------

# dimension -> {suffix: factor to the natural unit}; "" is the default unit
_UNITS = {
    "length": {"": 1.0, "um": 1.0, "nm": 1e-3, "mm": 1e3, "m": 1e6},
    "inverse_length": {"": 1.0, "um-1": 1.0, "m-1": 1e-6},
    "volume": {"": 1.0, "um3": 1.0, "m3": 1e18},
    "temperature": {"": 1.0, "K": 1.0},
    "field": {"": 1.0, "um-2": 1.0, "V/m": DEFAULT_CONSTANTS.field_factor},
    "number": {"": 1.0},
}
_PI = re.compile(r"^([-+0-9.eE]*)\s*pi$")


def _number(text: str, dim: str = "number") -> float:
    parts = text.split()
    if not parts:
        raise ValueError("empty value")
    if len(parts) > 2:
        raise ValueError(f"cannot parse {text!r}")
    suffix = parts[1] if len(parts) == 2 else ""
    if suffix not in _UNITS[dim]:
        allowed = ", ".join(s for s in _UNITS[dim] if s) or "none"
        raise ValueError(f"unknown unit {suffix!r} (allowed: {allowed})")
    m = _PI.match(parts[0])
    if m:
        coef = m.group(1)
        value = (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
    else:
        value = float(parts[0])
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value * _UNITS[dim][suffix]


def _integer(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _string(text: str) -> str:
    return text.strip()


def _list(text: str) -> tuple:
    return tuple(s.strip() for s in text.split(",") if s.strip())


# key -> parser
_SCENARIO_KEYS = {"name": _string, "outputs": _list}

_MATERIAL_KEYS = {"preset": _string, "file": _string, "name": _string, "n0": _number, "validity": _string}
_MATERIAL_PATTERN = re.compile(r"^(chi[123](\.[xyz])+|meta\.\w+)$")


def _dim(d):
    return lambda text: _number(text, d)


_STATE_KEYS = {
    "squeezed_beam": {
        "wavelength": _dim("length"),
        "k": _dim("inverse_length"),
        "Omega": _dim("inverse_length"),
        "medium_index": _number,
        "q": _number,
        "squeezing_db": _number,
        "eta": _number,
        "delta_k_over_k": _number,
        "delta_theta": _number,
    },
    "mode_set": {"volume": _dim("volume")},
    "coherent": {
        "Z": _number,
        "E0_amp": _dim("field"),
        "volume": _dim("volume"),
        "omega": _dim("inverse_length"),
        "k": _dim("inverse_length"),
        "wavelength": _dim("length"),
    },
    "single_squeezed": {
        "q": _number,
        "squeezing_db": _number,
        "eta": _number,
        "E0_amp": _dim("field"),
        "volume": _dim("volume"),
        "omega": _dim("inverse_length"),
        "k": _dim("inverse_length"),
        "wavelength": _dim("length"),
    },
    "thermal": {"T": _dim("temperature")},
    "casimir": {"z": _dim("length"), "lambda_P": _dim("length")},
}
_MODE_KEY = re.compile(r"^mode\.\d+$")

_SWEEP_AXES = {"t": "length", "y": "length", "T": "temperature", "z": "length"}
_SWEEP_KEYS = {"axis", "start", "stop", "points", "values", "spacing", "t", "y"}

_SOLVER_KEYS = {
    "points": _integer,
    "length": _number,
    "cfl": _number,
    "dt": _number,
    "v0": _number,
    "amplitude": _number,
    "k_mod": _number,
    "omega_mod": _number,
    "offset": _number,
    "form": _string,
    "t_end": _number,
    "snapshots": _integer,
    "times": lambda text: tuple(_number(v) for v in _list(text)),
    "wavenumber": _number,
    "init_speed": _number,
    "threshold": _number,
}


def _mode(text: str) -> tuple:
    parts = text.split()
    if len(parts) != 6:
        raise ValueError("mode needs 'kx ky kz omega q eta'")
    return tuple(float(p) for p in parts)


# -- scenario -----------------------------------------------------------------------

@dataclass
class Sweep:
    axis: str
    values: np.ndarray
    t: float = 0.0
    y: float = 0.0


@dataclass
class SolverSetup:
    grid: ProbeGrid
    modulation: ModulationModel
    v0: float
    init: PlaneWaveInit
    t_end: float
    times: tuple
    form: str
    threshold: float


@dataclass
class Scenario:
    """A parsed, validated scenario.  Section dicts hold converted values."""

    name: str
    state: Optional[dict] = None
    material: Optional[dict] = None
    sweep: Optional[dict] = None
    solver: Optional[dict] = None
    outputs: tuple = ("csv",)
    base_dir: Optional[Path] = field(default=None, compare=False)

    # -- builders ---------------------------------------------------------------
    @property
    def kind(self) -> Optional[str]:
        return None if self.state is None else self.state["kind"]

    def build_material(self) -> Optional[media.Material]:
        m = self.material
        if m is None:
            return None
        if "preset" in m:
            return media.PRESETS[m["preset"]]()
        if "file" in m:
            path = Path(m["file"])
            if not path.is_absolute() and self.base_dir is not None:
                path = self.base_dir / path
            return media.load_material(path)
        return media.parse_material(_inline_material_text(m))

    def build_state(self):
        s = self.state
        if s is None:
            return None
        kind = s["kind"]
        if kind == "squeezed_beam":
            q = _squeeze(s)
            common = dict(
                delta_k_over_k=_need(s, "delta_k_over_k"),
                delta_theta=_need(s, "delta_theta"),
                q=q,
                eta=s.get("eta", 0.0),
            )
            n = s.get("medium_index", 1.0)
            if "wavelength" in s:
                return SqueezedBeam.in_medium(s["wavelength"], n, **common)
            k = _need(s, "k")
            return SqueezedBeam(Omega=s.get("Omega", k / n), k=k, medium_index=n, **common)
        if kind == "mode_set":
            modes = [Mode((kx, ky, kz), w, q, eta) for kx, ky, kz, w, q, eta in s.get("modes", ())]
            if not modes:
                raise ValueError("mode_set needs at least one mode.N entry")
            return ModeSet(_need(s, "volume"), tuple(modes))
        if kind in ("coherent", "single_squeezed"):
            k = s["k"] if "k" in s else 2 * math.pi / _need(s, "wavelength")
            omega = s.get("omega", k)
            if "E0_amp" in s:
                amp = s["E0_amp"]
            elif "volume" in s:
                amp = default_mode_amplitude(omega, s["volume"])
            else:
                raise ValueError(f"{kind} needs E0_amp or volume")
            if kind == "coherent":
                return CoherentMode(_need(s, "Z"), amp, omega, k)
            return SqueezedMode(_squeeze(s), amp, omega, k, s.get("eta", 0.0))
        if kind == "thermal":
            return ThermalSource(_need(s, "T"))
        if kind == "casimir":
            return CasimirPlate(_need(s, "z"), s.get("lambda_P"))
        raise ValueError(f"unknown state kind {kind!r}")

    def build_sweep(self) -> Optional[Sweep]:
        w = self.sweep
        if w is None:
            return None
        axis = w["axis"]
        if "values" in w:
            values = np.array(w["values"], dtype=float)
        else:
            start, stop, n = _need(w, "start"), _need(w, "stop"), int(_need(w, "points"))
            if n < 1:
                raise ValueError("sweep needs at least one point")
            if w.get("spacing", "linear") == "log":
                if start <= 0 or stop <= 0:
                    raise ValueError("log sweep needs positive start and stop")
                values = np.geomspace(start, stop, n)
            else:
                values = np.linspace(start, stop, n)
        if values.size == 0:
            raise ValueError("sweep range is empty")
        return Sweep(axis, values, w.get("t", 0.0), w.get("y", 0.0))

    def build_solver(self) -> Optional[SolverSetup]:
        s = self.solver
        if s is None:
            return None
        grid = ProbeGrid(
            length=s.get("length", 2 * math.pi),
            points=s.get("points", 1024),
            cfl=s.get("cfl", 0.8),
            dt=s.get("dt"),
        )
        mod = ModulationModel(
            amplitude=s.get("amplitude", -0.25),
            k_mod=s.get("k_mod", 1.0),
            omega_mod=s.get("omega_mod", 0.5),
            offset=s.get("offset", 0.0),
        )
        form = s.get("form", "reciprocal")
        if form not in FORMS:
            raise ValueError(f"form must be one of {', '.join(FORMS)}")
        t_end = s.get("t_end", 2 * math.pi)
        if not t_end > 0:
            raise ValueError("t_end must be positive")
        if "times" in s:
            times = tuple(s["times"])
        else:
            n = s.get("snapshots", 4)
            if n < 1:
                raise ValueError("snapshots must be at least 1")
            times = tuple(np.linspace(0.0, t_end, n).tolist()) if n > 1 else (t_end,)
        init = PlaneWaveInit(s.get("wavenumber", 10.0), s.get("init_speed", 1.0))
        return SolverSetup(grid, mod, s.get("v0", 1.0), init, t_end, times, form, s.get("threshold", 1e-3))


def _need(d: dict, key: str):
    if key not in d:
        raise ValueError(f"missing required key {key!r}")
    return d[key]


def _squeeze(s: dict) -> float:
    if "q" in s and "squeezing_db" in s:
        raise ValueError("give either q or squeezing_db, not both")
    if "squeezing_db" in s:
        return db_to_squeeze_parameter(s["squeezing_db"])
    return _need(s, "q")


def _inline_material_text(m: dict) -> str:
    lines = []
    for key, value in m.items():
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


# -- parsing ------------------------------------------------------------------------

def _parse_section(name: str, items, schema: dict, errors: list, extra=None) -> dict:
    out = {}
    for key, raw in items:
        parser = schema.get(key)
        if parser is None and extra is not None:
            parser = extra(key)
        if parser is None:
            errors.append(f"[{name}] unknown key {key!r}")
            continue
        try:
            out[key] = parser(raw)
        except ValueError as exc:
            errors.append(f"[{name}] {key}: {exc}")
    return out


def parse_config(text: str, base_dir: Optional[Path] = None) -> Scenario:
    """Parse and validate a scenario; every problem found is reported at once."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case-sensitive (T, Omega)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"malformed config: {exc}".splitlines()[0]]) from None

    errors: list[str] = []
    known = {"scenario", "material", "state", "sweep", "solver"}
    for sec in cp.sections():
        if sec not in known:
            errors.append(f"unknown section [{sec}]")

    scen = _parse_section("scenario", cp.items("scenario"), _SCENARIO_KEYS, errors) if cp.has_section("scenario") else {}
    outputs = scen.get("outputs", ("csv",))
    for o in outputs:
        if o not in ("csv", "json"):
            errors.append(f"[scenario] outputs: unknown format {o!r}")

    material = None
    if cp.has_section("material"):
        material = _parse_section(
            "material",
            cp.items("material"),
            _MATERIAL_KEYS,
            errors,
            extra=lambda k: _string if _MATERIAL_PATTERN.match(k) else None,
        )
        sources = [k for k in ("preset", "file") if k in material]
        if len(sources) > 1:
            errors.append("[material] give either preset or file, not both")
        if sources and len(material) > 1:
            errors.append("[material] preset/file cannot be combined with inline entries")
        if "preset" in material and material["preset"] not in media.PRESETS:
            errors.append(f"[material] unknown preset {material['preset']!r}")

    state = None
    if cp.has_section("state"):
        items = dict(cp.items("state"))
        kind = items.pop("kind", None)
        if kind is None:
            errors.append("[state] missing key 'kind'")
        elif kind not in STATE_KINDS:
            errors.append(f"[state] unknown kind {kind!r} (expected one of {', '.join(STATE_KINDS)})")
        else:
            modes = sorted((k for k in items if _MODE_KEY.match(k)), key=lambda k: int(k.split(".")[1]))
            state = {"kind": kind}
            state.update(
                _parse_section(
                    "state",
                    [(k, v) for k, v in items.items() if k not in modes],
                    _STATE_KEYS[kind],
                    errors,
                )
            )
            if modes:
                if kind != "mode_set":
                    errors.extend(f"[state] unknown key {k!r}" for k in modes)
                else:
                    parsed = []
                    for k in modes:
                        try:
                            parsed.append(_mode(items[k]))
                        except ValueError as exc:
                            errors.append(f"[state] {k}: {exc}")
                    state["modes"] = tuple(parsed)
    elif not cp.has_section("solver"):
        errors.append("missing [state] section")

    sweep = None
    if cp.has_section("sweep"):
        items = dict(cp.items("sweep"))
        axis = items.get("axis")
        if axis is None:
            errors.append("[sweep] missing key 'axis'")
        elif axis not in _SWEEP_AXES:
            errors.append(f"[sweep] unknown axis {axis!r}")
        else:
            dim = _SWEEP_AXES[axis]
            schema = {
                "axis": _string,
                "start": _dim(dim),
                "stop": _dim(dim),
                "points": _integer,
                "values": lambda text: tuple(_number(v, dim) for v in _list(text)),
                "spacing": _string,
                "t": _dim("length"),
                "y": _dim("length"),
            }
            sweep = _parse_section("sweep", items.items(), schema, errors)
            if "values" in sweep and not sweep["values"]:
                errors.append("[sweep] values is empty")
            if "spacing" in sweep and sweep["spacing"] not in ("linear", "log"):
                errors.append("[sweep] spacing must be linear or log")
            if state is not None:
                wanted = {"thermal": ("T",), "casimir": ("z",)}.get(state["kind"], ("t", "y"))
                if axis not in wanted:
                    errors.append(f"[sweep] axis {axis!r} does not apply to a {state['kind']} state")

    solver = None
    if cp.has_section("solver"):
        solver = _parse_section("solver", cp.items("solver"), _SOLVER_KEYS, errors)

    name = scen.get("name", "scenario")
    scenario = Scenario(name, state, material, sweep, solver, tuple(outputs), base_dir)

    # invariants that need the domain objects; skip when parsing already failed
    if not errors:
        missing_file = None
        for label, build in (
            ("material", scenario.build_material),
            ("state", scenario.build_state),
            ("sweep", scenario.build_sweep),
            ("solver", scenario.build_solver),
        ):
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    build()
            except FileNotFoundError as exc:
                missing_file = exc
                errors.append(f"[{label}] file not found: {exc.filename}")
            except (ValueError, TypeError, KeyError) as exc:
                errors.append(f"[{label}] {exc}")
        if missing_file is not None and len(errors) == 1:
            raise ConfigError(errors, EXIT_NOINPUT)

    if errors:
        raise ConfigError(errors)
    return scenario


def load_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise ConfigError([f"config file not found: {path}"], EXIT_NOINPUT) from None
    return parse_config(text, base_dir=path.parent)


# -- serialization ------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def dump_config(s: Scenario) -> str:
    """Serialize to the INI format; values are written in natural units."""
    out = ["[scenario]", f"name = {s.name}", f"outputs = {_fmt(tuple(s.outputs))}"]
    if s.material is not None:
        out += ["", "[material]"] + [f"{k} = {_fmt(v)}" for k, v in s.material.items()]
    if s.state is not None:
        out += ["", "[state]"]
        for k, v in s.state.items():
            if k == "modes":
                out += [f"mode.{i} = " + " ".join(repr(float(x)) for x in m) for i, m in enumerate(v)]
            else:
                out.append(f"{k} = {_fmt(v)}")
    if s.sweep is not None:
        out += ["", "[sweep]"] + [f"{k} = {_fmt(v)}" for k, v in s.sweep.items()]
    if s.solver is not None:
        out += ["", "[solver]"] + [f"{k} = {_fmt(v)}" for k, v in s.solver.items()]
    return "\n".join(out) + "\n"
