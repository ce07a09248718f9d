"""Command-line front end.

    fluctoptics <subcommand> [--config FILE | --preset NAME] [--out DIR] [--format csv|json|both]

Exit codes: 0 success, 1 numerical failure, 2 bad configuration or
usage, 66 missing input file.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .ambient import e2_casimir, e2_thermal, CasimirPlate
from .media import delta_n_quantum, quantum_coefficient
from .presets import PRESETS, load_preset
from .propagate import SolverError, local_wavelength, run, sideband_levels, spectrum
from .qstates import (
    CoherentMode,
    ModeSet,
    SqueezedBeam,
    SqueezedMode,
    e2_coherent,
    e2_mode_sum,
    e2_single_mode_squeezed,
    e2_squeezed_beam,
    subvacuum_fraction,
)
from .scenario import EXIT_CONFIG, ConfigError, Scenario, dump_config, load_config
from .tables import csv_text, json_text, precision_from_env, write_text
from .units import KELVIN, Quantity, um

__all__ = ["main", "run_scenario", "SUBCOMMANDS"]

SUBCOMMANDS = ("e2", "birefringence", "propagate", "ambient", "presets", "validate")
EXIT_OK, EXIT_NUMERIC = 0, 1


def _config_hash(s: Scenario) -> str:
    return hashlib.sha256(dump_config(s).encode()).hexdigest()


def _meta(s: Scenario, sub: str, columns, **extra) -> dict:
    meta = {
        "version": __version__,
        "scenario": s.name,
        "subcommand": sub,
        "config_hash": _config_hash(s),
        "columns": list(columns),
    }
    meta.update(extra)
    return meta


# -- table builders ----------------------------------------------------------------

def _e2_table(s: Scenario) -> tuple[dict, dict]:
    """Columns of <:E^2:> over the sweep, plus metadata."""
    state = s.build_state()
    sweep = s.build_sweep()
    extra = {}
    if s.kind in ("thermal", "casimir"):
        return _ambient_table(s, state, sweep)

    if sweep is None:
        t, y = np.array([0.0]), np.array([0.0])
    elif sweep.axis == "t":
        t, y = sweep.values, np.full(sweep.values.shape, sweep.y)
    else:
        t, y = np.full(sweep.values.shape, sweep.t), sweep.values

    if isinstance(state, SqueezedBeam):
        e2 = e2_squeezed_beam(state, t, y)
        extra["spectral_prefactor"] = state.spectral_prefactor.value
        extra["static_prefactor"] = state.static_prefactor.value
        extra["modulation_ratio"] = state.modulation_ratio
        if state.q > 0:
            extra["subvacuum_fraction"] = subvacuum_fraction(state.q)
    elif isinstance(state, ModeSet):
        e2 = e2_mode_sum(state, t, (np.zeros_like(y), y, np.zeros_like(y)))
    elif isinstance(state, CoherentMode):
        e2 = e2_coherent(state, t, y)
    elif isinstance(state, SqueezedMode):
        e2 = e2_single_mode_squeezed(state.q, state.eta, state.E0_amp, t, y, state.omega, state.k)
    else:
        raise ValueError(f"state kind {s.kind!r} has no e2 table")
    return {"t": t, "y": y, "e2": np.broadcast_to(e2.value, t.shape)}, extra


def _ambient_table(s: Scenario, state, sweep) -> tuple[dict, dict]:
    if s.kind == "thermal":
        T = np.array([state.T]) if sweep is None else sweep.values
        return {"T": T, "e2": e2_thermal(Quantity(T, KELVIN)).value * np.ones_like(T)}, {}
    z = np.array([state.z]) if sweep is None else sweep.values
    e2 = np.array([e2_casimir(CasimirPlate(float(zi), state.lambda_P)).e2_total.value for zi in z])
    return {"z": z, "e2": e2}, {"lambda_P": state.lambda_P if state.lambda_P is not None else "none"}


def _birefringence_table(s: Scenario) -> tuple[dict, dict]:
    material = s.build_material()
    if material is None:
        raise ConfigError(["birefringence needs a [material] section"])
    cols, extra = _e2_table(s)
    e2 = Quantity(np.asarray(cols["e2"], dtype=float), um(-4))
    C = quantum_coefficient(material)
    cols = dict(cols)
    cols["dn"] = delta_n_quantum(material, e2)
    extra["coefficient"] = C.value
    quoted = material.metadata.get("quoted_coefficient")
    if isinstance(quoted, float):
        cols["dn_quoted"] = delta_n_quantum(material, e2, coefficient=Quantity(quoted, um(4)))
        extra["quoted_coefficient"] = quoted
    return cols, extra


def _propagate_tables(s: Scenario) -> tuple[dict, dict, dict]:
    setup = s.build_solver()
    if setup is None:
        raise ConfigError(["propagate needs a [solver] section"])
    result = run(
        setup.grid,
        setup.modulation,
        v0=setup.v0,
        init=setup.init,
        t_end=setup.t_end,
        times=setup.times,
        form=setup.form,
    )
    snaps = result.snapshots
    snap_cols = {
        "t": np.concatenate([np.full(len(sn.z), sn.t) for sn in snaps]),
        "z": np.concatenate([sn.z for sn in snaps]),
        "E": np.concatenate([sn.E for sn in snaps]),
        "f": np.concatenate([sn.f for sn in snaps]),
    }
    last = snaps[-1]
    carrier = int(round(setup.init.wavenumber * setup.grid.length / (2 * np.pi)))
    spec = spectrum(last, threshold=setup.threshold, carrier=carrier)
    spec_cols = {"mode_index": spec.mode_index, "magnitude": spec.magnitude}
    extra = {
        "dt": result.dt,
        "steps": result.steps,
        "carrier_index": carrier,
        "peaks": [int(p) for p in spec.peaks],
        "energy": list(result.energy),
    }
    if not setup.modulation.is_constant:
        offset = int(round(setup.modulation.k_mod * setup.grid.length / (2 * np.pi)))
        lo, hi = sideband_levels(spec, offset)
        extra["sideband_levels"] = [lo, hi]
        try:
            lw = local_wavelength(last, setup.grid.length)
            f_at = np.interp(lw.z, last.z, last.f, period=setup.grid.length)
            extra["wavelength_f_correlation"] = float(np.corrcoef(lw.wavelength, f_at)[0, 1])
        except ValueError:
            pass
    return snap_cols, spec_cols, extra


# -- running -----------------------------------------------------------------------

def _formats(fmt: Optional[str], s: Scenario) -> tuple:
    if fmt is None:
        return tuple(s.outputs)
    return ("csv", "json") if fmt == "both" else (fmt,)


def _emit(out: Path, stem: str, cols: dict, meta: dict, formats, digits: int, written: list):
    if "csv" in formats:
        written.append(write_text(out / f"{stem}.csv", csv_text(cols, digits)))
    if "json" in formats:
        doc = {"meta": meta, "series": {k: np.asarray(v) for k, v in cols.items()}}
        written.append(write_text(out / f"{stem}.json", json_text(doc, digits)))


def run_scenario(s: Scenario, subcommand: str, out: Path, fmt: Optional[str] = None, digits: int = 17) -> list:
    """Compute ``subcommand`` for scenario ``s`` and write its output files."""
    formats = _formats(fmt, s)
    written: list[Path] = []
    if subcommand in ("e2", "ambient"):
        if subcommand == "ambient" and s.kind not in ("thermal", "casimir"):
            raise ConfigError(["ambient needs a thermal or casimir state"])
        if s.state is None:
            raise ConfigError(["missing [state] section"])
        cols, extra = _e2_table(s)
        _emit(out, f"{s.name}_{subcommand}", cols, _meta(s, subcommand, cols, **extra), formats, digits, written)
    elif subcommand == "birefringence":
        if s.state is None:
            raise ConfigError(["missing [state] section"])
        cols, extra = _birefringence_table(s)
        _emit(out, f"{s.name}_birefringence", cols, _meta(s, subcommand, cols, **extra), formats, digits, written)
    elif subcommand == "propagate":
        snap_cols, spec_cols, extra = _propagate_tables(s)
        if "csv" in formats:
            written.append(write_text(out / f"{s.name}_snapshots.csv", csv_text(snap_cols, digits)))
            written.append(write_text(out / f"{s.name}_spectrum.csv", csv_text(spec_cols, digits)))
        if "json" in formats:
            doc = {
                "meta": _meta(s, subcommand, list(snap_cols) + list(spec_cols), **extra),
                "series": {"snapshots": snap_cols, "spectrum": spec_cols},
            }
            written.append(write_text(out / f"{s.name}_propagate.json", json_text(doc, digits)))
    else:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    return written


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fluctoptics", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fluctoptics {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("e2", "mean normal-ordered squared field over the sweep"),
        ("birefringence", "induced index difference over the sweep"),
        ("propagate", "integrate the probe wave equation"),
        ("ambient", "thermal or Casimir mean squared field"),
        ("validate", "check a scenario and report every problem"),
        ("presets", "list built-in scenarios, or print one with --preset"),
    ):
        sp = sub.add_parser(name, help=help_)
        src = sp.add_mutually_exclusive_group(required=name not in ("presets",))
        src.add_argument("--config", type=Path, help="scenario file")
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
        if name not in ("presets", "validate"):
            sp.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
            sp.add_argument("--format", choices=("csv", "json", "both"), help="override the scenario outputs")
    return p


def _load(args) -> Scenario:
    if args.preset is not None:
        return load_preset(args.preset)
    return load_config(args.config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "presets":
        if args.preset is not None:
            sys.stdout.write(PRESETS[args.preset][0])
        elif args.config is not None:
            sys.stderr.write("presets takes --preset, not --config\n")
            return EXIT_CONFIG
        else:
            for name, (_, doc) in PRESETS.items():
                sys.stdout.write(f"{name}\t{doc}\n")
        return EXIT_OK

    try:
        digits = precision_from_env()
        scenario = _load(args)
        if args.command == "validate":
            sys.stdout.write(f"ok: {scenario.name}\n")
            return EXIT_OK
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with np.errstate(over="raise", divide="raise", invalid="raise"):
                written = run_scenario(scenario, args.command, args.out, args.format, digits)
    except ConfigError as exc:
        for e in exc.errors:
            sys.stderr.write(f"error: {e}\n")
        return exc.exit_code
    except (SolverError, FloatingPointError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    for path in written:
        sys.stdout.write(f"{path}\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
