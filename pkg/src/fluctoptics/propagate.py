"""Probe propagation through a fluctuation-modulated medium.

Integrates ``E_tt = v_eff(t, z)^2 E_zz`` on a periodic grid with the explicit
three-level leapfrog scheme.  The modulation is ``f(t, z) = offset +
A sin(k_mod z - omega_mod t)`` and the local speed is either ``v0 / (1 + f)``
(``form="reciprocal"``) or ``v0 / sqrt(1 + f)`` (``form="exact"``, the inverse
square root of the bracketed index term of the full wave equation).

All quantities here are nondimensional solver units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

__all__ = [
    "ProbeGrid",
    "ModulationModel",
    "PlaneWaveInit",
    "ProbeField",
    "Snapshot",
    "RunResult",
    "LocalWavelength",
    "Spectrum",
    "SolverError",
    "CFLError",
    "effective_velocity",
    "run",
    "Stepper",
    "make_stepper",
    "advance",
    "reversed_field",
    "energy_proxy",
    "local_wavelength",
    "spectrum",
    "sideband_levels",
    "carrier_phase",
    "FORMS",
]

FORMS = ("reciprocal", "exact")
_NAN_CHECK_EVERY = 64


class SolverError(RuntimeError):
    pass


class CFLError(SolverError):
    pass


def effective_velocity(f_value, v0: float = 1.0, form: str = "reciprocal"):
    """Probe phase velocity for fluctuation term ``f``.

    ``reciprocal``: v0 / (1 + f).  ``exact``: v0 / sqrt(1 + f).
    """
    f_value = np.asarray(f_value, dtype=float)
    if np.any(1 + f_value <= 0):
        raise ValueError("1 + f must be positive")
    if form == "reciprocal":
        out = v0 / (1 + f_value)
    elif form == "exact":
        out = v0 / np.sqrt(1 + f_value)
    else:
        raise ValueError(f"unknown velocity form {form!r}; expected one of {FORMS}")
    return float(out) if out.ndim == 0 else out


def _commensurate(k: float, length: float) -> bool:
    m = k * length / (2 * math.pi)
    return abs(m - round(m)) < 1e-9


@dataclass(frozen=True)
class ProbeGrid:
    """Periodic grid of ``points`` nodes on [0, length).

    ``dt``, when given, is an upper bound on the time step; the solver
    shrinks it so that the end time falls on a step.  Left as ``None`` the
    step is ``cfl * dz / v_max``.
    """

    length: float = 2 * math.pi
    points: int = 1024
    cfl: float = 0.5
    dt: Optional[float] = None

    def __post_init__(self):
        if self.points < 64:
            raise ValueError("grid needs at least 64 points")
        if not 0 < self.cfl < 1:
            raise ValueError("cfl must lie in (0, 1)")
        if not self.length > 0:
            raise ValueError("length must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def z(self) -> np.ndarray:
        return np.arange(self.points) * self.spacing


@dataclass(frozen=True)
class ModulationModel:
    """f(t, z) = offset + amplitude * sin(k_mod z - omega_mod t)."""

    amplitude: float = -0.25
    k_mod: float = 1.0
    omega_mod: float = 0.5
    offset: float = 0.0

    def __post_init__(self):
        if abs(self.amplitude) + abs(self.offset) >= 1:
            raise ValueError("|offset| + |amplitude| must stay below 1")

    @classmethod
    def constant(cls, f0: float) -> "ModulationModel":
        return cls(amplitude=0.0, k_mod=0.0, omega_mod=0.0, offset=f0)

    @property
    def is_constant(self) -> bool:
        return self.amplitude == 0.0

    def __call__(self, t, z):
        z = np.asarray(z, dtype=float)
        return self.offset + self.amplitude * np.sin(self.k_mod * z - self.omega_mod * t)

    def max_velocity(self, v0: float, form: str) -> float:
        return abs(effective_velocity(self.offset - abs(self.amplitude), v0, form))


@dataclass(frozen=True)
class PlaneWaveInit:
    """E(0, z) = a cos(kz), E_t(0, z) = a k c sin(kz): a right-moving wave at speed c."""

    wavenumber: float = 10.0
    speed: float = 1.0
    amplitude: float = 1.0

    def field(self, z):
        return self.amplitude * np.cos(self.wavenumber * z)

    def rate(self, z):
        return self.amplitude * self.wavenumber * self.speed * np.sin(self.wavenumber * z)


@dataclass
class ProbeField:
    """Two time levels: ``prev`` at ``t - dt`` and ``curr`` at ``t``."""

    prev: np.ndarray
    curr: np.ndarray
    t: float
    dt: float
    step: int = 0


@dataclass(frozen=True)
class Snapshot:
    t: float
    z: np.ndarray
    E: np.ndarray
    f: np.ndarray


@dataclass
class RunResult:
    snapshots: list[Snapshot]
    field: ProbeField
    dt: float
    steps: int
    energy: list[float] = field(default_factory=list)


class Stepper:
    """Precomputed pieces of the update for one grid, modulation and form."""

    def __init__(self, grid: ProbeGrid, mod: ModulationModel, v0: float, form: str):
        if form not in FORMS:
            raise ValueError(f"unknown velocity form {form!r}; expected one of {FORMS}")
        self.grid, self.mod, self.v0, self.form = grid, mod, v0, form
        z = grid.z
        self._sin = np.sin(mod.k_mod * z)
        self._cos = np.cos(mod.k_mod * z)
        self._lap = np.empty(grid.points)
        self._const_v2 = self._v2_from_f(np.full(grid.points, mod.offset)) if mod.is_constant else None

    def _v2_from_f(self, f):
        if self.form == "reciprocal":
            return (self.v0 / (1 + f)) ** 2
        return self.v0**2 / (1 + f)

    def f(self, t: float) -> np.ndarray:
        m = self.mod
        if m.is_constant:
            return np.full(self.grid.points, m.offset)
        wt = m.omega_mod * t
        # sin(kz - wt) by angle addition on cached sin(kz), cos(kz)
        return m.offset + m.amplitude * (self._sin * math.cos(wt) - self._cos * math.sin(wt))

    def v2(self, t: float) -> np.ndarray:
        if self._const_v2 is not None:
            return self._const_v2
        return self._v2_from_f(self.f(t))

    def laplacian(self, E: np.ndarray) -> np.ndarray:
        lap = self._lap
        lap[1:-1] = E[2:] + E[:-2]
        lap[0] = E[1] + E[-1]
        lap[-1] = E[0] + E[-2]
        lap -= 2 * E
        lap /= self.grid.spacing**2
        return lap


def _time_step(grid: ProbeGrid, mod: ModulationModel, v0: float, form: str, t_end: float) -> tuple[float, int]:
    dt_max = grid.cfl * grid.spacing / mod.max_velocity(v0, form)
    if grid.dt is not None:
        if grid.dt > dt_max * (1 + 1e-12):
            raise CFLError(
                f"dt = {grid.dt:.6e} exceeds the CFL limit {dt_max:.6e} "
                f"(cfl = {grid.cfl}, dz = {grid.spacing:.6e}, v_max = {mod.max_velocity(v0, form):.6e})"
            )
        dt_max = grid.dt
    steps = max(1, int(math.ceil(t_end / dt_max - 1e-9)))
    return t_end / steps, steps


def advance(field: ProbeField, stepper: Stepper, steps: int) -> ProbeField:
    """Take ``steps`` leapfrog steps (negative ``field.dt`` integrates backwards)."""
    prev, curr = field.prev.copy(), field.curr.copy()
    dt = field.dt
    t0, n0 = field.t, field.step
    for n in range(steps):
        t = t0 + n * dt
        nxt = 2 * curr - prev + (dt * dt) * stepper.v2(t) * stepper.laplacian(curr)
        prev, curr = curr, nxt
        if (n + 1) % _NAN_CHECK_EVERY == 0 and not np.all(np.isfinite(curr)):
            raise SolverError(f"non-finite field at t = {t + dt:.6e}")
    if not np.all(np.isfinite(curr)):
        raise SolverError(f"non-finite field at t = {t0 + steps * dt:.6e}")
    return ProbeField(prev, curr, t0 + steps * dt, dt, n0 + steps)


def reversed_field(field: ProbeField) -> ProbeField:
    """Same state set up to integrate backwards in time."""
    return ProbeField(field.curr.copy(), field.prev.copy(), field.t - field.dt, -field.dt, field.step)


def energy_proxy(field: ProbeField, stepper: Stepper) -> float:
    """sum[(dE/dt)^2 + v^2 (dE/dz)^2] dz, staggered between the two stored levels.

    Time derivative is the one-sided difference of the two levels and the
    gradient term is the product of forward differences at each level, which
    makes the sum exactly conserved by the scheme when v is constant.
    """
    h = stepper.grid.spacing
    et = (field.curr - field.prev) / field.dt
    gp = (np.roll(field.prev, -1) - field.prev) / h
    gc = (np.roll(field.curr, -1) - field.curr) / h
    v2 = stepper.v2(field.t - 0.5 * field.dt)
    return float(np.sum(et**2 + v2 * gp * gc) * h)


def run(
    grid: ProbeGrid,
    mod: ModulationModel,
    v0: float = 1.0,
    init: PlaneWaveInit = PlaneWaveInit(),
    t_end: float = 2 * math.pi,
    times: Optional[Sequence[float]] = None,
    form: str = "reciprocal",
) -> RunResult:
    """Integrate from t = 0 to ``t_end`` and record snapshots at ``times``.

    ``times`` defaults to ``[0, t_end]``; each is rounded to the nearest
    step and the snapshot records the step time actually reached.  The
    domain must hold whole periods of both the initial wave and the
    modulation.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not v0 > 0:
        raise ValueError("v0 must be positive")
    if not _commensurate(init.wavenumber, grid.length):
        raise ValueError("initial wavenumber is not commensurate with the domain length")
    if not mod.is_constant and not _commensurate(mod.k_mod, grid.length):
        raise ValueError("modulation wavenumber is not commensurate with the domain length")

    stepper = Stepper(grid, mod, v0, form)
    dt, steps = _time_step(grid, mod, v0, form, t_end)
    times = [0.0, t_end] if times is None else list(times)
    if any(t < 0 or t > t_end * (1 + 1e-12) for t in times):
        raise ValueError("snapshot times must lie in [0, t_end]")
    marks = sorted({int(round(t / dt)) for t in times})

    z = grid.z
    E0 = init.field(z)
    # second-order Taylor start for the first level
    E1 = E0 + dt * init.rate(z) + 0.5 * dt * dt * stepper.v2(0.0) * stepper.laplacian(E0)
    fld = ProbeField(E0, E1, dt, dt, 1)

    snapshots, energy = [], []
    if marks and marks[0] == 0:
        snapshots.append(Snapshot(0.0, z, E0.copy(), stepper.f(0.0)))
        energy.append(energy_proxy(fld, stepper))
        marks = marks[1:]
    for m in marks:
        fld = advance(fld, stepper, m - fld.step)
        snapshots.append(Snapshot(m * dt, z, fld.curr.copy(), stepper.f(m * dt)))
        energy.append(energy_proxy(fld, stepper))
    if fld.step < steps:
        fld = advance(fld, stepper, steps - fld.step)
    return RunResult(snapshots, fld, dt, steps, energy)


def make_stepper(grid: ProbeGrid, mod: ModulationModel, v0: float = 1.0, form: str = "reciprocal") -> Stepper:
    return Stepper(grid, mod, v0, form)


# -- diagnostics ------------------------------------------------------------------

@dataclass(frozen=True)
class LocalWavelength:
    """Wavelength estimates (twice the zero-crossing spacing) at crossing midpoints."""

    z: np.ndarray
    wavelength: np.ndarray


def _zero_crossings(z: np.ndarray, E: np.ndarray, length: float) -> np.ndarray:
    nxt = np.roll(E, -1)
    z_next = np.roll(z, -1)
    z_next[-1] = length  # wrap the last segment across the period
    idx = np.nonzero((E == 0) | (E * nxt < 0))[0]
    out = []
    for i in idx:
        if E[i] == 0:
            out.append(z[i])
        else:
            out.append(z[i] + (z_next[i] - z[i]) * E[i] / (E[i] - nxt[i]))
    return np.unique(np.mod(out, length))


def local_wavelength(snap: Snapshot, length: Optional[float] = None) -> LocalWavelength:
    """Piecewise wavelength from linearly interpolated zero crossings."""
    if length is None:
        length = len(snap.z) * (snap.z[1] - snap.z[0])
    zc = _zero_crossings(snap.z, snap.E, length)
    if len(zc) < 4:
        raise ValueError(f"need at least 4 zero crossings, found {len(zc)}")
    gaps = np.diff(np.append(zc, zc[0] + length))
    mid = np.mod(zc + 0.5 * gaps, length)
    order = np.argsort(mid)
    return LocalWavelength(mid[order], 2 * gaps[order])


@dataclass(frozen=True)
class Spectrum:
    """Normalized Fourier magnitudes of a periodic snapshot.

    A unit-amplitude cosine in mode ``m`` has magnitude 1 at index ``m``.
    ``peaks`` lists local maxima at or above ``threshold`` times the
    carrier magnitude.
    """

    mode_index: np.ndarray
    magnitude: np.ndarray
    carrier: int
    threshold: float
    peaks: np.ndarray

    def level(self, index: int) -> float:
        """Magnitude at ``index`` relative to the carrier."""
        return float(self.magnitude[index] / self.magnitude[self.carrier])


def spectrum(snap: Snapshot, threshold: float = 1e-3, carrier: Optional[int] = None) -> Spectrum:
    n = len(snap.E)
    mag = np.abs(np.fft.rfft(snap.E)) * (2.0 / n)
    mag[0] /= 2
    if n % 2 == 0:
        mag[-1] /= 2
    if carrier is None:
        carrier = int(np.argmax(mag))
    floor = threshold * mag[carrier]
    # pad with zeros so maxima at either end are found too
    peaks, _ = find_peaks(np.concatenate(([0.0], mag, [0.0])), height=floor)
    return Spectrum(np.arange(len(mag)), mag, carrier, threshold, peaks - 1)


def sideband_levels(spec: Spectrum, offset: int) -> tuple[float, float]:
    """Relative magnitudes at carrier - offset and carrier + offset."""
    lo, hi = spec.carrier - offset, spec.carrier + offset
    if lo < 0 or hi >= len(spec.magnitude):
        raise ValueError("sideband index outside the resolved band")
    return spec.level(lo), spec.level(hi)


def carrier_phase(snap: Snapshot, mode: int) -> float:
    """Phase of ``exp(i mode * 2 pi z / L)`` in the snapshot, so cos(kz - p) gives p."""
    return float(-np.angle(np.fft.rfft(snap.E)[mode]))
