"""Normal-ordered squared field expectations for squeezed and coherent states.

All quantities are in natural units with lengths in micrometres: times and
positions in um, wavenumbers and frequencies in um^-1, <:E^2:> in um^-4.
Functions accept scalars or numpy arrays for ``t`` and positions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.optimize import bisect

from .units import Quantity, um

__all__ = [
    "Mode",
    "ModeSet",
    "SqueezedBeam",
    "CoherentMode",
    "SqueezedMode",
    "SubvacuumWindows",
    "CollimationWarning",
    "e2_mode_sum",
    "e2_squeezed_beam",
    "e2_coherent",
    "e2_single_mode_squeezed",
    "mean_photon_number",
    "time_averaged_e2",
    "peak_ratio_small_n",
    "subvacuum_windows",
    "subvacuum_fraction",
    "default_mode_amplitude",
]

E2_UNIT = um(-4)


class CollimationWarning(UserWarning):
    """Beam parameters stretch the narrow-band, collimated-beam approximation."""


@dataclass(frozen=True)
class Mode:
    k: tuple[float, float, float]
    omega: float
    q: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("mode frequency must be positive")
        if self.q < 0:
            raise ValueError("squeeze amplitude must be non-negative")
        object.__setattr__(self, "k", tuple(float(c) for c in self.k))


@dataclass(frozen=True)
class ModeSet:
    """Discrete modes in a quantization volume (um^3), each independently squeezed."""

    volume: float
    modes: tuple[Mode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.volume > 0:
            raise ValueError("quantization volume must be positive")
        object.__setattr__(self, "modes", tuple(self.modes))


@dataclass(frozen=True)
class SqueezedBeam:
    """Narrow-band squeezed vacuum beam along y with central frequency Omega.

    Use :meth:`in_medium` to set ``Omega = k / medium_index``.
    """

    Omega: float
    k: float
    delta_k_over_k: float
    delta_theta: float
    q: float
    eta: float = 0.0
    medium_index: float = 1.0

    def __post_init__(self):
        if not self.Omega > 0 or not self.k > 0:
            raise ValueError("Omega and k must be positive")
        if not self.delta_k_over_k > 0:
            raise ValueError("delta_k_over_k must be positive")
        if not 0 < self.delta_theta <= math.pi:
            raise ValueError("delta_theta must lie in (0, pi]")
        if self.q < 0:
            raise ValueError("q must be non-negative")
        if self.medium_index < 1:
            raise ValueError("medium_index must be at least 1")
        if self.delta_k_over_k >= 0.1:
            warnings.warn("delta_k_over_k >= 0.1: bandwidth not small", CollimationWarning, stacklevel=3)
        if self.delta_theta > 0.3:
            warnings.warn(
                "delta_theta > 0.3: beam is not collimated (waveguide-like spread)",
                CollimationWarning,
                stacklevel=3,
            )

    @classmethod
    def in_medium(cls, wavelength: float, medium_index: float = 1.0, **kw) -> "SqueezedBeam":
        """Beam with ``k = 2 pi / wavelength`` and ``Omega = k / medium_index``."""
        k = 2 * math.pi / wavelength
        return cls(Omega=k / medium_index, k=k, medium_index=medium_index, **kw)

    @property
    def bandwidth_factor(self) -> float:
        """(delta k / k) * delta theta."""
        return self.delta_k_over_k * self.delta_theta

    @property
    def spectral_prefactor(self) -> Quantity:
        """Omega k^3 / (4 pi^2)."""
        return Quantity(self.Omega * self.k**3 / (4 * math.pi**2), E2_UNIT)

    @property
    def static_prefactor(self) -> Quantity:
        """Omega k^3 / (4 pi^2) * (delta k / k) * delta theta."""
        return self.spectral_prefactor * self.bandwidth_factor

    @property
    def modulation_ratio(self) -> float:
        """cosh q / sinh q, the relative size of the oscillating term."""
        return 1.0 / math.tanh(self.q) if self.q > 0 else math.inf

    def phase(self, t, y):
        return 2 * self.Omega * np.asarray(t) - 2 * self.k * np.asarray(y) - self.eta


@dataclass(frozen=True)
class CoherentMode:
    """Single mode along y in a coherent state with real amplitude Z."""

    Z: float
    E0_amp: float
    omega: float
    k: float

    def __post_init__(self):
        for name in ("Z", "E0_amp", "omega", "k"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class SqueezedMode:
    """Single mode along y in the squeezed vacuum with squeeze parameter q e^{i eta}."""

    q: float
    E0_amp: float
    omega: float
    k: float
    eta: float = 0.0


def default_mode_amplitude(omega: float, volume: float) -> float:
    """Single-mode field amplitude E0 = sqrt(omega / V) / 2.

    With this normalization the single-mode expressions reproduce one term
    of the multimode sum.
    """
    return 0.5 * math.sqrt(omega / volume)


def _sq_term(q, cos_arg):
    s = math.sinh(q)
    return s * (s + math.cosh(q) * np.cos(cos_arg))


def _wrap(value):
    value = np.asarray(value, dtype=float)
    return Quantity(float(value) if value.ndim == 0 else value, E2_UNIT)


def e2_mode_sum(ms: ModeSet, t, x: Sequence) -> Quantity:
    """Exact finite mode sum (1/V) sum_k omega sinh q [sinh q + cosh q cos(2 omega t - 2 k.x - eta)].

    ``x`` is a position triple whose components may be arrays broadcasting
    against ``t``.
    """
    if not ms.modes:
        raise ValueError("mode set is empty")
    t = np.asarray(t, dtype=float)
    x0, x1, x2 = (np.asarray(c, dtype=float) for c in x)
    total = 0.0
    for m in ms.modes:
        kx = m.k[0] * x0 + m.k[1] * x1 + m.k[2] * x2
        total = total + m.omega * _sq_term(m.q, 2 * m.omega * t - 2 * kx - m.eta)
    return _wrap(total / ms.volume)


def e2_squeezed_beam(b: SqueezedBeam, t, y) -> Quantity:
    term = _sq_term(b.q, b.phase(t, y))
    return _wrap(b.spectral_prefactor.value * b.bandwidth_factor * term)


def e2_coherent(c: CoherentMode, t, y) -> Quantity:
    """(2 Z E0 cos(ky - omega t))^2; never negative."""
    phi = c.k * np.asarray(y, dtype=float) - c.omega * np.asarray(t, dtype=float)
    return _wrap((2 * c.Z * c.E0_amp * np.cos(phi)) ** 2)


def e2_single_mode_squeezed(q, eta, E0_amp, t, y, omega, k) -> Quantity:
    """(2 E0)^2 sinh q [sinh q + cosh q cos(2 phi + eta)] with phi = k y - omega t."""
    phi = k * np.asarray(y, dtype=float) - omega * np.asarray(t, dtype=float)
    return _wrap((2 * E0_amp) ** 2 * _sq_term(q, 2 * phi + eta))


def mean_photon_number(state: Union[CoherentMode, SqueezedMode, float]) -> float:
    """Z^2 for a coherent mode, sinh^2 q for a squeezed mode (or a bare q)."""
    if isinstance(state, CoherentMode):
        return state.Z**2
    q = state.q if isinstance(state, SqueezedMode) else float(state)
    return math.sinh(q) ** 2


def time_averaged_e2(state: Union[CoherentMode, SqueezedMode]) -> Quantity:
    """Period average of <:E^2:>, which is 2 E0^2 <n> for both families."""
    return Quantity(2 * state.E0_amp**2 * mean_photon_number(state), E2_UNIT)


def peak_ratio_small_n(n_mean: float) -> float:
    """Peak <:E^2:> of a squeezed vacuum over that of a coherent state with equal <n>.

    sinh q (sinh q + cosh q) / <n> with sinh^2 q = <n>.  Behaves as
    1/sqrt(<n>) for small occupation and tends to 2 for large.
    """
    if not n_mean > 0:
        raise ValueError("mean photon number must be positive")
    s = math.sqrt(n_mean)
    c = math.sqrt(1 + n_mean)
    return s * (s + c) / n_mean


def subvacuum_fraction(q: float) -> float:
    """Fraction of each period with <:E^2:> < 0: arccos(tanh q) / pi (0 for q = 0)."""
    if q < 0:
        raise ValueError("q must be non-negative")
    return 0.0 if q == 0 else math.acos(math.tanh(q)) / math.pi


@dataclass(frozen=True)
class SubvacuumWindows:
    """Time intervals with <:E^2:> < 0 at a fixed position.

    ``fraction`` is the closed-form duty cycle arccos(tanh q)/pi,
    ``measured_fraction`` the total interval length over the horizon.
    """

    intervals: tuple[tuple[float, float], ...]
    fraction: float
    horizon: float

    @property
    def measured_fraction(self) -> float:
        if self.horizon <= 0:
            return 0.0
        return sum(b - a for a, b in self.intervals) / self.horizon


def subvacuum_windows(b: SqueezedBeam, y: float, horizon: float, phase_tol: float = 1e-12) -> SubvacuumWindows:
    """Locate the negative-<:E^2:> windows in [0, horizon] by bisection.

    The sign of the bracketed factor sinh q + cosh q cos(phase) decides
    negativity; roots are refined until the phase is known to ``phase_tol``.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if b.q == 0 or horizon == 0:
        return SubvacuumWindows((), subvacuum_fraction(b.q), horizon)

    sq, cq = math.sinh(b.q), math.cosh(b.q)

    def g(t):
        return sq + cq * math.cos(float(b.phase(t, y)))

    # bracket with well under one sign change per sample; a window spans
    # 2 arccos(tanh q) in phase, so resolve that width several times over
    width = 2 * math.acos(math.tanh(b.q))
    dphase = min(width / 8, 2 * math.pi / 64)
    n = max(2, int(math.ceil(2 * b.Omega * horizon / dphase)) + 1)
    ts = np.linspace(0.0, horizon, n)
    vals = np.array([g(t) for t in ts])
    xtol = phase_tol / (2 * b.Omega)

    neg = vals < 0
    intervals = []
    start = 0.0 if neg[0] else None
    for i in np.nonzero(neg[:-1] != neg[1:])[0]:
        a, c = ts[i], ts[i + 1]
        if vals[i] == 0.0:
            edge = a
        elif vals[i + 1] == 0.0:
            edge = c
        else:
            edge = bisect(g, a, c, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
        if start is None:
            start = edge
        else:
            intervals.append((start, edge))
            start = None
    if start is not None:
        intervals.append((start, horizon))

    intervals = tuple((float(a), float(c)) for a, c in intervals)
    return SubvacuumWindows(intervals, subvacuum_fraction(b.q), horizon)
