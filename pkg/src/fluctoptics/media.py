"""Nonlinear media: susceptibility tensors, probe indices and birefringence.

Geometry is fixed: the background field points along x, the probe travels
along z and is polarized along x or y.  Tensors are stored in full (3x3,
3x3x3, 3x3x3x3) and indexed by axis name or number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .units import (
    DEFAULT_CONSTANTS,
    M2_PER_V2,
    M_PER_V,
    V_PER_M,
    ConversionConstants,
    Quantity,
    Unit,
    UnitError,
    um,
)

__all__ = [
    "SusceptibilityTensors",
    "Material",
    "ClassicalBirefringence",
    "ValidityCheck",
    "ValidityReport",
    "MaterialFileError",
    "axis_index",
    "chi2_pair_symmetrized",
    "chi3_cyclic_symmetrized",
    "cyclic_symmetrize",
    "probe_n_squared",
    "delta_n_classical",
    "quantum_coefficient",
    "delta_n_quantum",
    "expansion_validity",
    "cdgeas2",
    "parse_material",
    "load_material",
    "dump_material",
]

_AXES = {"x": 0, "y": 1, "z": 2}
_NAMES = "xyz"

# "much smaller than" is read as a factor of ten
MUCH_SMALLER = 0.1

Axis = Union[str, int]


def axis_index(a: Axis) -> int:
    if isinstance(a, str):
        try:
            return _AXES[a.lower()]
        except KeyError:
            raise ValueError(f"unknown axis {a!r}") from None
    if a in (0, 1, 2):
        return int(a)
    raise ValueError(f"unknown axis {a!r}")


@dataclass(frozen=True, eq=False)
class SusceptibilityTensors:
    """Linear, second- and third-order susceptibilities.

    ``chi2`` is in um^2 or m/V, ``chi3`` in um^4 or m^2/V^2, as given by
    the unit tags.  The tags apply to the whole tensor.
    """

    chi1: np.ndarray
    chi2: np.ndarray
    chi3: np.ndarray
    chi2_unit: Unit = um(2)
    chi3_unit: Unit = um(4)

    def __post_init__(self):
        chi1 = np.array(self.chi1, dtype=float)
        chi2 = np.array(self.chi2, dtype=float)
        chi3 = np.array(self.chi3, dtype=float)
        if chi1.shape != (3, 3) or chi2.shape != (3, 3, 3) or chi3.shape != (3, 3, 3, 3):
            raise ValueError("susceptibility tensors must have shapes (3,3), (3,3,3), (3,3,3,3)")
        for name, arr in (("chi1", chi1), ("chi2", chi2), ("chi3", chi3)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        if not np.allclose(chi1, chi1.T, rtol=1e-12, atol=0.0):
            raise ValueError("chi1 must be symmetric")
        if self.chi2_unit not in (um(2), M_PER_V):
            raise UnitError(f"chi2 unit must be um^2 or m/V, got {self.chi2_unit}")
        if self.chi3_unit not in (um(4), M2_PER_V2):
            raise UnitError(f"chi3 unit must be um^4 or m2/V2, got {self.chi3_unit}")
        for arr in (chi1, chi2, chi3):
            arr.setflags(write=False)
        object.__setattr__(self, "chi1", chi1)
        object.__setattr__(self, "chi2", chi2)
        object.__setattr__(self, "chi3", chi3)

    @classmethod
    def zeros(cls, chi1_diag: float = 0.0, chi2_unit: Unit = um(2), chi3_unit: Unit = um(4)):
        return cls(np.eye(3) * chi1_diag, np.zeros((3, 3, 3)), np.zeros((3, 3, 3, 3)), chi2_unit, chi3_unit)

    @property
    def is_natural(self) -> bool:
        return self.chi2_unit == um(2) and self.chi3_unit == um(4)

    def to_natural(self, constants: ConversionConstants = DEFAULT_CONSTANTS) -> "SusceptibilityTensors":
        if self.is_natural:
            return self
        chi2 = Quantity(self.chi2, self.chi2_unit).to(um(2), constants).value
        chi3 = Quantity(self.chi3, self.chi3_unit).to(um(4), constants).value
        return SusceptibilityTensors(self.chi1, chi2, chi3)

    def to_si(self, constants: ConversionConstants = DEFAULT_CONSTANTS) -> "SusceptibilityTensors":
        chi2 = Quantity(self.chi2, self.chi2_unit).to(M_PER_V, constants).value
        chi3 = Quantity(self.chi3, self.chi3_unit).to(M2_PER_V2, constants).value
        return SusceptibilityTensors(self.chi1, chi2, chi3, M_PER_V, M2_PER_V2)

    def __eq__(self, other):
        if not isinstance(other, SusceptibilityTensors):
            return NotImplemented
        return (
            self.chi2_unit == other.chi2_unit
            and self.chi3_unit == other.chi3_unit
            and np.array_equal(self.chi1, other.chi1)
            and np.array_equal(self.chi2, other.chi2)
            and np.array_equal(self.chi3, other.chi3)
        )


@dataclass(frozen=True)
class Material:
    """A named medium with no natural birefringence for propagation along z."""

    name: str
    tensors: SusceptibilityTensors
    n0: float
    validity_wavelength: Optional[tuple[float, float]] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.n0 > 1:
            raise ValueError(f"n0 must exceed 1, got {self.n0}")
        c1 = self.tensors.chi1
        if c1[0, 0] != c1[1, 1]:
            raise ValueError("chi1_xx must equal chi1_yy (no natural birefringence)")
        if not math.isclose(self.n0**2, 1 + c1[0, 0], rel_tol=1e-9):
            raise ValueError(f"n0^2 = {self.n0**2} inconsistent with 1 + chi1_xx = {1 + c1[0, 0]}")

    @classmethod
    def isotropic(cls, name: str, n0: float, chi2=None, chi3=None, chi2_unit=um(2), chi3_unit=um(4), **kw):
        """Material with chi1 = (n0^2 - 1) * identity."""
        chi2 = np.zeros((3, 3, 3)) if chi2 is None else chi2
        chi3 = np.zeros((3, 3, 3, 3)) if chi3 is None else chi3
        t = SusceptibilityTensors(np.eye(3) * (n0**2 - 1), chi2, chi3, chi2_unit, chi3_unit)
        return cls(name, t, n0, **kw)


# -- symmetrized components ----------------------------------------------------

def chi2_pair_symmetrized(t: SusceptibilityTensors, i: Axis, j: Axis, k: Axis) -> float:
    """chi2_i(jk): mean over swapping the last two indices."""
    i, j, k = axis_index(i), axis_index(j), axis_index(k)
    return 0.5 * (t.chi2[i, j, k] + t.chi2[i, k, j])


def chi3_cyclic_symmetrized(t: SusceptibilityTensors, i: Axis, j: Axis, k: Axis, l: Axis) -> float:
    """chi3_i{jkl}: mean over cyclic rotations of the last three indices."""
    i, j, k, l = (axis_index(a) for a in (i, j, k, l))
    return (t.chi3[i, j, k, l] + t.chi3[i, k, l, j] + t.chi3[i, l, j, k]) / 3.0


def cyclic_symmetrize(t: SusceptibilityTensors) -> SusceptibilityTensors:
    """Whole tensors with chi2 pair-symmetrized and chi3 cyclic-symmetrized."""
    chi2 = 0.5 * (t.chi2 + t.chi2.transpose(0, 2, 1))
    chi3 = (t.chi3 + t.chi3.transpose(0, 2, 3, 1) + t.chi3.transpose(0, 3, 1, 2)) / 3.0
    return SusceptibilityTensors(t.chi1, chi2, chi3, t.chi2_unit, t.chi3_unit)


# -- field handling -------------------------------------------------------------

def _field_natural(E0, constants: ConversionConstants) -> float:
    """Background field in um^-2; bare numbers are taken as natural units."""
    if not isinstance(E0, Quantity):
        E0 = Quantity(E0, um(-2))
    if E0.unit == V_PER_M:
        E0 = E0.to(um(-2), constants)
    value = E0.require(um(-2))
    if not np.all(np.isfinite(value)):
        raise ValueError("field strength must be finite")
    return value


def _probe_coefficients(t: SusceptibilityTensors, axis: Axis) -> tuple[float, float]:
    a = axis_index(axis)
    if a == 0:
        return t.chi2[0, 0, 0], t.chi3[0, 0, 0, 0]
    if a == 1:
        return chi2_pair_symmetrized(t, "y", "y", "x"), chi3_cyclic_symmetrized(t, "y", "y", "x", "x")
    raise ValueError("probe polarization must be x or y for propagation along z")


def probe_n_squared(m: Material, probe_axis: Axis, E0, constants: ConversionConstants = DEFAULT_CONSTANTS):
    """Squared refractive index seen by a probe polarized along ``probe_axis``.

    ``n0^2 + 2 chi2 E0 + 3 chi3 E0^2`` with the x-probe components
    (xxx, xxxx) or the y-probe components (y(yx), y{yxx}).
    """
    E = _field_natural(E0, constants)
    c2, c3 = _probe_coefficients(m.tensors.to_natural(constants), probe_axis)
    return m.n0**2 + 2 * c2 * E + 3 * c3 * E**2


@dataclass(frozen=True)
class ValidityCheck:
    name: str
    small: float
    large: float
    passed: bool

    @property
    def margin(self) -> float:
        """How many times ``small`` fits into ``large`` (inf when small is 0)."""
        return math.inf if self.small == 0 else self.large / self.small


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple[ValidityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[ValidityCheck]:
        return [c for c in self.checks if not c.passed]


def _check(name, small, large) -> ValidityCheck:
    small, large = float(abs(small)), float(abs(large))
    return ValidityCheck(name, small, large, small <= MUCH_SMALLER * large)


def expansion_validity(m: Material, E0, constants: ConversionConstants = DEFAULT_CONSTANTS) -> ValidityReport:
    """Check the power-series hierarchy used by the birefringence formulas.

    Requires |chi3 E0^2| << |chi2 E0| << 1 (the Kerr-vs-Pockels check is
    dropped when there is no Pockels term) and (chi2/n0^2)^2 << |chi3/n0^2|.
    """
    E = float(np.max(np.abs(_field_natural(E0, constants))))
    t = m.tensors.to_natural(constants)
    c2x, c3x = _probe_coefficients(t, "x")
    c2y, c3y = _probe_coefficients(t, "y")
    chi2 = max(abs(c2x), abs(c2y))
    chi3 = max(abs(c3x), abs(c3y))
    pockels = 2 * chi2 * E
    kerr = 3 * chi3 * E**2
    checks = []
    if pockels > 0:
        checks.append(_check("kerr<<pockels", kerr, pockels))
        checks.append(_check("pockels<<linear", pockels, 1.0))
    checks.append(_check("kerr<<linear", kerr, 1.0))
    if chi2 > 0:
        n2 = m.n0**2
        checks.append(_check("chi2_squared<<chi3", (chi2 / n2) ** 2, chi3 / n2))
    return ValidityReport(tuple(checks))


@dataclass(frozen=True)
class ClassicalBirefringence:
    """delta n = (n_x - n_y)/n0 split into its Pockels and Kerr parts."""

    pockels: float
    kerr: float
    validity: ValidityReport

    @property
    def total(self) -> float:
        return self.pockels + self.kerr

    @property
    def valid(self) -> bool:
        return self.validity.ok


def delta_n_classical(m: Material, E0, constants: ConversionConstants = DEFAULT_CONSTANTS) -> ClassicalBirefringence:
    """Fractional index difference between x- and y-polarized probes.

    A broken expansion hierarchy is reported on the result, not raised.
    """
    E = _field_natural(E0, constants)
    t = m.tensors.to_natural(constants)
    c2x, c3x = _probe_coefficients(t, "x")
    c2y, c3y = _probe_coefficients(t, "y")
    n2 = m.n0**2
    pockels = (c2x - c2y) / n2 * E
    kerr = 1.5 * (c3x - c3y) / n2 * E**2
    return ClassicalBirefringence(pockels, kerr, expansion_validity(m, E0, constants))


def quantum_coefficient(m: Material, constants: ConversionConstants = DEFAULT_CONSTANTS) -> Quantity:
    """Coefficient C with <delta n> = C <:E^2:>, in um^4."""
    c = m.tensors.chi3
    X, Y = 0, 1
    raw = (3 * c[X, X, X, X] - c[Y, Y, X, X] - c[Y, X, X, Y] - c[Y, X, Y, X]) / (2 * m.n0**2)
    return Quantity(raw, m.tensors.chi3_unit).to(um(4), constants)


def delta_n_quantum(m: Material, e2, coefficient: Optional[Quantity] = None):
    """Expected birefringence for a mean normal-ordered squared field ``e2``.

    ``e2`` may be negative (subvacuum).  Bare numbers are read as um^-4.
    Pass ``coefficient`` to override the value computed from ``m``.
    """
    if not isinstance(e2, Quantity):
        e2 = Quantity(e2, um(-4))
    value = e2.require(um(-4))
    C = quantum_coefficient(m) if coefficient is None else coefficient
    return C.require(um(4)) * value


# -- presets ----------------------------------------------------------------------

CDGEAS2_CHI3_XXXX = 72800e-22  # m^2/V^2
CDGEAS2_CHI3_XXYY = -14000e-22  # m^2/V^2
CDGEAS2_QUOTED_COEFFICIENT = 3.39e-9  # um^4


def cdgeas2() -> Material:
    """CdGeAs2 near 10.6 um.

    Only chi3_xxxx and chi3_xxyy are tabulated; every mixed xy component
    (xxyy, xyyx, xyxy, yyxx, yxxy, yxyx) is set equal to chi3_xxyy and
    chi3_yyyy to chi3_xxxx.  chi2 components that couple an x background
    to a z-propagating probe vanish for this crystal class, so chi2 is zero.
    """
    n0 = 3.5
    chi3 = np.zeros((3, 3, 3, 3))
    X, Y = 0, 1
    chi3[X, X, X, X] = chi3[Y, Y, Y, Y] = CDGEAS2_CHI3_XXXX
    for idx in [(X, X, Y, Y), (X, Y, Y, X), (X, Y, X, Y), (Y, Y, X, X), (Y, X, X, Y), (Y, X, Y, X)]:
        chi3[idx] = CDGEAS2_CHI3_XXYY
    t = SusceptibilityTensors(np.eye(3) * (n0**2 - 1), np.zeros((3, 3, 3)), chi3, M_PER_V, M2_PER_V2)
    return Material(
        "cdgeas2",
        t,
        n0,
        validity_wavelength=(8.0, 12.0),
        metadata={
            "assumption": "chi3 mixed xy components all equal chi3_xxyy; chi3_yyyy = chi3_xxxx; chi2 = 0",
            "quoted_coefficient": CDGEAS2_QUOTED_COEFFICIENT,
            "reference_wavelength_um": 10.6,
        },
    )


PRESETS = {"cdgeas2": cdgeas2}


# -- key-value material files ----------------------------------------------------

class MaterialFileError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


_UNIT_SUFFIX = {
    "chi2": {"mV-1": M_PER_V, "um2": um(2)},
    "chi3": {"m2V-2": M2_PER_V2, "um4": um(4)},
}
_SUFFIX_OF = {u: s for table in _UNIT_SUFFIX.values() for s, u in table.items()}
_ENTRY = re.compile(r"^(chi[123])((?:\.[xyz])+)$")


def parse_material(text: str) -> Material:
    """Parse the key-value material format.

    One assignment per line, ``#`` starts a comment::

        name = cdgeas2
        n0 = 3.5
        validity = 8 12
        chi1.z.z = 11.25
        chi3.x.x.y.y = -1.4e-18 m2V-2
        chi2.unit = mV-1
        meta.note = free text

    chi1 defaults to (n0^2 - 1) on the diagonal.  chi2 entries need a
    ``mV-1`` or ``um2`` suffix, chi3 entries ``m2V-2`` or ``um4``; one
    tensor may not mix units.  ``chi2.unit``/``chi3.unit`` set the tag of
    a tensor that has no nonzero entries.
    """
    errors: list[str] = []
    name, n0, validity = None, None, None
    meta: dict = {}
    entries: dict[str, list] = {"chi1": [], "chi2": [], "chi3": []}
    units: dict[str, Unit] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key == "name":
                name = value
            elif key == "n0":
                n0 = float(value)
            elif key == "validity":
                lo, hi = (float(v) for v in value.split())
                validity = (lo, hi)
            elif key in ("chi2.unit", "chi3.unit"):
                order = key[:4]
                if value not in _UNIT_SUFFIX[order]:
                    raise ValueError(f"{key} must be one of {', '.join(_UNIT_SUFFIX[order])}")
                if units.setdefault(order, _UNIT_SUFFIX[order][value]) != _UNIT_SUFFIX[order][value]:
                    raise ValueError(f"{order} mixes units")
            elif key.startswith("meta."):
                meta[key[5:]] = _meta_value(value)
            elif m := _ENTRY.match(key):
                order, axes = m.group(1), tuple(axis_index(a) for a in m.group(2)[1:].split("."))
                rank = int(order[-1]) + 1
                if len(axes) != rank:
                    raise ValueError(f"{order} needs {rank} indices")
                parts = value.split()
                if order == "chi1":
                    if len(parts) != 1:
                        raise ValueError("chi1 entries are dimensionless")
                    entries[order].append((axes, float(parts[0])))
                    continue
                if len(parts) != 2 or parts[1] not in _UNIT_SUFFIX[order]:
                    allowed = ", ".join(_UNIT_SUFFIX[order])
                    raise ValueError(f"{order} entries need a unit suffix ({allowed})")
                unit = _UNIT_SUFFIX[order][parts[1]]
                if units.setdefault(order, unit) != unit:
                    raise ValueError(f"{order} mixes units")
                entries[order].append((axes, float(parts[0])))
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            errors.append(f"line {lineno}: {exc}")

    if n0 is None:
        errors.append("missing n0")
    if errors:
        raise MaterialFileError(errors)

    chi1 = np.eye(3) * (n0**2 - 1)
    chi2 = np.zeros((3, 3, 3))
    chi3 = np.zeros((3, 3, 3, 3))
    for arr, order in ((chi1, "chi1"), (chi2, "chi2"), (chi3, "chi3")):
        for axes, v in entries[order]:
            arr[axes] = v
    try:
        tensors = SusceptibilityTensors(
            chi1, chi2, chi3, units.get("chi2", um(2)), units.get("chi3", um(4))
        )
        return Material(name or "unnamed", tensors, n0, validity, meta)
    except (ValueError, UnitError) as exc:
        raise MaterialFileError([str(exc)]) from None


def _meta_value(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def load_material(path) -> Material:
    return parse_material(Path(path).read_text())


def dump_material(m: Material) -> str:
    """Serialize to the key-value format; nonzero entries only."""
    t = m.tensors
    lines = [f"name = {m.name}", f"n0 = {m.n0!r}"]
    if m.validity_wavelength is not None:
        lo, hi = m.validity_wavelength
        lines.append(f"validity = {lo!r} {hi!r}")
    for key in sorted(m.metadata):
        lines.append(f"meta.{key} = {m.metadata[key]}")
    default_chi1 = np.eye(3) * (m.n0**2 - 1)
    for idx in np.ndindex(3, 3):
        if t.chi1[idx] != default_chi1[idx]:
            lines.append(f"chi1.{_dotted(idx)} = {float(t.chi1[idx])!r}")
    for order, arr, unit in (("chi2", t.chi2, t.chi2_unit), ("chi3", t.chi3, t.chi3_unit)):
        lines.append(f"{order}.unit = {_SUFFIX_OF[unit]}")
        for idx in zip(*np.nonzero(arr)):
            lines.append(f"{order}.{_dotted(idx)} = {float(arr[idx])!r} {_SUFFIX_OF[unit]}")
    return "\n".join(lines) + "\n"


def _dotted(idx) -> str:
    return ".".join(_NAMES[int(i)] for i in idx)
