"""Unit tags and conversions between SI electro-optic units and natural units.

Natural units here are Lorentz-Heaviside with hbar = c = eps0 = 1, with
lengths measured in micrometres.  A field strength then has dimension
length^-2, a temperature length^-1 and chi3 length^4.

Conversion factors
------------------
The volt maps to an inverse length through ``sqrt(eps0 / (hbar c))``,
which is 1.6735e7 m^-1 with CODATA constants.  Everything else in this
module follows from that number and ``k_B / (hbar c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import constants as _c

__all__ = [
    "ConversionConstants",
    "DEFAULT_CONSTANTS",
    "Quantity",
    "Unit",
    "UnitError",
    "DIMENSIONLESS",
    "KELVIN",
    "M2_PER_V2",
    "M_PER_V",
    "V_PER_M",
    "um",
    "convert_chi2_si_to_natural",
    "convert_chi3_si_to_natural",
    "convert_field_si_to_natural",
    "db_to_squeeze_parameter",
    "kelvin_to_natural",
]

Number = Union[float, np.ndarray]


class UnitError(TypeError):
    """Raised when a quantity carries the wrong unit for an operation."""


@dataclass(frozen=True)
class Unit:
    """A unit tag.

    ``kind`` is one of ``"um"``, ``"m2/V2"``, ``"m/V"``, ``"V/m"``, ``"K"``
    or ``"1"``.  Only micrometre powers carry an exponent.
    """

    kind: str
    power: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown unit kind {self.kind!r}")
        if self.kind != "um" and self.power != 0:
            raise ValueError("only micrometre units carry a power")

    @property
    def is_dimensionless(self) -> bool:
        return self.kind == "1" or (self.kind == "um" and self.power == 0)

    def __str__(self):
        if self.kind == "um":
            return "1" if self.power == 0 else f"um^{self.power}"
        return self.kind


_KINDS = ("um", "m2/V2", "m/V", "V/m", "K", "1")

DIMENSIONLESS = Unit("1")
KELVIN = Unit("K")
M2_PER_V2 = Unit("m2/V2")
M_PER_V = Unit("m/V")
V_PER_M = Unit("V/m")


def um(power: int) -> Unit:
    """Micrometre unit raised to an integer ``power``."""
    if power == 0:
        return DIMENSIONLESS
    return Unit("um", int(power))


def _canonical(unit: Unit) -> Unit:
    return DIMENSIONLESS if unit.is_dimensionless else unit


@dataclass(frozen=True)
class ConversionConstants:
    """Constants linking SI and natural units.

    ``volt_in_inverse_meters`` is rounded to five significant figures; the
    exact CODATA value is ``sqrt(eps0 / (hbar c))``.
    """

    volt_in_inverse_meters: float = 1.6735e7
    hbar_c: float = _c.hbar * _c.c
    k_B: float = _c.k

    def exact_volt_in_inverse_meters(self) -> float:
        return math.sqrt(_c.epsilon_0 / self.hbar_c)

    @property
    def chi3_factor(self) -> float:
        """um^4 per m^2/V^2."""
        return 1e24 / self.volt_in_inverse_meters**2

    @property
    def chi2_factor(self) -> float:
        """um^2 per m/V."""
        return 1e12 / self.volt_in_inverse_meters

    @property
    def field_factor(self) -> float:
        """um^-2 per V/m."""
        return self.volt_in_inverse_meters * 1e-12


DEFAULT_CONSTANTS = ConversionConstants()

# (SI unit, natural unit) -> attribute of ConversionConstants holding the factor
_CONVERTIBLE = {
    (M2_PER_V2, um(4)): "chi3_factor",
    (M_PER_V, um(2)): "chi2_factor",
    (V_PER_M, um(-2)): "field_factor",
}


@dataclass(frozen=True)
class Quantity:
    """A value (scalar or array) with a unit tag.

    Addition and comparison require identical units.  Multiplication and
    division are allowed between micrometre powers, with dimensionless
    quantities and with plain numbers; anything else raises ``UnitError``.
    """

    value: Number
    unit: Unit = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "unit", _canonical(self.unit))

    # -- arithmetic -------------------------------------------------------
    def _same(self, other, op):
        if not isinstance(other, Quantity):
            if self.unit.is_dimensionless:
                return other
            raise UnitError(f"cannot {op} {self.unit} and a bare number")
        if other.unit != self.unit:
            raise UnitError(f"cannot {op} {self.unit} and {other.unit}")
        return other.value

    def __add__(self, other):
        return Quantity(self.value + self._same(other, "add"), self.unit)

    __radd__ = __add__

    def __sub__(self, other):
        return Quantity(self.value - self._same(other, "subtract"), self.unit)

    def __rsub__(self, other):
        return Quantity(self._same(other, "subtract") - self.value, self.unit)

    def __neg__(self):
        return Quantity(-self.value, self.unit)

    def _product_unit(self, other: Unit, sign: int) -> Unit:
        a, b = self.unit, other
        if b.is_dimensionless:
            return a
        if a.is_dimensionless and sign > 0:
            return b
        if a.is_dimensionless and b.kind == "um":
            return um(-b.power)
        if a.kind == "um" and b.kind == "um":
            return um(a.power + sign * b.power)
        if sign < 0 and a == b:
            return DIMENSIONLESS
        return _fail(a, b)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value * other.value, self._product_unit(other.unit, +1))
        return Quantity(self.value * other, self.unit)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(self.value / other.value, self._product_unit(other.unit, -1))
        return Quantity(self.value / other, self.unit)

    def __pow__(self, n: int):
        if self.unit.kind == "um":
            return Quantity(self.value**n, um(self.unit.power * n))
        if self.unit.is_dimensionless:
            return Quantity(self.value**n, DIMENSIONLESS)
        raise UnitError(f"cannot raise {self.unit} to a power")

    def __lt__(self, other):
        return self.value < self._same(other, "compare")

    def __le__(self, other):
        return self.value <= self._same(other, "compare")

    def __gt__(self, other):
        return self.value > self._same(other, "compare")

    def __ge__(self, other):
        return self.value >= self._same(other, "compare")

    def __float__(self):
        if not self.unit.is_dimensionless:
            raise UnitError(f"cannot convert {self.unit} to a bare float")
        return float(self.value)

    # -- conversion -------------------------------------------------------
    def to(self, unit: Unit, constants: ConversionConstants = DEFAULT_CONSTANTS) -> "Quantity":
        """Convert to ``unit``; only the SI/natural pairs listed in this module work."""
        unit = _canonical(unit)
        if unit == self.unit:
            return self
        if (self.unit, unit) in _CONVERTIBLE:
            return Quantity(self.value * getattr(constants, _CONVERTIBLE[self.unit, unit]), unit)
        if (unit, self.unit) in _CONVERTIBLE:
            return Quantity(self.value / getattr(constants, _CONVERTIBLE[unit, self.unit]), unit)
        if self.unit == KELVIN and unit == um(-1):
            return kelvin_to_natural(self, constants)
        raise UnitError(f"no conversion from {self.unit} to {unit}")

    def require(self, unit: Unit) -> Number:
        """Return the raw value, failing unless the unit matches exactly."""
        if self.unit != _canonical(unit):
            raise UnitError(f"expected {unit}, got {self.unit}")
        return self.value

    def __repr__(self):
        return f"Quantity({self.value!r}, {self.unit})"


def _fail(a: Unit, b: Unit):
    raise UnitError(f"unsupported unit combination {a} and {b}")


def _as_quantity(x, default: Unit) -> Quantity:
    return x if isinstance(x, Quantity) else Quantity(x, default)


def _check_finite(value, what):
    if not np.all(np.isfinite(value)):
        raise ValueError(f"{what} must be finite")


def convert_chi3_si_to_natural(chi, constants: ConversionConstants = DEFAULT_CONSTANTS) -> Quantity:
    """Third-order susceptibility in m^2/V^2 to um^4.

    Plain numbers are taken to be in m^2/V^2.
    """
    q = _as_quantity(chi, M2_PER_V2)
    _check_finite(q.require(M2_PER_V2), "chi3")
    return q.to(um(4), constants)


def convert_chi2_si_to_natural(chi, constants: ConversionConstants = DEFAULT_CONSTANTS) -> Quantity:
    q = _as_quantity(chi, M_PER_V)
    _check_finite(q.require(M_PER_V), "chi2")
    return q.to(um(2), constants)


def convert_field_si_to_natural(e, constants: ConversionConstants = DEFAULT_CONSTANTS) -> Quantity:
    q = _as_quantity(e, V_PER_M)
    _check_finite(q.require(V_PER_M), "field")
    return q.to(um(-2), constants)


def kelvin_to_natural(T, constants: ConversionConstants = DEFAULT_CONSTANTS) -> Quantity:
    """Temperature as the inverse length k_B T / (hbar c), in um^-1."""
    q = _as_quantity(T, KELVIN)
    value = np.asarray(q.require(KELVIN), dtype=float)
    if np.any(value < 0) or not np.all(np.isfinite(value)):
        raise ValueError("temperature must be finite and non-negative")
    out = value * (constants.k_B / constants.hbar_c * 1e-6)
    return Quantity(out if out.ndim else float(out), um(-1))


def db_to_squeeze_parameter(db) -> float:
    """Squeezing level in decibels to the squeeze amplitude q.

    Uses the variance-ratio convention ``10 log10(e^{2q}) = db``.
    """
    db = float(db)
    if not math.isfinite(db) or db < 0:
        raise ValueError("squeezing level must be a finite, non-negative number of dB")
    return db * math.log(10.0) / 20.0
