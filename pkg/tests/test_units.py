import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fluctoptics.units import (
    DEFAULT_CONSTANTS,
    KELVIN,
    M2_PER_V2,
    M_PER_V,
    V_PER_M,
    ConversionConstants,
    Quantity,
    UnitError,
    convert_chi3_si_to_natural,
    db_to_squeeze_parameter,
    kelvin_to_natural,
    um,
)

# CODATA 2018 literals, kept separate from scipy.constants used by the package
HBAR = 1.054571817e-34
C = 299792458.0
KB = 1.380649e-23
EPS0 = 8.8541878128e-12

finite = st.floats(min_value=-1e30, max_value=1e30, allow_nan=False, allow_infinity=False).filter(
    lambda x: x == 0 or abs(x) > 1e-200
)


def test_volt_constant_matches_eps0_over_hbar_c():
    exact = math.sqrt(EPS0 / (HBAR * C))
    assert DEFAULT_CONSTANTS.volt_in_inverse_meters**2 == pytest.approx(exact**2, rel=5e-3)
    assert DEFAULT_CONSTANTS.exact_volt_in_inverse_meters() == pytest.approx(exact, rel=1e-9)
    # the rounded value quoted alongside the unit convention
    assert DEFAULT_CONSTANTS.volt_in_inverse_meters == pytest.approx(1.67e7, rel=3e-3)


def test_chi3_factor():
    assert DEFAULT_CONSTANTS.chi3_factor == pytest.approx(3.5707e9, rel=1e-4)


@pytest.mark.parametrize(
    "chi, expected",
    [
        (0.0, 0.0),
        (7.28e-18, 7.28e-18 * 1e24 / 1.6735e7**2),  # 2.600e-8
        (1.0629e-18, 1.0629e-18 * 1e24 / 1.6735e7**2),  # 3.80e-9
    ],
)
def test_convert_chi3(chi, expected):
    out = convert_chi3_si_to_natural(chi)
    assert out.unit == um(4)
    assert out.value == pytest.approx(expected, rel=1e-12, abs=0)


def test_convert_chi3_reference_values():
    assert convert_chi3_si_to_natural(7.28e-18).value == pytest.approx(2.600e-8, rel=5e-4)
    assert convert_chi3_si_to_natural(1.0629e-18).value == pytest.approx(3.80e-9, rel=2e-3)


def test_convert_chi3_rejects_non_finite_and_wrong_units():
    with pytest.raises(ValueError):
        convert_chi3_si_to_natural(float("nan"))
    with pytest.raises(UnitError):
        convert_chi3_si_to_natural(Quantity(1.0, V_PER_M))


@given(finite, st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_convert_chi3_linear(x, a):
    lhs = convert_chi3_si_to_natural(a * x).value
    rhs = a * convert_chi3_si_to_natural(x).value
    assert lhs == pytest.approx(rhs, rel=4e-16, abs=1e-300)


@given(finite)
def test_round_trip_si_natural_si(x):
    for si, nat in ((M2_PER_V2, um(4)), (M_PER_V, um(2)), (V_PER_M, um(-2))):
        back = Quantity(x, si).to(nat).to(si).value
        assert back == pytest.approx(x, rel=1e-12, abs=0)


def test_kelvin_to_natural_examples():
    assert kelvin_to_natural(0.0).value == 0.0
    expected = KB * 2600 / (HBAR * C) * 1e-6
    got = kelvin_to_natural(2600.0)
    assert got.unit == um(-1)
    assert got.value == pytest.approx(expected, rel=1e-9)
    assert got.value == pytest.approx(1.1354, rel=1e-4)
    assert kelvin_to_natural(300.0).value == pytest.approx(0.13101, rel=1e-4)


def test_kelvin_to_natural_rejects_negative():
    with pytest.raises(ValueError):
        kelvin_to_natural(-1.0)


@given(st.one_of(st.just(0.0), st.floats(min_value=1e-200, max_value=1e8)))
def test_kelvin_doubling_exact(T):
    assert kelvin_to_natural(2 * T).value == 2 * kelvin_to_natural(T).value


@pytest.mark.parametrize("db, q", [(0, 0.0), (10, 1.1513), (13.029, 1.5)])
def test_db_to_squeeze(db, q):
    assert db_to_squeeze_parameter(db) == pytest.approx(q, abs=1e-4)


def test_db_rejects_negative():
    with pytest.raises(ValueError):
        db_to_squeeze_parameter(-0.1)


@given(st.floats(0, 100), st.floats(0, 100))
def test_db_monotone(a, b):
    if a < b:
        assert db_to_squeeze_parameter(a) <= db_to_squeeze_parameter(b)


class TestQuantity:
    def test_add_same_unit(self):
        assert (Quantity(1.0, um(-4)) + Quantity(2.0, um(-4))).value == 3.0

    @pytest.mark.parametrize(
        "a, b",
        [
            (Quantity(1.0, um(-4)), Quantity(1.0, um(4))),
            (Quantity(1.0, KELVIN), Quantity(1.0, um(-1))),
            (Quantity(1.0, M2_PER_V2), Quantity(1.0, um(4))),
        ],
    )
    def test_add_mismatch_rejected(self, a, b):
        with pytest.raises(UnitError):
            a + b
        with pytest.raises(UnitError):
            a < b

    def test_bare_number_only_with_dimensionless(self):
        assert (Quantity(2.0) + 1.0).value == 3.0
        with pytest.raises(UnitError):
            Quantity(1.0, um(2)) + 1.0

    def test_micron_powers_multiply(self):
        q = Quantity(2.0, um(4)) * Quantity(3.0, um(-4))
        assert q.unit.is_dimensionless and float(q) == 6.0
        assert (Quantity(1.0, um(-1)) ** 4).unit == um(-4)

    def test_incompatible_product_rejected(self):
        with pytest.raises(UnitError):
            Quantity(1.0, KELVIN) * Quantity(1.0, um(2))

    def test_float_of_dimensioned_rejected(self):
        with pytest.raises(UnitError):
            float(Quantity(1.0, um(-4)))

    def test_require(self):
        assert Quantity(5.0, um(-4)).require(um(-4)) == 5.0
        with pytest.raises(UnitError):
            Quantity(5.0, um(-4)).require(um(4))

    def test_no_conversion_between_unrelated(self):
        with pytest.raises(UnitError):
            Quantity(1.0, KELVIN).to(um(4))

    def test_kelvin_converts(self):
        assert Quantity(2600.0, KELVIN).to(um(-1)).value == pytest.approx(1.1354, rel=1e-4)

    def test_custom_constants(self):
        c = ConversionConstants(volt_in_inverse_meters=1e7)
        assert convert_chi3_si_to_natural(1e-18, c).value == pytest.approx(1e-18 * 1e24 / 1e14)
