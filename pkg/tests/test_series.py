import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, integers

from neumann_bessel.bessel import bessel_j
from neumann_bessel.exceptions import DomainError
from neumann_bessel.series import (
    UNIT, CoefficientRule, ComplexValue, SeriesSpec,
    master_lhs, master_rhs, product_series, square_series, weighted_series
)

@pytest.mark.parametrize("n,p,z,y", [
    (1, 0, 3.0, 0.0),
    (3, 1, 5.0, 0.7),
    (4, 2, 12.0, -1.3),
    (6, 5, 20.0, 2.0),
    (8, 0, 30.0, math.pi / 3),
])
def test_master_formula(n, p, z, y):
    spec = SeriesSpec(n, p, z, y)
    lhs = master_lhs(spec)
    assert lhs.tail <= 1e-12
    assert lhs.distance(master_rhs(spec)) <= 1e-10

@given(integers(min_value=1, max_value=8), integers(min_value=-20, max_value=20),
       floats(min_value=0, max_value=20), floats(min_value=-6, max_value=6))
@settings(max_examples=60, deadline=None)
def test_master_formula_any_residue(n, p, z, y):
    spec = SeriesSpec(n, p, z, y)
    assert master_lhs(spec).distance(master_rhs(spec)) <= 1e-10

def test_canonical_shift():
    base, shift = SeriesSpec(3, 7, 2.0, 0.4).canonical()
    assert base == SeriesSpec(3, 1, 2.0, 0.4)
    assert shift == 2
    base, shift = SeriesSpec(3, -1, 2.0).canonical()
    assert (base.p, shift) == (2, -1)

def test_rhs_periodic_in_y():
    for n, p in ((3, 1), (5, 2), (7, 0)):
        a = master_rhs(SeriesSpec(n, p, 4.0, 0.3))
        b = master_rhs(SeriesSpec(n, p, 4.0, 0.3 + 2 * math.pi / n))
        assert a.distance(b) <= 1e-13

def test_n1_is_the_generating_function():
    # sum_k J_k(z) e^{iky} = exp(i z sin y)
    value = master_lhs(SeriesSpec(1, 0, 7.0, 0.9))
    assert complex(value) == pytest.approx(np.exp(7j * math.sin(0.9)), abs=1e-12)

def test_spec_validation():
    with pytest.raises(DomainError):
        SeriesSpec(0, 0, 1.0)
    with pytest.raises(DomainError):
        SeriesSpec(2, 1.5, 1.0)
    with pytest.raises(DomainError) as exc:
        SeriesSpec(2, 0, math.nan, math.inf)
    assert [e["path"] for e in exc.value.errors] == ["z", "y"]

def test_complex_value_arithmetic():
    a = ComplexValue(1.0, 2.0, 1e-13)
    b = ComplexValue.of(0.5 - 1j, 2e-13)
    assert complex(a + b) == 1.5 + 1j
    assert (a + b).tail == pytest.approx(3e-13)
    assert complex(a - b) == 0.5 + 3j
    assert a.scaled(-2.0).tail == pytest.approx(2e-13)
    assert a.real_part() == ComplexValue(1.0, 0.0, 1e-13)
    assert a.imag_part() == ComplexValue(2.0, 0.0, 1e-13)
    assert abs(ComplexValue(3.0, 4.0)) == 5.0
    with pytest.raises(DomainError):
        ComplexValue(math.nan)

def test_unit_weight_matches_master():
    spec = SeriesSpec(4, 1, 3.0, 0.2)
    assert weighted_series(spec, UNIT).distance(master_lhs(spec)) <= 1e-11

def test_one_sided_weight():
    # J_0 + 2 sum_{k>=1} J_2k = 1
    rest = weighted_series(SeriesSpec(2, 0, 9.0), CoefficientRule(lambda k: 2.0, scale=2.0, lower=1))
    assert rest.re + bessel_j(0, 9.0) == pytest.approx(1.0, abs=1e-12)

def test_coefficient_rule_validation():
    with pytest.raises(DomainError):
        CoefficientRule(lambda k: 1.0, degree=-1)
    with pytest.raises(DomainError):
        CoefficientRule(lambda k: 1.0, scale=0.0)

@pytest.mark.parametrize("x", [0.0, 1.0, 7.0, 19.5])
def test_squares_sum_to_one(x):
    assert square_series(1, 0, x).re == pytest.approx(1.0, abs=1e-12)

def test_one_sided_squares():
    # J_0^2 + 2 sum_{k>=1} J_k^2 = 1
    tail = square_series(1, 1, 4.0, lower=0)
    assert bessel_j(0, 4.0) ** 2 + 2.0 * tail.re == pytest.approx(1.0, abs=1e-12)

def test_product_series_addition_theorem():
    # sum_k J_k(z) J_{-k}(z') = J_0(z + z')
    value = product_series(1, 0, 0, 2.0, 3.5, 0.0)
    assert value.re == pytest.approx(bessel_j(0, 5.5), abs=1e-12)
    assert value.im == pytest.approx(0.0, abs=1e-12)

def test_zero_argument_keeps_the_order_zero_term():
    # only J_0(0) = 1 survives at z = 0
    assert weighted_series(SeriesSpec(1, 3, 0.0), UNIT).re == 1.0
    assert weighted_series(SeriesSpec(2, -4, 0.0, 0.3), UNIT).distance(ComplexValue.of(np.exp(1.2j))) <= 1e-15
    assert square_series(1, 5, 0.0).re == 1.0

@pytest.mark.parametrize("p,q,z,zp", [
    (2, 1, 0.0, 7.0),
    (1, 2, 7.0, 0.0),
    (-2, 5, 0.0, 7.0),
])
def test_product_series_at_zero_argument(p, q, z, zp):
    # one factor is J_m(0), so the sum collapses to J_{p+q} of the other argument
    value = product_series(1, p, q, z, zp, 0.0)
    assert value.re == pytest.approx(bessel_j(p + q, z + zp), abs=1e-12)
    assert value.im == pytest.approx(0.0, abs=1e-12)
