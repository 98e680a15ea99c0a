import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, integers
from scipy.special import jv

from neumann_bessel.bessel import (
    EvalBudget, bessel_j, bessel_row, order_bound, tail_bound, truncation_index
)
from neumann_bessel.exceptions import BudgetError, DomainError, TailBoundError

def test_zero_argument():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert list(bessel_row(4, 0.0)) == [1.0, 0.0, 0.0, 0.0, 0.0]

@pytest.mark.parametrize("z", [1e-10, 0.3, 1.0, 2.5, 7.0, 12.0, 20.0, 30.0])
def test_matches_scipy(z):
    for m in range(0, 45):
        assert bessel_j(m, z) == pytest.approx(jv(m, z), abs=1e-12)

@given(integers(min_value=-60, max_value=60), floats(min_value=-30, max_value=30))
@settings(max_examples=200)
def test_negative_order_parity(m, z):
    sign = -1.0 if m % 2 else 1.0
    assert bessel_j(-m, z) == sign * bessel_j(m, z)
    assert bessel_j(m, -z) == sign * bessel_j(m, z)

@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 20.0])
def test_recurrence_residual(z):
    for m in range(-50, 51):
        residual = bessel_j(m - 1, z) + bessel_j(m + 1, z) - (2 * m / z) * bessel_j(m, z)
        assert abs(residual) <= 1e-11 * max(1.0, abs(bessel_j(m, z)))

def test_row_recurrence_and_normalisation():
    row = bessel_row(4, 3.0)
    for m in range(1, 4):
        assert row[m - 1] + row[m + 1] == pytest.approx(2 * m / 3.0 * row[m], abs=1e-12)
    row = bessel_row(60, 10.0)
    assert row[0] ** 2 + 2 * math.fsum(row[1:] ** 2) == pytest.approx(1.0, abs=1e-12)

def test_row_agrees_with_single_values():
    row = bessel_row(20, 6.5)
    assert row.shape == (21,)
    for m, value in enumerate(row):
        assert value == bessel_j(m, 6.5)

def test_row_negative_argument_flips_odd_orders():
    pos, neg = bessel_row(9, 4.0), bessel_row(9, -4.0)
    np.testing.assert_array_equal(neg[0::2], pos[0::2])
    np.testing.assert_array_equal(neg[1::2], -pos[1::2])

def test_row_is_a_copy():
    row = bessel_row(5, 1.0)
    row[0] = 42.0
    assert bessel_j(0, 1.0) != 42.0

def test_rejects_bad_arguments():
    with pytest.raises(DomainError):
        bessel_j(1.5, 1.0)
    with pytest.raises(DomainError):
        bessel_j(True, 1.0)
    with pytest.raises(DomainError):
        bessel_j(1, math.inf)
    with pytest.raises(DomainError):
        bessel_row(-1, 1.0)

def test_order_bound():
    assert order_bound(0, 0.0) == 1.0
    assert order_bound(2, 0.0) == 0.0
    assert order_bound(2, 4.0) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        order_bound(-1, 1.0)

def test_tail_bound_majorises_tail():
    z, k_start = 2.0, 5
    actual = 2.0 * sum(abs(bessel_j(m, z)) for m in range(k_start, 80))
    assert actual <= tail_bound(1, 0, z, k_start)

def test_tail_bound_weighted_and_one_sided():
    n, p, z, k_start = 4, 1, 10.0, 6
    actual = sum(k * abs(bessel_j(k * n + p, z)) for k in range(k_start, 60))
    assert actual <= tail_bound(n, p, z, k_start, degree=1, one_sided=True)
    assert tail_bound(n, p, z, k_start, one_sided=True) <= tail_bound(n, p, z, k_start)

def test_tail_bound_at_zero_argument():
    assert tail_bound(1, 0, 0.0, 1) == 0.0
    with pytest.raises(TailBoundError):
        tail_bound(1, -1, 0.0, 1)

def test_tail_bound_reference_values():
    direct = 2.0 * sum(abs(bessel_j(4 * k, 1.0)) for k in range(3, 51))
    bound = tail_bound(4, 0, 1.0, 3)
    assert direct <= bound <= 1e-9
    wide = tail_bound(6, 3, 20.0, 2)
    assert math.isfinite(wide)
    assert wide >= sum(abs(bessel_j(6 * k + 3, 20.0)) for k in range(-40, 41) if abs(k) >= 2)

def test_truncation_index_reference_values():
    assert truncation_index(4, 0, 0.0, 1e-12) == 1
    k = truncation_index(2, 1, 30.0, 1e-10)
    assert 2 * k + 1 > 30
    assert tail_bound(2, 1, 30.0, k) <= 1e-10
    assert tail_bound(2, 1, 30.0, k + 1) <= tail_bound(2, 1, 30.0, k)

def test_tail_bound_zero_argument_with_large_offset():
    # J_{k + 2}(0) at k = -2 is J_0(0) = 1, which belongs to the tail from k_start = 1
    with pytest.raises(TailBoundError):
        tail_bound(1, 2, 0.0, 1)
    with pytest.raises(TailBoundError):
        tail_bound(2, -5, 0.0, 2)
    assert tail_bound(1, 2, 0.0, 3) == 0.0
    assert tail_bound(1, 2, 0.0, 1, one_sided=True) == 0.0
    assert truncation_index(1, 2, 0.0, 1e-12) == 3

def test_tail_bound_not_yet_geometric():
    with pytest.raises(TailBoundError):
        tail_bound(1, 0, 30.0, 1)

def test_truncation_index_certifies():
    k = truncation_index(4, 0, 10.0, 1e-12)
    assert tail_bound(4, 0, 10.0, k) <= 1e-12
    assert truncation_index(4, 0, 10.0, 1e-6) <= k

def test_budget_exhausted():
    with pytest.raises(BudgetError) as exc:
        truncation_index(1, 0, 30.0, 1e-12, max_terms=3)
    assert exc.value.terms == 3
    assert exc.value.achieved == math.inf

def test_eval_budget_validation():
    assert EvalBudget().eps == 1e-12
    with pytest.raises(DomainError):
        EvalBudget(eps=0.0)
    with pytest.raises(DomainError):
        EvalBudget(max_terms=0)
    with pytest.raises(DomainError) as exc:
        EvalBudget(eps=math.nan, max_terms=-1)
    assert len(exc.value.errors) == 2
