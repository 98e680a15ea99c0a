"""
The identity registry.

Every record pairs a truncated Neumann series (left-hand side, certified tail)
with a finite trigonometric or Bessel sum, a trapezoidal integral, or, for the
rational-coefficient pair, a second certified series. Parameter domains are
TypedDicts whose Annotated fields carry the range and default sweep grid.
"""
from dataclasses import dataclass, field
import math
from typing import Annotated, Any, Callable, Dict, List, Optional, Tuple, Type, TypedDict

import numpy as np

from neumann_bessel.bessel import EvalBudget, bessel_j
from neumann_bessel.polygon import PlanePoint, decagon_cartesian, f_n_series, f_n_xy, special_mode
from neumann_bessel.quadrature import product_rhs_integral, working_context
from neumann_bessel.series import (
    CoefficientRule, ComplexValue, SeriesSpec,
    master_lhs, master_rhs, product_series, square_series, weighted_series
)
from neumann_bessel.exceptions import BudgetError
from neumann_bessel.summation import CompensatedSum

ParamPoint = Dict[str, Any]
Evaluator = Callable[[ParamPoint, EvalBudget], ComplexValue]

TWO_PI = 2.0 * math.pi
SQRT3 = math.sqrt(3.0)

@dataclass(frozen=True, eq=False)
class IdentityRecord:
    """
    One registered identity. rhs is the reading certified first; variants are
    alternative readings of the same right-hand side, certified and reported
    alongside it.
    """
    id: str
    title: str
    reference: str
    domain: Type
    lhs: Evaluator
    rhs: Evaluator
    rhs_name: str = "closed"
    variants: Dict[str, Evaluator] = field(default_factory=dict)
    where: Optional[Callable[[ParamPoint], Optional[str]]] = None

    def readings(self) -> Dict[str, Evaluator]:
        return {self.rhs_name: self.rhs, **self.variants}

def i_power(m: int) -> complex:
    """i**m for integer m, without rounding."""
    return (1.0, 1j, -1.0, -1j)[m % 4]

def _sign(m: int) -> float:
    return -1.0 if m % 2 else 1.0

def _closed(value) -> ComplexValue:
    return ComplexValue.of(value)

def _half(budget: EvalBudget) -> EvalBudget:
    return EvalBudget(budget.eps / 2.0, budget.max_terms)

def _finite_sum(values) -> complex:
    return CompensatedSum().extend(np.asarray(values).ravel()).value()

def _cos_average(z: float, alpha: float, count: int, step: Optional[float] = None) -> float:
    """(1/count) sum_{l<count} cos(z cos(alpha + l*step)), step defaulting to 2pi/count."""
    step = TWO_PI / count if step is None else step
    return _finite_sum(np.cos(z * np.cos(alpha + step * np.arange(count)))).real / count

def _sin_average(z: float, alpha: float, count: int) -> float:
    return _finite_sum(np.sin(z * np.cos(alpha + TWO_PI * np.arange(count) / count))).real / count

def _one_sided(n: int, p: int, z: float, rule: Callable[[int], Any], budget: EvalBudget,
               lower: int = 1, degree: int = 0, scale: float = 1.0, name: str = "w") -> ComplexValue:
    w = CoefficientRule(rule, degree=degree, scale=scale, lower=lower, name=name)
    return weighted_series(SeriesSpec(n, p, z), w, budget)

def _j0_plus_twice(z: float, rest: ComplexValue, j0_factor: float = 1.0) -> ComplexValue:
    return rest.scaled(2.0) + _closed(j0_factor * bessel_j(0, z))

# The residue-class formula and the polygon ground states.

class MasterDomain(TypedDict):
    """sum_k J_{kn+p}(z) e^{ikny} against (1/n) sum_l exp(i z sin(y + 2pi l/n) - ip(y + 2pi l/n))."""
    n: Annotated[int, "min=1; max=12"]
    p: Annotated[int, "min=0; max=12"]
    z: Annotated[float, "min=0; max=30; grid=0,0.5,1,2,5,10,20,30"]
    y: Annotated[float, "kind=angle"]

def _p_at_most_n(pt: ParamPoint) -> Optional[str]:
    return None if pt["p"] <= pt["n"] else "p must not exceed n"

def _master_lhs(pt, budget):
    return master_lhs(SeriesSpec(pt["n"], pt["p"], pt["z"], pt["y"]), budget)

def _master_rhs(pt, budget):
    return master_rhs(SeriesSpec(pt["n"], pt["p"], pt["z"], pt["y"]))

SQUARE_SCALE = math.sqrt(TWO_PI)

class SquareDomain(TypedDict):
    """Polar point of the plane, scaled by sqrt(2pi) for the square of area pi."""
    r: Annotated[float, "min=0; max=4"]
    theta: Annotated[float, "kind=angle"]

def _square_lhs(pt, budget):
    return master_lhs(SeriesSpec(4, 0, SQUARE_SCALE * pt["r"], pt["theta"]), budget).real_part()

def square_ground(x, y):
    """Ground state of the area-pi square, vanishing on |x| + |y| = sqrt(pi/2)."""
    return 0.5 * np.cos(SQUARE_SCALE * np.asarray(x)) + 0.5 * np.cos(SQUARE_SCALE * np.asarray(y))

def _square_rhs(pt, budget):
    p = PlanePoint.polar(pt["r"], pt["theta"])
    return _closed(float(square_ground(p.x, p.y)))

TRIANGLE_SCALE = math.sqrt(4.0 * math.pi / SQRT3)
TRIANGLE_RADIUS = (2.0 / 3.0) * math.sqrt(math.pi * SQRT3)
TRIANGLE_FACTOR = 2.0 / (3.0 * SQRT3)

class TriangleDomain(TypedDict):
    """Polar point of the plane; the series runs at lambda_3 * r."""
    r: Annotated[float, "min=0; max=2"]
    theta: Annotated[float, "kind=angle"]

def triangle_weight(k: int) -> float:
    """cos(k pi/2 - pi/6) / cos(pi/6) with k pi/2 reduced exactly."""
    return math.cos((k % 4) * math.pi / 2 - math.pi / 6) / math.cos(math.pi / 6)

def _triangle_lhs(pt, budget):
    z = TRIANGLE_SCALE * pt["r"]
    w = CoefficientRule(triangle_weight, scale=1.0 / math.cos(math.pi / 6), lower=1, name="triangle")
    rest = weighted_series(SeriesSpec(3, 0, z, pt["theta"]), w, _half(budget))
    return _j0_plus_twice(z, rest.real_part())

def _triangle_waves(x, y):
    scale = 4.0 * math.pi / (3.0 * TRIANGLE_RADIUS)
    a = np.sin(scale * x + TWO_PI / 3)
    b = np.sin(scale / 2 * (x + SQRT3 * y) - TWO_PI / 3)
    c = np.sin(scale / 2 * (x - SQRT3 * y) - TWO_PI / 3)
    return a, b, c

# Coefficients of the three plane waves under each reading of the printed brackets.
TRIANGLE_READINGS: Dict[str, Tuple[float, float, float]] = {
    "balanced": (TRIANGLE_FACTOR, -TRIANGLE_FACTOR, -TRIANGLE_FACTOR),
    "literal": (TRIANGLE_FACTOR, -TRIANGLE_FACTOR, TRIANGLE_FACTOR ** 2),
    "minus-plus": (TRIANGLE_FACTOR, -TRIANGLE_FACTOR, TRIANGLE_FACTOR),
    "plus-minus": (TRIANGLE_FACTOR, TRIANGLE_FACTOR, -TRIANGLE_FACTOR),
}

def triangle_ground(x, y, reading: str = "balanced"):
    ca, cb, cc = TRIANGLE_READINGS[reading]
    a, b, c = _triangle_waves(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return ca * a + cb * b + cc * c

def _triangle_rhs(reading: str) -> Evaluator:
    def evaluate(pt, budget):
        p = PlanePoint.polar(pt["r"], pt["theta"])
        return _closed(float(triangle_ground(p.x, p.y, reading)))
    return evaluate

class FnDomain(TypedDict):
    """Polar point (r, theta) and the order n of the generalised sum."""
    n: Annotated[int, "min=2; max=8"]
    r: Annotated[float, "min=0; max=10"]
    theta: Annotated[float, "kind=angle"]

def _fn_lhs(pt, budget):
    return f_n_series(pt["n"], PlanePoint.polar(pt["r"], pt["theta"]), budget)

def _fn_polar(pt, budget):
    n, r, theta = pt["n"], pt["r"], pt["theta"]
    phase = math.pi / (2 * n)
    terms = np.cos(r * np.cos(theta + TWO_PI * np.arange(n) / n) + phase)
    return _closed(_finite_sum(terms).real / (n * math.cos(phase)))

def _fn_cartesian(pt, budget):
    p = PlanePoint.polar(pt["r"], pt["theta"])
    return _closed(float(f_n_xy(pt["n"], p.x, p.y)))

class KagomeDomain(TypedDict):
    x: Annotated[float, "min=-8; max=8"]
    y: Annotated[float, "min=-8; max=8"]

def _kagome_lhs(pt, budget):
    return f_n_series(6, PlanePoint(pt["x"], pt["y"]), budget)

def _kagome_rhs(pt, budget):
    x, y = pt["x"], pt["y"]
    return _closed(math.cos(x) / 3.0 + 2.0 / 3.0 * math.cos(x / 2.0) * math.cos(SQRT3 * y / 2.0))

# Angle extensions: y = pi/2 + alpha and the Jacobi expansions.

class AngleDomain(TypedDict):
    n: Annotated[int, "min=1; max=8"]
    z: Annotated[float, "min=0; max=20"]
    alpha: Annotated[float, "kind=angle"]

class JacobiDomain(TypedDict):
    z: Annotated[float, "min=0; max=20"]
    alpha: Annotated[float, "kind=angle"]

def _ext_alpha_lhs(pt, budget):
    n, z, alpha = pt["n"], pt["z"], pt["alpha"]
    rest = _one_sided(n, 0, z, lambda k: i_power(k * n) * math.cos(k * n * alpha), _half(budget), name="ext")
    return _j0_plus_twice(z, rest)

def _ext_alpha_rhs(pt, budget):
    n, z, alpha = pt["n"], pt["z"], pt["alpha"]
    terms = np.exp(1j * z * np.cos(alpha + TWO_PI * np.arange(n) / n))
    return _closed(_finite_sum(terms) / n)

def _jacobi_even_lhs(pt, budget):
    z, alpha = pt["z"], pt["alpha"]
    rest = _one_sided(2, 0, z, lambda k: _sign(k) * math.cos(2 * k * alpha), _half(budget))
    return _j0_plus_twice(z, rest)

def _jacobi_odd_lhs(pt, budget):
    z, alpha = pt["z"], pt["alpha"]
    return _one_sided(2, 1, z, lambda k: _sign(k) * math.cos((2 * k + 1) * alpha), budget, lower=0)

def _jacobi_even_shift_lhs(pt, budget):
    z, alpha = pt["z"], pt["alpha"]
    rest = _one_sided(2, 0, z, lambda k: math.cos(2 * k * alpha), _half(budget))
    return _j0_plus_twice(z, rest)

def _jacobi_odd_shift_lhs(pt, budget):
    z, alpha = pt["z"], pt["alpha"]
    return _one_sided(2, 1, z, lambda k: math.sin((2 * k + 1) * alpha), budget, lower=0)

class FoldDomain(TypedDict):
    """Order n of the 2n-fold sum."""
    n: Annotated[int, "min=1; max=8"]
    z: Annotated[float, "min=0; max=20"]
    alpha: Annotated[float, "kind=angle"]

def _fold_lhs(pt, budget):
    n, z, alpha = pt["n"], pt["z"], pt["alpha"]
    rest = _one_sided(2 * n, 0, z, lambda k: _sign(k * n) * math.cos(2 * k * n * alpha), _half(budget))
    return _j0_plus_twice(z, rest)

def _fold_rhs(pt, budget):
    return _closed(_cos_average(pt["z"], pt["alpha"], pt["n"], step=math.pi / pt["n"]))

def _fold_rhs_full(pt, budget):
    n = pt["n"]
    return _closed(_cos_average(pt["z"], pt["alpha"], 2 * n, step=math.pi / n))

# Derivatives of the 4-fold sum.

class ArgumentDomain(TypedDict):
    z: Annotated[float, "min=0; max=20; grid=0,1,2.5,4,6,8,10,15,20"]

def _deriv_2k_lhs(pt, budget):
    # 2J_2 - 6J_6 + 10J_10 - ...
    return _one_sided(4, 2, pt["z"], lambda k: _sign(k) * 2 * (2 * k + 1), budget, lower=0, degree=1, scale=6.0)

def _deriv_2k_rhs(pt, budget):
    z = pt["z"]
    return _closed(z * math.sqrt(2.0) / 4.0 * math.sin(z * math.sqrt(2.0) / 2.0))

def _cos4k_lhs(pt, budget):
    z, alpha = pt["z"], pt["alpha"]
    rest = _one_sided(4, 0, z, lambda k: math.cos(4 * k * alpha), _half(budget))
    return _j0_plus_twice(z, rest)

def cos4k_rhs(z: float, alpha: float) -> float:
    return 0.5 * (math.cos(z * math.sin(alpha)) + math.cos(z * math.cos(alpha)))

def _cos4k_rhs(pt, budget):
    return _closed(cos4k_rhs(pt["z"], pt["alpha"]))

def _deriv_4k_lhs(pt, budget):
    alpha = pt["alpha"]
    return _one_sided(4, 0, pt["z"], lambda k: k * math.sin(4 * k * alpha), budget, degree=1)

def deriv_4k_rhs(z: float, alpha: float) -> float:
    return z / 16.0 * (math.sin(z * math.sin(alpha)) * math.cos(alpha) - math.sin(z * math.cos(alpha)) * math.sin(alpha))

def _deriv_4k_rhs(pt, budget):
    return _closed(deriv_4k_rhs(pt["z"], pt["alpha"]))

def _k2_4k_lhs(pt, budget):
    return _one_sided(4, 0, pt["z"], lambda k: k * k, budget, degree=2)

def _k2_4k_rhs(pt, budget):
    z = pt["z"]
    return _closed(z / 64.0 * (z - math.sin(z)))

# Odd folds N = 2n + 1 split by parity in z.

class OddFoldDomain(TypedDict):
    """n selects the odd fold N = 2n + 1."""
    n: Annotated[int, "min=1; max=4"]
    z: Annotated[float, "min=0; max=20"]
    alpha: Annotated[float, "kind=angle"]

def _odd_even_lhs(pt, budget):
    big, z, alpha = 2 * pt["n"] + 1, pt["z"], pt["alpha"]
    rest = _one_sided(2 * big, 0, z, lambda k: _sign(k) * math.cos(2 * big * k * alpha), _half(budget))
    return _j0_plus_twice(z, rest)

def _odd_even_rhs(pt, budget):
    return _closed(_cos_average(pt["z"], pt["alpha"], 2 * pt["n"] + 1))

def _odd_odd_lhs(pt, budget):
    n, z, alpha = pt["n"], pt["z"], pt["alpha"]
    big = 2 * n + 1
    return _one_sided(2 * big, big, z, lambda k: 2.0 * _sign(n + k) * math.cos(big * (2 * k + 1) * alpha),
                      budget, lower=0, scale=2.0)

def _odd_odd_rhs(pt, budget):
    return _closed(_sin_average(pt["z"], pt["alpha"], 2 * pt["n"] + 1))

def _hexagon_lhs(pt, budget):
    alpha = pt["alpha"]
    return _one_sided(6, 3, pt["z"], lambda k: _sign(k) * math.cos((6 * k + 3) * alpha), budget, lower=0)

def _hexagon_rhs(pt, budget):
    return _closed(-0.5 * _sin_average(pt["z"], pt["alpha"], 3))

def _hexagon_plane(pt, budget):
    return _closed(special_mode("hexagon-triangle", PlanePoint.polar(pt["z"], pt["alpha"])))

def _decagon_lhs(pt, budget):
    alpha = pt["alpha"]
    return _one_sided(10, 5, pt["z"], lambda k: _sign(k) * math.cos((10 * k + 5) * alpha), budget, lower=0)

def _decagon_rhs(pt, budget):
    return _closed(0.5 * _sin_average(pt["z"], pt["alpha"], 5))

def _decagon_plane(pt, budget):
    p = PlanePoint.polar(pt["z"], pt["alpha"])
    return _closed(decagon_cartesian(p.x, p.y) / 10.0)

class DecagonPlaneDomain(TypedDict):
    x: Annotated[float, "min=-8; max=8"]
    y: Annotated[float, "min=-8; max=8"]

def _decagon_xy_lhs(pt, budget):
    p = PlanePoint(pt["x"], pt["y"])
    return _decagon_lhs({"z": p.r, "alpha": p.theta}, EvalBudget(budget.eps / 10.0, budget.max_terms)).scaled(10.0)

def _decagon_xy_rhs(pt, budget):
    return _closed(decagon_cartesian(pt["x"], pt["y"]))

class PhaseDomain(TypedDict):
    """Real part of e^{i beta} times the p = 0 residue-class formula."""
    n: Annotated[int, "min=1; max=8"]
    z: Annotated[float, "min=0; max=20"]
    y: Annotated[float, "kind=angle"]
    beta: Annotated[float, "kind=angle; grid=0,pi/6,pi/2,2"]

def _beta_lhs(pt, budget):
    n, z, y, beta = pt["n"], pt["z"], pt["y"], pt["beta"]

    def weight(k: int) -> float:
        # cos(beta - kn pi/2), kn taken modulo 4
        return math.cos(beta - ((k * n) % 4) * math.pi / 2) * math.cos(k * n * (y + math.pi / 2))

    rest = _one_sided(n, 0, z, weight, _half(budget), name="beta")
    return _j0_plus_twice(z, rest, j0_factor=math.cos(beta))

def _beta_rhs(pt, budget):
    n, z, y, beta = pt["n"], pt["z"], pt["y"], pt["beta"]
    terms = np.cos(z * np.sin(y + TWO_PI * np.arange(n) / n) + beta)
    return _closed(_finite_sum(terms).real / n)

# Sums of squares.

class ParsevalDomain(TypedDict):
    n: Annotated[int, "min=1; max=8"]
    p: Annotated[int, "min=0; max=8"]
    x: Annotated[float, "min=0; max=20"]

class ParsevalFoldDomain(TypedDict):
    n: Annotated[int, "min=1; max=8"]
    x: Annotated[float, "min=0; max=20"]

def parseval_rhs(n: int, p: int, x: float) -> float:
    """1/n + (1/n) sum_{k=1}^{n-1} cos(2pi kp/n) J_0(2x sin(pi k/n))."""
    acc = CompensatedSum(1.0)
    for k in range(1, n):
        # kp reduced modulo n
        acc.add(math.cos(TWO_PI * ((k * p) % n) / n) * bessel_j(0, 2.0 * x * math.sin(math.pi * k / n)))
    return acc.real / n

def _parseval_lhs(pt, budget):
    return square_series(pt["n"], pt["p"], pt["x"], budget)

def _parseval_rhs(pt, budget):
    return _closed(parseval_rhs(pt["n"], pt["p"], pt["x"]))

def _parseval_even_lhs(pt, budget):
    return square_series(2 * pt["n"], 0, pt["x"], budget)

def _parseval_even_rhs(pt, budget):
    n, x = pt["n"], pt["x"]
    acc = CompensatedSum(0.5 / n).add(bessel_j(0, 2.0 * x) / (2 * n))
    for k in range(1, n):
        acc.add(bessel_j(0, 2.0 * x * math.cos(math.pi * k / (2 * n))) / n)
    return _closed(acc.real)

def _parseval_odd_lhs(pt, budget):
    n = pt["n"]
    return square_series(2 * n, n, pt["x"], budget, lower=0)

def _parseval_odd_rhs(pt, budget):
    n, x = pt["n"], pt["x"]
    acc = CompensatedSum(0.25 / n).add(_sign(n) * bessel_j(0, 2.0 * x) / (4 * n))
    for ell in range(1, n):
        acc.add(_sign(ell) * bessel_j(0, 2.0 * x * math.sin(math.pi * ell / (2 * n))) / (2 * n))
    return _closed(acc.real)

# Products J_{p+kn}(z) J_{q-kn}(z').

class ProductDomain(TypedDict):
    n: Annotated[int, "min=1; max=4"]
    p: Annotated[int, "min=-4; max=4; grid=0,1,2"]
    q: Annotated[int, "min=-4; max=4; grid=0,1,3"]
    z: Annotated[float, "min=0; max=20; grid=0,1.5,4,9,20"]
    zp: Annotated[float, "min=0; max=20; grid=0,2,7,20"]
    t: Annotated[float, "kind=angle; grid=0,0.3,pi/4,1.2"]

def _product_lhs(pt, budget):
    return product_series(pt["n"], pt["p"], pt["q"], pt["z"], pt["zp"], pt["t"], budget)

def _product_rhs(pt, budget):
    return product_rhs_integral(pt["n"], pt["p"], pt["q"], pt["z"], pt["zp"], pt["t"])

class SameArgumentDomain(TypedDict):
    n: Annotated[int, "min=1; max=4"]
    p: Annotated[int, "min=-4; max=4; grid=0,1,2"]
    q: Annotated[int, "min=-4; max=4; grid=0,1,3"]
    z: Annotated[float, "min=0; max=20; grid=0,2.5,7,12,20"]
    t: Annotated[float, "kind=angle"]

def _same_z_product(n: int, p: int, q: int, z: float, t: float, budget: EvalBudget) -> ComplexValue:
    # sum_k J_{p+kn}(z) J_{q-kn}(z) e^{2iknt}
    return product_series(n, p, q, z, z, t, budget).scaled(np.exp(-2j * p * t))

def samez_rhs(n: int, p: int, q: int, z: float, t: float) -> complex:
    acc = CompensatedSum()
    for ell in range(n):
        shift = t + math.pi * ell / n
        acc.add(np.exp(-1j * (p - q) * shift) * bessel_j(p + q, 2.0 * z * math.cos(shift)))
    return acc.value() / n

def _samez_lhs(pt, budget):
    return _same_z_product(pt["n"], pt["p"], pt["q"], pt["z"], pt["t"], budget)

def _samez_rhs(pt, budget):
    return _closed(samez_rhs(pt["n"], pt["p"], pt["q"], pt["z"], pt["t"]))

class GrafDomain(TypedDict):
    p: Annotated[int, "min=-3; max=5"]
    z: Annotated[float, "min=0; max=20"]
    t: Annotated[float, "kind=angle"]

def _graf_lhs(pt, budget):
    # sum_k J_k(z) J_{p-k}(z) e^{2ikt}
    return product_series(1, 0, pt["p"], pt["z"], pt["z"], pt["t"], budget)

def _graf_rhs(pt, budget):
    p, z, t = pt["p"], pt["z"], pt["t"]
    return _closed(np.exp(1j * p * t) * bessel_j(p, 2.0 * z * math.cos(t)))

class PairDomain(TypedDict):
    p: Annotated[int, "min=-4; max=4; grid=0,1,2"]
    q: Annotated[int, "min=-4; max=4; grid=0,1,3"]
    z: Annotated[float, "min=0; max=20; grid=0,2.5,7,12,20"]
    t: Annotated[float, "kind=angle"]

def _n2_lhs(pt, budget):
    return _same_z_product(2, pt["p"], pt["q"], pt["z"], pt["t"], budget)

def _n2_rhs(pt, budget):
    p, q, z, t = pt["p"], pt["q"], pt["z"], pt["t"]
    value = bessel_j(p + q, 2.0 * z * math.cos(t)) + i_power(p - q) * bessel_j(p + q, 2.0 * z * math.sin(t))
    return _closed(0.5 * np.exp(-1j * (p - q) * t) * value)

class PairArgumentDomain(TypedDict):
    p: Annotated[int, "min=-4; max=4; grid=0,1,2"]
    q: Annotated[int, "min=-4; max=4; grid=0,1,3"]
    z: Annotated[float, "min=0; max=20"]

def _quarter_lhs(pt, budget):
    # sum_k (-1)^k J_{p+2k} J_{q-2k}: the phase e^{i(2k+p) pi/2} with i^p removed
    p = pt["p"]
    return product_series(2, p, pt["q"], pt["z"], pt["z"], math.pi / 4, budget).scaled(i_power(-p))

def _quarter_rhs(pt, budget):
    p, q, z = pt["p"], pt["q"], pt["z"]
    return _closed(bessel_j(p + q, z * math.sqrt(2.0)) * math.cos((p - q) * math.pi / 4))

def _half_lhs(pt, budget):
    return product_series(2, pt["p"], pt["q"], pt["z"], pt["z"], 0.0, budget)

def half_rhs(p: int, q: int, z: float) -> float:
    # even-k half of the addition theorem; the alternating half collapses to (-1)^q J_{p+q}(0)
    value = bessel_j(p + q, 2.0 * z)
    if p + q == 0:
        value += _sign(q)
    return 0.5 * value

def _half_rhs(pt, budget):
    return _closed(half_rhs(pt["p"], pt["q"], pt["z"]))

class TwoArgumentFoldDomain(TypedDict):
    n: Annotated[int, "min=1; max=4"]
    z: Annotated[float, "min=0; max=20; grid=0,1.5,4,9,20"]
    zp: Annotated[float, "min=0; max=20; grid=0,2,7,20"]

def _zzp_lhs(pt, budget):
    return product_series(pt["n"], 0, 0, pt["z"], pt["zp"], 0.0, budget)

def _zzp_rhs(pt, budget):
    return product_rhs_integral(pt["n"], 0, 0, pt["z"], pt["zp"], 0.0)

def zzp_finite(n: int, z: float, zp: float) -> float:
    acc = CompensatedSum()
    for ell in range(n):
        radius = math.sqrt(max(z * z + zp * zp + 2.0 * z * zp * math.cos(TWO_PI * ell / n), 0.0))
        acc.add(bessel_j(0, radius))
    return acc.real / n

def _zzp_finite(pt, budget):
    return _closed(zzp_finite(pt["n"], pt["z"], pt["zp"]))

class TwoArgumentDomain(TypedDict):
    x: Annotated[float, "min=0; max=20"]
    y: Annotated[float, "min=0; max=20"]

def _new4k_lhs(pt, budget):
    return product_series(4, 0, 0, pt["x"], pt["y"], 0.0, budget, lower=1)

def _new4k_rhs(pt, budget):
    x, y = pt["x"], pt["y"]
    value = (bessel_j(0, x + y) + bessel_j(0, x - y) - 4.0 * bessel_j(0, x) * bessel_j(0, y)
             + 2.0 * bessel_j(0, math.hypot(x, y)))
    return _closed(value / 8.0)

# Rational weights from the Laplace transform in z.

class RationalDomain(TypedDict):
    a: Annotated[float, "min=0.1; max=10; grid=0.5,1,2,5"]
    z: Annotated[float, "min=0; max=20"]

def product_denominator_series(z: float, a: float, odd: bool, budget: EvalBudget) -> ComplexValue:
    """
    sum_k t_k with t_k = -t_{k-1} z^2 / d_k, where d_k = a^2 + (2k)^2 (even) or
    a^2 + (2k+1)^2 (odd), t_0 = 1/a (even) or z/(a^2+1) (odd).

    The terms grow like e^z before they decay, so the sum runs in a private mpmath
    context with guard digits for that cancellation. Stops once z^2/d_{k+1} <= 1/2
    and the geometric tail is below eps.
    """
    ctx = working_context(20 + math.ceil(0.87 * abs(z)))
    a2 = ctx.mpf(a) ** 2
    z2 = ctx.mpf(z) ** 2
    offset = 1 if odd else 0
    term = ctx.mpf(z) / (a2 + 1) if odd else 1 / ctx.mpf(a)
    total = term
    for k in range(1, budget.max_terms + 1):
        q = z2 / (a2 + (2 * k + offset) ** 2)
        if q <= 0.5:
            tail = float(abs(term) * q / (1 - q))
            if tail <= budget.eps:
                return ComplexValue.of(float(total), tail)
        term = -term * q
        total += term
    raise BudgetError(f"Product-denominator series not certified within {budget.max_terms} terms", terms=budget.max_terms)

def _rational_even_lhs(pt, budget):
    a, z = pt["a"], pt["z"]
    rule = lambda k: 1.0 / a if k == 0 else 2.0 * a / (a * a + 4.0 * k * k)
    return _one_sided(2, 0, z, rule, budget, lower=0, scale=2.0 / a, name="rational")

def _rational_even_rhs(pt, budget):
    a, z = pt["a"], pt["z"]
    return product_denominator_series(z, a, False, budget)

def _rational_odd_lhs(pt, budget):
    a, z = pt["a"], pt["z"]
    rule = lambda k: 2.0 * (2 * k + 1) / (a * a + (2 * k + 1) ** 2)
    return _one_sided(2, 1, z, rule, budget, lower=0, scale=2.0, name="rational")

def _rational_odd_rhs(pt, budget):
    a, z = pt["a"], pt["z"]
    return product_denominator_series(z, a, True, budget)

def build_catalog() -> List[IdentityRecord]:
    """Every registered identity, in listing order."""
    return [
        IdentityRecord("master", "Residue-class Neumann sum", "source summation formula, \"The source equation of various sums\"",
                       MasterDomain, _master_lhs, _master_rhs, rhs_name="exponential", where=_p_at_most_n),
        IdentityRecord("sq-ground", "Square ground state", "square of area pi, \"For the square of area\"",
                       SquareDomain, _square_lhs, _square_rhs),
        IdentityRecord("tri-ground", "Equilateral triangle ground state", "triangle ground state, \"requires some work to establish\"",
                       TriangleDomain, _triangle_lhs, _triangle_rhs("balanced"), rhs_name="balanced",
                       variants={name: _triangle_rhs(name) for name in TRIANGLE_READINGS if name != "balanced"}),
        IdentityRecord("fn-general", "Polygon-adapted sum f_n", "generalised sum, \"generalizes the integrable cases\"",
                       FnDomain, _fn_lhs, _fn_polar, rhs_name="polar", variants={"cartesian": _fn_cartesian}),
        IdentityRecord("f6-kagome", "Hexagonal sum f_6", "n = 6 case, \"For $n=6$\"",
                       KagomeDomain, _kagome_lhs, _kagome_rhs),
        IdentityRecord("ext-alpha", "Angle extension at p = 0", "y = pi/2 + alpha, \"extension with angle\"",
                       AngleDomain, _ext_alpha_lhs, _ext_alpha_rhs),
        IdentityRecord("jacobi-even", "Jacobi expansion, even part", "\"gives the Jacobi expansions\"",
                       JacobiDomain, _jacobi_even_lhs, lambda pt, b: _closed(math.cos(pt["z"] * math.cos(pt["alpha"])))),
        IdentityRecord("jacobi-odd", "Jacobi expansion, odd part", "\"gives the Jacobi expansions\"",
                       JacobiDomain, _jacobi_odd_lhs, lambda pt, b: _closed(0.5 * math.sin(pt["z"] * math.cos(pt["alpha"])))),
        IdentityRecord("jacobi-even-shift", "Jacobi expansion at alpha + pi/2, even part", "\"replaced by $\\alpha +\\pi/2$\"",
                       JacobiDomain, _jacobi_even_shift_lhs, lambda pt, b: _closed(math.cos(pt["z"] * math.sin(pt["alpha"])))),
        IdentityRecord("jacobi-odd-shift", "Jacobi expansion at alpha + pi/2, odd part", "\"replaced by $\\alpha +\\pi/2$\"",
                       JacobiDomain, _jacobi_odd_shift_lhs, lambda pt, b: _closed(0.5 * math.sin(pt["z"] * math.sin(pt["alpha"])))),
        IdentityRecord("fold-2n", "Angle extension with n replaced by 2n", "\"For $n$ replaced by $2n$\"",
                       FoldDomain, _fold_lhs, _fold_rhs, rhs_name="halved", variants={"full": _fold_rhs_full}),
        IdentityRecord("deriv-2k", "Alpha-derivative of the 2-fold sum at pi/4", "alpha-derivative of the 2-fold sum at alpha = pi/4",
                       ArgumentDomain, _deriv_2k_lhs, _deriv_2k_rhs),
        IdentityRecord("cos4k", "4-fold cosine sum", "2n-fold sum at n = 2",
                       JacobiDomain, _cos4k_lhs, _cos4k_rhs),
        IdentityRecord("deriv-4k", "Alpha-derivative of the 4-fold cosine sum", "alpha-derivative of the 4-fold cosine sum",
                       JacobiDomain, _deriv_4k_lhs, _deriv_4k_rhs),
        IdentityRecord("k2-4k", "Second moment of the 4-fold sum", "\"expansion in small $\\alpha $ gives\"",
                       ArgumentDomain, _k2_4k_lhs, _k2_4k_rhs),
        IdentityRecord("odd-fold-even", "Odd fold 2n + 1, even part in z", "\"even-parity and odd-parity parts\"",
                       OddFoldDomain, _odd_even_lhs, _odd_even_rhs),
        IdentityRecord("odd-fold-odd", "Odd fold 2n + 1, odd part in z", "\"even-parity and odd-parity parts\"",
                       OddFoldDomain, _odd_odd_lhs, _odd_odd_rhs),
        IdentityRecord("hexagon-triangle", "Triangle ground state as a hexagon mode", "\"Examples of the second equation\"",
                       JacobiDomain, _hexagon_lhs, _hexagon_rhs, variants={"plane": _hexagon_plane}),
        IdentityRecord("decagon", "Decagon sine mode", "\"Both sums are eigenfunctions of the Laplacian\"",
                       JacobiDomain, _decagon_lhs, _decagon_rhs, variants={"cartesian": _decagon_plane}),
        IdentityRecord("decagon-xy", "Decagon mode in Cartesian form", "Cartesian decagon mode, \"with $z=r$\"",
                       DecagonPlaneDomain, _decagon_xy_lhs, _decagon_xy_rhs),
        IdentityRecord("beta-phase", "Phase-shifted residue sum at p = 0", "\"multiply by $\\exp(i\\beta)$\"",
                       PhaseDomain, _beta_lhs, _beta_rhs),
        IdentityRecord("parseval-general", "Sum of squares over a residue class", "\"unchanged if $k$ is replaced\"",
                       ParsevalDomain, _parseval_lhs, _parseval_rhs, where=_p_at_most_n),
        IdentityRecord("parseval-even", "Sum of squares over multiples of 2n", "squares over multiples of 2n",
                       ParsevalFoldDomain, _parseval_even_lhs, _parseval_even_rhs),
        IdentityRecord("parseval-odd", "Sum of squares over odd multiples of n", "\"with simple steps one obtains\"",
                       ParsevalFoldDomain, _parseval_odd_lhs, _parseval_odd_rhs),
        IdentityRecord("product-master", "Product residue sum, integral form", "\"shifted to $y+2t$\"",
                       ProductDomain, _product_lhs, _product_rhs, rhs_name="integral"),
        IdentityRecord("product-samez", "Product residue sum at z' = z", "\"With $z=z'$ we obtain\"",
                       SameArgumentDomain, _samez_lhs, _samez_rhs),
        IdentityRecord("graf-n1", "Graf addition at n = 1", "\"with a shift of the index\"",
                       GrafDomain, _graf_lhs, _graf_rhs),
        IdentityRecord("product-n2", "Product sum at n = 2", "\"with a shift of the index\"",
                       PairDomain, _n2_lhs, _n2_rhs),
        IdentityRecord("product-t-quarter", "Product sum at n = 2, t = pi/4", "\"The second one, for\"",
                       PairArgumentDomain, _quarter_lhs, _quarter_rhs),
        IdentityRecord("product-t-half", "Product sum at n = 2, t = pi/2", "\"The second one, for\"",
                       PairArgumentDomain, _half_lhs, _half_rhs),
        IdentityRecord("product-zzp", "Two-argument fold at p = q = 0", "\"with $p=q=0$ and\"",
                       TwoArgumentFoldDomain, _zzp_lhs, _zzp_rhs, rhs_name="integral", variants={"finite": _zzp_finite}),
        IdentityRecord("product-4k-new", "Products of J_4k at two arguments", "\"A new example is\"",
                       TwoArgumentDomain, _new4k_lhs, _new4k_rhs),
        IdentityRecord("rational-even", "Rational weights, even orders", "\"even and odd terms are\"",
                       RationalDomain, _rational_even_lhs, _rational_even_rhs, rhs_name="series"),
        IdentityRecord("rational-odd", "Rational weights, odd orders", "\"even and odd terms are\"",
                       RationalDomain, _rational_odd_lhs, _rational_odd_rhs, rhs_name="series"),
    ]
