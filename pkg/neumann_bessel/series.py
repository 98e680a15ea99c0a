"""
Residue-class Neumann series sum_k w(k) J_{kn+p}(z) e^{iky n} and the finite
exponential sum they equal. Every series value carries the certified bound on
the discarded tail.
"""
from dataclasses import dataclass, field
import math
import numbers
from typing import Callable, Optional, Tuple, Union

import numpy as np

from neumann_bessel.bessel import EvalBudget, bessel_row, first_certified, tail_bound
from neumann_bessel.exceptions import DomainError, TailBoundError
from neumann_bessel.summation import CompensatedSum

TWO_PI = 2.0 * math.pi

@dataclass(frozen=True)
class SeriesSpec:
    n: int
    p: int
    z: float
    y: float = 0.0

    def __post_init__(self):
        errors = []
        if isinstance(self.n, bool) or not isinstance(self.n, numbers.Integral) or self.n < 1:
            errors.append({"path": "n", "message": "Must be an integer >= 1"})
        if isinstance(self.p, bool) or not isinstance(self.p, numbers.Integral):
            errors.append({"path": "p", "message": "Expected integer"})
        for name in ("z", "y"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
                errors.append({"path": name, "message": "Must be a finite real number"})
        if errors:
            raise DomainError("Invalid series spec", errors)

    def canonical(self) -> Tuple["SeriesSpec", int]:
        """
        Returns (spec with p reduced to [0, n), shift j) where p = p0 + j*n.
        lhs(p) = e^{-i j n y} * lhs(p0).
        """
        shift, p0 = divmod(self.p, self.n)
        return SeriesSpec(self.n, p0, self.z, self.y), shift

@dataclass(frozen=True)
class ComplexValue:
    """A complex number together with the certified bound on what was left out."""
    re: float
    im: float = 0.0
    tail: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError("Non-finite value", [{"path": "value", "message": f"{self.re} + {self.im}i is not finite"}])

    @classmethod
    def of(cls, value: Union[complex, float], tail: float = 0.0) -> "ComplexValue":
        value = complex(value)
        return cls(float(value.real), float(value.imag), float(tail))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(complex(self.re, self.im))

    def scaled(self, factor: Union[complex, float]) -> "ComplexValue":
        return ComplexValue.of(complex(self) * factor, self.tail * abs(factor))

    def real_part(self) -> "ComplexValue":
        return ComplexValue(self.re, 0.0, self.tail)

    def imag_part(self) -> "ComplexValue":
        return ComplexValue(self.im, 0.0, self.tail)

    def __add__(self, other: "ComplexValue") -> "ComplexValue":
        return ComplexValue.of(complex(self) + complex(other), self.tail + other.tail)

    def __sub__(self, other: "ComplexValue") -> "ComplexValue":
        return ComplexValue.of(complex(self) - complex(other), self.tail + other.tail)

    def distance(self, other: "ComplexValue") -> float:
        return abs(complex(self) - complex(other))

@dataclass(frozen=True)
class CoefficientRule:
    """
    Weight k -> w(k) with |w(k)| <= scale * max(1, |k|)^degree.
    lower=None sums over all k; an integer sums over k >= lower.
    """
    rule: Callable[[int], Union[complex, float]]
    degree: int = 0
    scale: float = 1.0
    lower: Optional[int] = None
    name: str = field(default="w", compare=False)

    def __post_init__(self):
        if self.degree < 0 or not math.isfinite(self.scale) or self.scale <= 0:
            raise DomainError("Invalid coefficient rule", [{"path": self.name, "message": "Need degree >= 0 and scale > 0"}])

    def __call__(self, k: int) -> complex:
        return complex(self.rule(k))

UNIT = CoefficientRule(lambda k: 1.0, name="unit")

def _signed(row: np.ndarray, m: int) -> float:
    # J_m from a row of non-negative orders.
    if m >= 0:
        return row[m]
    return -row[-m] if m % 2 else row[-m]

def master_rhs(spec: SeriesSpec) -> ComplexValue:
    """(1/n) sum_{l<n} exp(i z sin(y + 2 pi l/n) - i p (y + 2 pi l/n))."""
    phi = spec.y + TWO_PI * np.arange(spec.n) / spec.n
    terms = np.exp(1j * (spec.z * np.sin(phi) - spec.p * phi))
    return ComplexValue.of(CompensatedSum().extend(terms).value() / spec.n)

def master_lhs(spec: SeriesSpec, budget: EvalBudget = EvalBudget()) -> ComplexValue:
    """
    sum_{k in Z} J_{kn+p}(z) e^{ikny}, folded onto k >= 0 with J_{-m} = (-1)^m J_m.
    """
    base, shift = spec.canonical()
    n, p0, z, y = base.n, base.p, base.z, base.y
    k_stop, bound = first_certified(lambda k: tail_bound(n, p0, z, k), budget.eps, budget.max_terms)
    row = bessel_row(max((k_stop - 1) * n + p0, 0), z)
    acc = CompensatedSum(row[p0])
    for k in range(1, k_stop):
        phase = np.exp(1j * k * n * y)
        up = row[k * n + p0]
        down = row[k * n - p0]
        if (k * n - p0) % 2:
            down = -down
        acc.add(up * phase + down / phase)
    value = acc.value()
    if shift:
        value *= np.exp(-1j * shift * n * y)
    return ComplexValue.of(value, bound)

def weighted_series(spec: SeriesSpec, w: CoefficientRule, budget: EvalBudget = EvalBudget()) -> ComplexValue:
    """
    sum_k w(k) J_{kn+p}(z) e^{ikny} over k in Z (w.lower is None) or k >= w.lower.
    The tail bound carries the factor scale * |k|^degree.
    """
    n, p, z, y = spec.n, spec.p, spec.z, spec.y
    one_sided = w.lower is not None

    def bound(k_start: int) -> float:
        if one_sided and w.lower > k_start:
            raise TailBoundError(k_start=k_start)
        return w.scale * tail_bound(n, p, z, k_start, degree=w.degree, one_sided=one_sided)

    k_stop, tail = first_certified(bound, budget.eps, budget.max_terms)
    if one_sided:
        indices = list(range(w.lower, k_stop))
    else:
        indices = [0]
        for k in range(1, k_stop):
            indices.extend((k, -k))
    if not indices:
        return ComplexValue.of(0.0, tail)
    top = max(abs(k * n + p) for k in indices)
    row = bessel_row(top, z)
    acc = CompensatedSum()
    for k in indices:
        acc.add(w(k) * _signed(row, k * n + p) * np.exp(1j * k * n * y))
    return ComplexValue.of(acc.value(), tail)

def square_series(n: int, p: int, z: float, budget: EvalBudget = EvalBudget(), lower: Optional[int] = None) -> ComplexValue:
    """
    sum_k J_{kn+p}(z)^2 over k in Z, or over k >= lower.
    Tail uses |J| <= 1, so the bound on sum |J| also bounds sum J^2.
    """
    SeriesSpec(n, p, z)
    one_sided = lower is not None

    def bound(k_start: int) -> float:
        if one_sided and lower > k_start:
            raise TailBoundError(k_start=k_start)
        return tail_bound(n, p, z, k_start, one_sided=one_sided)

    k_stop, tail = first_certified(bound, budget.eps, budget.max_terms)
    indices = list(range(lower, k_stop)) if one_sided else list(range(-(k_stop - 1), k_stop))
    if not indices:
        return ComplexValue.of(0.0, tail)
    indices.sort(key=lambda k: (abs(k), k))
    row = bessel_row(max(abs(k * n + p) for k in indices), z)
    acc = CompensatedSum()
    for k in indices:
        acc.add(_signed(row, k * n + p) ** 2)
    return ComplexValue.of(acc.value(), tail)

def product_series(n: int, p: int, q: int, z: float, zp: float, t: float,
                   budget: EvalBudget = EvalBudget(), lower: Optional[int] = None) -> ComplexValue:
    """
    sum_k J_{p+kn}(z) J_{q-kn}(z') e^{i(kn+p)2t}, two-sided or over k >= lower.
    |J| <= 1 on the real line, so either factor's tail bounds the product tail.
    """
    SeriesSpec(n, p, z, t)
    SeriesSpec(n, q, zp)
    one_sided = lower is not None

    def bound(k_start: int) -> float:
        if one_sided and lower > k_start:
            raise TailBoundError(k_start=k_start)
        candidates = []
        for order_shift, arg in ((p, z), (-q, zp)):
            try:
                candidates.append(tail_bound(n, order_shift, arg, k_start, one_sided=one_sided))
            except TailBoundError:
                pass
        if not candidates:
            raise TailBoundError(k_start=k_start)
        return min(candidates)

    k_stop, tail = first_certified(bound, budget.eps, budget.max_terms)
    indices = list(range(lower, k_stop)) if one_sided else list(range(-(k_stop - 1), k_stop))
    if not indices:
        return ComplexValue.of(0.0, tail)
    indices.sort(key=lambda k: (abs(k), k))
    row_z = bessel_row(max(abs(p + k * n) for k in indices), z)
    row_zp = bessel_row(max(abs(q - k * n) for k in indices), zp)
    acc = CompensatedSum()
    for k in indices:
        phase = np.exp(2j * (k * n + p) * t)
        acc.add(_signed(row_z, p + k * n) * _signed(row_zp, q - k * n) * phase)
    return ComplexValue.of(acc.value(), tail)
