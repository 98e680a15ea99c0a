"""
Independent oracles: the periodic trapezoidal rule (Fourier integrals) and the
ascending power series of J_m. Neither shares code with the backward recurrence
in neumann_bessel.bessel.
"""
from dataclasses import dataclass
import math
import threading
from typing import Callable

import mpmath
import numpy as np
from scipy.optimize import brentq

from neumann_bessel.exceptions import DomainError, QuadratureError, SearchError
from neumann_bessel.series import ComplexValue, SeriesSpec

TWO_PI = 2.0 * math.pi
STABLE_TOL = 1e-13
MAX_SAMPLES = 2 ** 16
ORACLE_MAX_Z = 50.0
ORACLE_MAX_ORDER = 200
# smallest relative tolerance brentq accepts
ROOT_RTOL = 4.0 * np.finfo(float).eps

_contexts = threading.local()

@dataclass(frozen=True)
class PeriodicIntegrand:
    """
    f maps an array of angles in [0, 2pi) to an array of complex values;
    samples is the starting resolution of the trapezoidal rule.
    """
    f: Callable[[np.ndarray], np.ndarray]
    samples: int = 16

    def __post_init__(self):
        if self.samples < 16 or self.samples % 2:
            raise DomainError("Invalid integrand", [{"path": "samples", "message": "Must be even and >= 16"}])

    def mean(self, count: int, offset: float = 0.0) -> complex:
        theta = offset + TWO_PI * np.arange(count) / count
        values = np.broadcast_to(np.asarray(self.f(theta), dtype=complex), theta.shape)
        return complex(np.sum(values)) / count

def periodic_integral(g: PeriodicIntegrand, tol: float = STABLE_TOL, max_samples: int = MAX_SAMPLES) -> ComplexValue:
    """
    (1/2pi) * integral of g over one period, doubling the trapezoidal grid
    until two successive values differ by less than tol.
    The returned tail is the last difference.
    """
    count = g.samples
    current = g.mean(count)
    while count < max_samples:
        # the refined grid adds the midpoints of the current one
        midpoints = g.mean(count, offset=math.pi / count)
        refined = 0.5 * (current + midpoints)
        count *= 2
        change = abs(refined - current)
        if change < tol:
            return ComplexValue.of(refined, change)
        current = refined
    raise QuadratureError(f"Trapezoidal rule not stable to {tol:g} with {max_samples} samples")

def bessel_fourier_oracle(m: int, z: float) -> float:
    """J_m(z) = (1/2pi) * integral of exp(i z sin(theta) - i m theta)."""
    SeriesSpec(1, m, z)
    value = periodic_integral(PeriodicIntegrand(lambda th: np.exp(1j * (z * np.sin(th) - m * th))))
    return value.re

def working_context(dps: int) -> "mpmath.MPContext":
    """This thread's private mpmath context, set to dps decimal digits."""
    ctx = getattr(_contexts, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        _contexts.ctx = ctx
    ctx.dps = dps
    return ctx

def bessel_series_oracle(m: int, z: float) -> float:
    """
    Ascending series sum_j (-1)^j (z/2)^(2j+m) / (j! (j+m)!).

    Terms are updated multiplicatively and accumulated in a private mpmath
    context with enough guard digits to absorb the cancellation at |z| <= 50.
    """
    if isinstance(m, bool) or not isinstance(m, int) or not 0 <= m <= ORACLE_MAX_ORDER:
        raise DomainError("Oracle order out of range", [{"path": "m", "message": f"Must be an integer in [0, {ORACLE_MAX_ORDER}]"}])
    if not math.isfinite(z) or abs(z) > ORACLE_MAX_Z:
        raise DomainError("Oracle argument out of range", [{"path": "z", "message": f"Must satisfy |z| <= {ORACLE_MAX_Z}"}])
    if z == 0:
        return 1.0 if m == 0 else 0.0

    ctx = working_context(25 + math.ceil(0.4343 * abs(z)))
    half = ctx.mpf(z) / 2
    minus_sq = -half * half
    term = half ** m / ctx.factorial(m)
    total = term
    j = 0
    while True:
        j += 1
        term = term * minus_sq / (j * (j + m))
        total += term
        if j > abs(z) / 2 and abs(term) < ctx.mpf("1e-17") * abs(total):
            break
    return float(total)

def bessel_zero(m: int, index: int = 1, oracle: Callable[[int, float], float] = bessel_series_oracle,
                step: float = 0.25, limit: float = ORACLE_MAX_Z) -> float:
    """
    The index-th positive zero of J_m, bracketed by a scan on the oracle and refined with brentq.
    """
    found = 0
    left = max(step, 1e-3)
    f_left = oracle(m, left)
    while left + step <= limit:
        right = left + step
        f_right = oracle(m, right)
        if f_left == 0.0:
            found += 1
            if found == index:
                return left
        elif f_left * f_right < 0:
            found += 1
            if found == index:
                return brentq(lambda x: oracle(m, x), left, right, xtol=1e-15, rtol=ROOT_RTOL)
        left, f_left = right, f_right
    raise SearchError(f"Zero #{index} of J_{m} not found below {limit}")

def product_rhs_integral(n: int, p: int, q: int, z: float, zp: float, t: float) -> ComplexValue:
    """
    (1/n) sum_l e^{-ip 2pi l/n} (1/2pi) integral of
    exp(i z sin(y + 2t + 2pi l/n) + i z' sin(y) - i(p+q) y) dy.
    """
    SeriesSpec(n, p, z, t)
    SeriesSpec(n, q, zp)
    total = 0j
    tail = 0.0
    for ell in range(n):
        shift = 2.0 * t + TWO_PI * ell / n
        integrand = PeriodicIntegrand(
            lambda y, shift=shift: np.exp(1j * (z * np.sin(y + shift) + zp * np.sin(y) - (p + q) * y))
        )
        part = periodic_integral(integrand)
        total += complex(part) * np.exp(-1j * p * TWO_PI * ell / n)
        tail += part.tail
    return ComplexValue.of(total / n, tail / n)
