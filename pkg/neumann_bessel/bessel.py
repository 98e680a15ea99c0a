"""
Integer-order Bessel functions of the first kind for real arguments.

Rows J_0(z) ... J_M(z) come from Miller's backward recurrence, normalised with
J_0 + 2 * sum_{k>=1} J_2k = 1. Tails of residue-class series are bounded with
|J_m(z)| <= (|z|/2)^m / m!, valid for integer m >= 0 and real z.
"""
from dataclasses import dataclass
from functools import lru_cache
import logging
import math
import numbers
from typing import Callable, Optional, Tuple

import numpy as np

from neumann_bessel.exceptions import BudgetError, DomainError, TailBoundError

logger = logging.getLogger(__name__)

MILLER_MARGIN = 40
ROW_BUCKET = 32
RESCALE_ABOVE = 1e200
TINY_Z = 1e-8
BOUND_INFLATION = 1.0 + 1e-10

@dataclass(frozen=True)
class EvalBudget:
    """Absolute tolerance for every truncation and the cap on summed terms."""
    eps: float = 1e-12
    max_terms: int = 2000

    def __post_init__(self):
        errors = []
        if not (isinstance(self.eps, numbers.Real) and math.isfinite(self.eps) and self.eps > 0):
            errors.append({"path": "eps", "message": "Must be a finite number > 0"})
        if isinstance(self.max_terms, bool) or not isinstance(self.max_terms, numbers.Integral) or self.max_terms < 1:
            errors.append({"path": "max_terms", "message": "Must be an integer >= 1"})
        if errors:
            raise DomainError("Invalid evaluation budget", errors)

def _check_order(m, path: str = "m") -> int:
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise DomainError(f"Order must be an integer, got {m!r}", [{"path": path, "message": "Expected integer"}])
    return int(m)

def _check_argument(z, path: str = "z") -> float:
    if isinstance(z, bool) or not isinstance(z, numbers.Real):
        raise DomainError(f"Argument must be real, got {z!r}", [{"path": path, "message": "Expected real number"}])
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"Argument {z} is not finite", [{"path": path, "message": "Must be finite"}])
    return z

def _ascending_row(m_top: int, az: float) -> np.ndarray:
    # Two leading terms of the ascending series; exact to double precision for |z| < 1e-8.
    row = np.empty(m_top + 1)
    half = az / 2.0
    lead = 1.0
    for m in range(m_top + 1):
        if m:
            lead *= half / m
        row[m] = lead * (1.0 - half * half / (m + 1))
    return row

def _miller_row(m_top: int, az: float) -> np.ndarray:
    start = max(m_top, math.ceil(az)) + MILLER_MARGIN
    start += start % 2
    f = np.zeros(start + 2)
    f[start] = 1.0
    two_over_z = 2.0 / az
    for m in range(start, 0, -1):
        f[m - 1] = m * two_over_z * f[m] - f[m + 1]
        if abs(f[m - 1]) > RESCALE_ABOVE:
            f[m - 1:] /= RESCALE_ABOVE
    norm = f[0] + 2.0 * math.fsum(f[2:start + 1:2])
    return f[:m_top + 1] / norm

@lru_cache(maxsize=4096)
def _cached_row(m_top: int, az: float) -> np.ndarray:
    if az == 0.0:
        row = np.zeros(m_top + 1)
        row[0] = 1.0
    elif az < TINY_Z:
        row = _ascending_row(m_top, az)
    else:
        row = _miller_row(m_top, az)
    row.flags.writeable = False
    return row

def _bucket(m_max: int) -> int:
    return ROW_BUCKET * (m_max // ROW_BUCKET + 1) - 1

def bessel_row(m_max: int, z: float) -> np.ndarray:
    """
    Returns the array [J_0(z), ..., J_{m_max}(z)].
    """
    m_max = _check_order(m_max, "m_max")
    if m_max < 0:
        raise DomainError("m_max must be >= 0", [{"path": "m_max", "message": "Must be >= 0"}])
    z = _check_argument(z)
    row = _cached_row(_bucket(m_max), abs(z))[:m_max + 1].copy()
    if z < 0:
        row[1::2] *= -1.0
    return row

def bessel_j(m: int, z: float) -> float:
    """
    J_m(z) for integer m and finite real z.
    Negative orders and arguments reuse |m|, |z| and flip the sign when m is odd.
    """
    m = _check_order(m)
    z = _check_argument(z)
    am = abs(m)
    value = float(_cached_row(_bucket(am), abs(z))[am])
    odd = am % 2 == 1
    if odd and (m < 0) != (z < 0):
        value = -value
    return value

def order_bound(m: int, z: float) -> float:
    """(|z|/2)^m / m!, the majorant of |J_m(z)| for m >= 0."""
    if m < 0:
        raise DomainError("order_bound needs m >= 0", [{"path": "m", "message": "Must be >= 0"}])
    az = abs(z)
    if az == 0.0:
        return 1.0 if m == 0 else 0.0
    return math.exp(m * math.log(az / 2.0) - math.lgamma(m + 1))

def _branch_bound(first_order: int, n: int, z: float, k_start: int, degree: int) -> float:
    # sum_{j>=0} (k_start + j)^degree * B(first_order + j*n), closed geometrically.
    if first_order < 1:
        raise TailBoundError(k_start=k_start)
    head = k_start ** degree * order_bound(first_order, z)
    if head == 0.0:
        return 0.0
    growth = ((k_start + 1) / k_start) ** degree
    log_ratio = n * math.log(abs(z) / 2.0) - sum(math.log(first_order + i) for i in range(1, n + 1))
    ratio = growth * math.exp(log_ratio)
    if ratio >= 0.5:
        raise TailBoundError(k_start=k_start)
    return head / (1.0 - ratio)

def tail_bound(n: int, p: int, z: float, k_start: int, degree: int = 0, one_sided: bool = False) -> float:
    """
    Upper bound on sum_{|k| >= k_start} |k|^degree |J_{kn+p}(z)|.

    With one_sided=True only k >= k_start is bounded. Raises TailBoundError when
    an order in the tail is zero or the geometric closure does not hold yet.
    """
    n = _check_order(n, "n")
    p = _check_order(p, "p")
    k_start = _check_order(k_start, "k_start")
    z = _check_argument(z)
    if n < 1:
        raise DomainError("n must be >= 1", [{"path": "n", "message": "Must be >= 1"}])
    if k_start < 1:
        raise DomainError("k_start must be >= 1", [{"path": "k_start", "message": "Must be >= 1"}])
    if z == 0.0:
        # Orders grow by n along each branch, so a first order >= 1 keeps J_0(0) = 1 out of the tail.
        if k_start * n + p < 1 or (not one_sided and k_start * n - p < 1):
            raise TailBoundError(k_start=k_start)
        return 0.0
    total = _branch_bound(k_start * n + p, n, z, k_start, degree)
    if not one_sided:
        total += _branch_bound(k_start * n - p, n, z, k_start, degree)
    return total * BOUND_INFLATION

def first_certified(bound: Callable[[int], float], eps: float, max_terms: int) -> Tuple[int, float]:
    """
    Linear search for the smallest k_start in [1, max_terms] with bound(k_start) <= eps.
    Returns (k_start, bound(k_start)); TailBoundError from bound means "not yet".
    """
    if not (math.isfinite(eps) and eps > 0):
        raise DomainError("eps must be > 0", [{"path": "eps", "message": "Must be a finite number > 0"}])
    achieved: Optional[float] = None
    for k_start in range(1, max_terms + 1):
        try:
            value = bound(k_start)
        except TailBoundError:
            continue
        achieved = value
        if value <= eps:
            return k_start, value
    raise BudgetError(
        f"Tail bound above eps={eps:g} after {max_terms} terms (achieved {achieved})",
        achieved=achieved if achieved is not None else math.inf,
        terms=max_terms,
    )

def truncation_index(n: int, p: int, z: float, eps: float, max_terms: int = EvalBudget.max_terms,
                     degree: int = 0, one_sided: bool = False, scale: float = 1.0) -> int:
    """
    Smallest k_start >= 1 with scale * tail_bound(n, p, z, k_start) <= eps.
    """
    try:
        k_start, _ = first_certified(
            lambda k: scale * tail_bound(n, p, z, k, degree=degree, one_sided=one_sided), eps, max_terms
        )
    except BudgetError:
        logger.debug("budget exhausted for n=%s p=%s z=%s after %s terms", n, p, z, max_terms)
        raise
    return k_start
