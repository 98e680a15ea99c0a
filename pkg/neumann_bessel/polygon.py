"""
Polygon-adapted Laplacian eigenfunctions (eigenvalue -1):

    f_n(x, y) = (1/n) sum_l cos(x cos(2 pi l/n) - y sin(2 pi l/n) + pi/(2n)) / cos(pi/(2n))

their Neumann series, the hexagon/triangle and decagon sine modes, saddle
search for separatrix levels, and sampled fields for contour export.
"""
from dataclasses import dataclass
import csv
import io
import logging
import math
from typing import Callable, Dict, Iterator, List, Optional, TextIO, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from neumann_bessel.bessel import EvalBudget, bessel_j
from neumann_bessel.exceptions import DomainError, SearchError
from neumann_bessel.series import CoefficientRule, ComplexValue, SeriesSpec, weighted_series
from neumann_bessel.quadrature import ROOT_RTOL

logger = logging.getLogger(__name__)

MODES = ("fn", "hexagon-triangle", "decagon")
CLASSES = ("min", "max", "saddle", "degenerate")

SEED_STEP = 0.25
DEFAULT_RADIUS = 8.0
GRAD_TOL = 1e-10
DEDUP_TOL = 1e-6
DEGENERATE_EIG = 1e-8
NEWTON_ITERATIONS = 60
MAX_STEP = 0.5
RING_TOL = 1e-6

ArrayLike = Union[float, np.ndarray]

@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("Non-finite point", [{"path": "pt", "message": f"({self.x}, {self.y}) is not finite"}])

    @classmethod
    def polar(cls, r: float, theta: float) -> "PlanePoint":
        return cls(r * math.cos(theta), r * math.sin(theta))

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        angle = math.atan2(self.y, self.x)
        return math.pi if angle == -math.pi else angle

    def rotated(self, angle: float) -> "PlanePoint":
        c, s = math.cos(angle), math.sin(angle)
        return PlanePoint(c * self.x - s * self.y, s * self.x + c * self.y)

@dataclass(frozen=True)
class PolygonConstants:
    """Eigenvalue scale and circumradius of the regular n-gon of area pi."""
    n: int
    lambda_n: float
    R_n: float

    @property
    def apothem(self) -> float:
        return self.R_n * math.cos(math.pi / self.n)

@dataclass(frozen=True)
class CriticalPoint:
    location: PlanePoint
    grad_norm: float
    hessian_class: str
    value: float

    def to_dict(self) -> Dict[str, Union[float, str]]:
        return {
            "x": self.location.x,
            "y": self.location.y,
            "value": self.value,
            "class": self.hessian_class,
            "grad_norm": self.grad_norm,
        }

@dataclass(frozen=True)
class FieldSpec:
    x_min: float = -8.0
    x_max: float = 8.0
    y_min: float = -8.0
    y_max: float = 8.0
    nx: int = 201
    ny: int = 201

    def __post_init__(self):
        errors = []
        for name in ("x_min", "x_max", "y_min", "y_max"):
            if not math.isfinite(getattr(self, name)):
                errors.append({"path": name, "message": "Must be finite"})
        if not errors and self.x_min >= self.x_max:
            errors.append({"path": "x_max", "message": "Must be > x_min"})
        if not errors and self.y_min >= self.y_max:
            errors.append({"path": "y_max", "message": "Must be > y_min"})
        for name in ("nx", "ny"):
            if getattr(self, name) < 2:
                errors.append({"path": name, "message": "Must be >= 2"})
        if errors:
            raise DomainError("Invalid field spec", errors)

@dataclass(frozen=True)
class ScalarField:
    bounds: Tuple[float, float, float, float]
    resolution: Tuple[int, int]
    values: Tuple[float, ...]

    def __post_init__(self):
        nx, ny = self.resolution
        if nx < 2 or ny < 2 or len(self.values) != nx * ny:
            raise DomainError("Invalid scalar field", [{"path": "values", "message": "Length must be nx * ny"}])

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        x_min, x_max, y_min, y_max = self.bounds
        nx, ny = self.resolution
        return np.linspace(x_min, x_max, nx), np.linspace(y_min, y_max, ny)

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        """(x, y, value) triples, x fastest."""
        xs, ys = self.axes()
        nx = self.resolution[0]
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                yield float(x), float(y), self.values[j * nx + i]

    def write_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["x", "y", "value"])
        for x, y, v in self.rows():
            writer.writerow([format(x, ".17g"), format(y, ".17g"), format(v, ".17g")])

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.write_csv(buffer)
        return buffer.getvalue()

def _check_n(n: int, minimum: int = 2) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise DomainError(f"Invalid polygon order {n!r}", [{"path": "n", "message": f"Must be an integer >= {minimum}"}])
    return int(n)

def _angles(n: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(n) / n

# f_n and its derivatives, vectorised over x and y.

def _fn_phases(n: int, x: ArrayLike, y: ArrayLike):
    phi = _angles(n)
    x = np.asarray(x, dtype=float)[..., None]
    y = np.asarray(y, dtype=float)[..., None]
    return x * np.cos(phi) - y * np.sin(phi) + math.pi / (2 * n), phi

def f_n_xy(n: int, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    n = _check_n(n)
    arg, _ = _fn_phases(n, x, y)
    return np.cos(arg).sum(axis=-1) / (n * math.cos(math.pi / (2 * n)))

def grad_f_xy(n: int, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    n = _check_n(n)
    arg, phi = _fn_phases(n, x, y)
    norm = n * math.cos(math.pi / (2 * n))
    s = np.sin(arg)
    return -(s * np.cos(phi)).sum(axis=-1) / norm, (s * np.sin(phi)).sum(axis=-1) / norm

def hessian_f_xy(n: int, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = _check_n(n)
    arg, phi = _fn_phases(n, x, y)
    norm = n * math.cos(math.pi / (2 * n))
    c = np.cos(arg)
    cp, sp = np.cos(phi), np.sin(phi)
    fxx = -(c * cp * cp).sum(axis=-1) / norm
    fxy = (c * cp * sp).sum(axis=-1) / norm
    fyy = -(c * sp * sp).sum(axis=-1) / norm
    return fxx, fxy, fyy

def f_n(n: int, pt: PlanePoint) -> float:
    return float(f_n_xy(n, pt.x, pt.y))

def grad_f(n: int, pt: PlanePoint) -> Tuple[float, float]:
    gx, gy = grad_f_xy(n, pt.x, pt.y)
    return float(gx), float(gy)

def fn_weight(n: int, k: int) -> float:
    """Coefficient of 2 J_{nk}(r) cos(nk theta) in the Neumann form of f_n."""
    # 3nk pi/2 reduced exactly modulo 2 pi
    quarter = (3 * n * k) % 4
    return math.cos(quarter * math.pi / 2 - math.pi / (2 * n)) / math.cos(math.pi / (2 * n))

def fn_rule(n: int) -> CoefficientRule:
    # |weight| <= 1 / cos(pi/(2n))
    return CoefficientRule(lambda k: fn_weight(n, k), degree=0, scale=1.0 / math.cos(math.pi / (2 * n)), lower=1, name=f"h_k,{n}")

def f_n_series(n: int, pt: PlanePoint, budget: EvalBudget = EvalBudget()) -> ComplexValue:
    """
    J_0(r) + 2 sum_{k>=1} fn_weight(n, k) J_{nk}(r) cos(nk theta), certified.
    Returns a ComplexValue whose tail bounds the discarded terms.
    """
    n = _check_n(n)
    r, theta = pt.r, pt.theta
    half_budget = EvalBudget(budget.eps / 2.0, budget.max_terms)
    rest = weighted_series(SeriesSpec(n, 0, r, theta), fn_rule(n), half_budget)
    return rest.real_part().scaled(2.0) + ComplexValue.of(bessel_j(0, r))

# Sine modes built from three and five plane waves.

def _sine_sum(count: int, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    phi = _angles(count)
    x = np.asarray(x, dtype=float)[..., None]
    y = np.asarray(y, dtype=float)[..., None]
    return np.sin(x * np.cos(phi) - y * np.sin(phi)).sum(axis=-1)

def mode_xy(mode: str, x: ArrayLike, y: ArrayLike, n: Optional[int] = None) -> np.ndarray:
    if mode == "fn":
        return f_n_xy(n, x, y)
    if mode == "hexagon-triangle":
        return -_sine_sum(3, x, y) / 6.0
    if mode == "decagon":
        return _sine_sum(5, x, y)
    raise DomainError(f"Unknown mode '{mode}'", [{"path": "mode", "message": f"Expected one of: {', '.join(MODES)}"}])

def special_mode(mode: str, pt: PlanePoint) -> float:
    """
    "hexagon-triangle": -(1/6) sum_{l<3} sin(x cos(2 pi l/3) - y sin(2 pi l/3)).
    "decagon": sin x - 2 sin(x cos(pi/5)) cos(y sin(pi/5)) + 2 sin(x cos(2pi/5)) cos(y sin(2pi/5)).
    """
    if mode not in MODES[1:]:
        raise DomainError(f"Unknown special mode '{mode}'", [{"path": "mode", "message": "Expected 'hexagon-triangle' or 'decagon'"}])
    return float(mode_xy(mode, pt.x, pt.y))

def decagon_cartesian(x: float, y: float) -> float:
    """The decagon mode written out with pi/5 and 2pi/5 only."""
    c1, s1 = math.cos(math.pi / 5), math.sin(math.pi / 5)
    c2, s2 = math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5)
    return math.sin(x) - 2 * math.sin(x * c1) * math.cos(y * s1) + 2 * math.sin(x * c2) * math.cos(y * s2)

def laplacian_residual(n: Optional[int], pt: PlanePoint, h: float, mode: str = "fn") -> float:
    """|Delta_h f + f| with the 5-point stencil of spacing h."""
    if not 1e-4 <= h <= 1e-2:
        raise DomainError("Stencil spacing out of range", [{"path": "h", "message": "Must be in [1e-4, 1e-2]"}])
    x, y = pt.x, pt.y
    xs = np.array([x, x + h, x - h, x, x])
    ys = np.array([y, y, y, y + h, y - h])
    v = mode_xy(mode, xs, ys, n)
    lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h)
    return float(abs(lap + v[0]))

# Saddle search.

def _mode_derivatives(mode: str, n: Optional[int]):
    if mode == "fn":
        return (lambda x, y: f_n_xy(n, x, y)), (lambda x, y: grad_f_xy(n, x, y)), (lambda x, y: hessian_f_xy(n, x, y))
    count, factor = (3, -1.0 / 6.0) if mode == "hexagon-triangle" else (5, 1.0)
    phi = _angles(count)
    cp, sp = np.cos(phi), np.sin(phi)

    def arg(x, y):
        return np.asarray(x, dtype=float)[..., None] * cp - np.asarray(y, dtype=float)[..., None] * sp

    def grad(x, y):
        c = np.cos(arg(x, y))
        return factor * (c * cp).sum(axis=-1), -factor * (c * sp).sum(axis=-1)

    def hess(x, y):
        s = np.sin(arg(x, y))
        return -factor * (s * cp * cp).sum(axis=-1), factor * (s * cp * sp).sum(axis=-1), -factor * (s * sp * sp).sum(axis=-1)

    return (lambda x, y: mode_xy(mode, x, y)), grad, hess

def _classify(fxx: float, fxy: float, fyy: float) -> str:
    eig = np.linalg.eigvalsh(np.array([[fxx, fxy], [fxy, fyy]]))
    if np.any(np.abs(eig) < DEGENERATE_EIG):
        return "degenerate"
    if eig[0] > 0:
        return "min"
    if eig[1] < 0:
        return "max"
    return "saddle"

def critical_points(n: Optional[int], search_radius: float = DEFAULT_RADIUS, mode: str = "fn",
                    seed_step: float = SEED_STEP) -> List[CriticalPoint]:
    """
    All critical points within search_radius, found by batched Newton iteration
    from a square seed grid, deduplicated and sorted by (r, theta).
    """
    if mode == "fn":
        n = _check_n(n)
    value, grad, hess = _mode_derivatives(mode, n)
    if not (math.isfinite(search_radius) and search_radius > 0):
        raise DomainError("Invalid search radius", [{"path": "search_radius", "message": "Must be > 0"}])

    axis = np.arange(-search_radius, search_radius + seed_step / 2, seed_step)
    sx, sy = np.meshgrid(axis, axis)
    inside = np.hypot(sx, sy) <= search_radius
    pts = np.stack([sx[inside], sy[inside]], axis=-1)

    for _ in range(NEWTON_ITERATIONS):
        gx, gy = grad(pts[:, 0], pts[:, 1])
        fxx, fxy, fyy = hess(pts[:, 0], pts[:, 1])
        H = np.stack([np.stack([fxx, fxy], -1), np.stack([fxy, fyy], -1)], -2)
        g = np.stack([gx, gy], -1)
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(H, rcond=1e-12), g)
        length = np.linalg.norm(step, axis=-1, keepdims=True)
        step = np.where(length > MAX_STEP, step * (MAX_STEP / np.maximum(length, 1e-300)), step)
        pts = pts + step
        if np.all(np.hypot(gx, gy) < GRAD_TOL * 1e-2):
            break

    gx, gy = grad(pts[:, 0], pts[:, 1])
    gnorm = np.hypot(gx, gy)
    accepted = (gnorm < GRAD_TOL) & (np.hypot(pts[:, 0], pts[:, 1]) <= search_radius)
    skipped = int(np.count_nonzero(~accepted))
    if skipped:
        logger.debug("%d of %d Newton seeds skipped (no convergence or left the disc)", skipped, len(pts))

    found = pts[accepted]
    r = np.hypot(found[:, 0], found[:, 1])
    theta = np.arctan2(found[:, 1], found[:, 0])
    order = np.lexsort((np.round(theta, 9), np.round(r, 9)))
    kept: List[np.ndarray] = []
    for idx in order:
        candidate = found[idx]
        if kept and np.min(np.hypot(*(np.asarray(kept) - candidate).T)) < DEDUP_TOL:
            continue
        kept.append(candidate)

    result = []
    for x, y in kept:
        gx, gy = grad(x, y)
        fxx, fxy, fyy = hess(x, y)
        result.append(CriticalPoint(
            location=PlanePoint(float(x), float(y)),
            grad_norm=float(math.hypot(float(gx), float(gy))),
            hessian_class=_classify(float(fxx), float(fxy), float(fyy)),
            value=float(value(x, y)),
        ))
    return result

def find_saddles(n: Optional[int], search_radius: float = DEFAULT_RADIUS, mode: str = "fn") -> List[CriticalPoint]:
    """
    Saddles (and, for flat fields such as f_2, degenerate points) within search_radius.
    """
    return [cp for cp in critical_points(n, search_radius, mode) if cp.hessian_class in ("saddle", "degenerate")]

def saddle_rings(n: int, search_radius: float = DEFAULT_RADIUS) -> List[Tuple[float, float, int]]:
    """
    Saddles grouped by distance from the origin: (r, value, count) per ring, innermost first.
    """
    rings: List[List[CriticalPoint]] = []
    for cp in find_saddles(n, search_radius):
        if cp.hessian_class != "saddle":
            continue
        if rings and abs(cp.location.r - rings[-1][0].location.r) < RING_TOL:
            rings[-1].append(cp)
        else:
            rings.append([cp])
    return [(ring[0].location.r, ring[0].value, len(ring)) for ring in rings]

def separatrix_value(n: int, search_radius: float = DEFAULT_RADIUS) -> float:
    """C_n: the value of f_n at the saddle orbit nearest the origin."""
    n = _check_n(n)
    rings = saddle_rings(n, search_radius)
    if not rings:
        raise SearchError(f"No saddle of f_{n} within radius {search_radius}")
    return rings[0][1]

# Polygon geometry.

def circumradius(n: int) -> float:
    """Circumradius of the regular n-gon of area pi."""
    n = _check_n(n, 3)
    return math.sqrt(2.0 * math.pi / (n * math.sin(2.0 * math.pi / n)))

def first_zero_along(func: Callable[[float], float], direction: float, start: float = 0.0,
                     limit: float = 20.0, step: float = 0.05) -> float:
    c, s = math.cos(direction), math.sin(direction)
    left = start + step
    f_left = func(left * c, left * s)
    while left < limit:
        right = left + step
        f_right = func(right * c, right * s)
        if f_left == 0.0:
            return left
        if f_left * f_right < 0:
            return brentq(lambda r: func(r * c, r * s), left, right, xtol=1e-15, rtol=ROOT_RTOL)
        left, f_left = right, f_right
    raise SearchError(f"No zero along direction {direction} below {limit}")

def polygon_constants(n: int) -> PolygonConstants:
    """
    R_n for area pi; lambda_n scales the first zero of f_n in the edge-midpoint
    direction pi/n onto the apothem.
    """
    R = circumradius(n)
    rho = first_zero_along(lambda x, y: float(f_n_xy(n, x, y)), math.pi / n)
    return PolygonConstants(n, rho / (R * math.cos(math.pi / n)), R)

ORIENTATIONS = ("vertex", "edge")

def polygon_boundary(n: int, count: int = 100, orientation: str = "vertex",
                     radius: Optional[float] = None) -> np.ndarray:
    """
    count points spaced evenly along the perimeter of the regular n-gon.
    "vertex" puts a vertex on the positive x-axis, "edge" an edge midpoint.
    """
    n = _check_n(n, 3)
    if orientation not in ORIENTATIONS:
        raise DomainError(f"Unknown orientation '{orientation}'", [{"path": "orientation", "message": "Expected 'vertex' or 'edge'"}])
    R = circumradius(n) if radius is None else radius
    offset = 0.0 if orientation == "vertex" else math.pi / n
    corners = R * np.stack([np.cos(_angles(n) + offset), np.sin(_angles(n) + offset)], -1)
    s = np.arange(count) * n / count
    edge = np.floor(s).astype(int) % n
    frac = (s - np.floor(s))[:, None]
    return corners[edge] * (1.0 - frac) + corners[(edge + 1) % n] * frac

def boundary_max(func: Callable[[np.ndarray, np.ndarray], np.ndarray], n: int, count: int = 100,
                 orientation: str = "vertex") -> float:
    pts = polygon_boundary(n, count, orientation)
    return float(np.max(np.abs(func(pts[:, 0], pts[:, 1]))))

def sample_grid(mode: str, n: Optional[int], spec: FieldSpec) -> ScalarField:
    """Samples a mode on a regular grid, row-major with x varying fastest."""
    if mode not in MODES:
        raise DomainError(f"Unknown mode '{mode}'", [{"path": "mode", "message": f"Expected one of: {', '.join(MODES)}"}])
    xs = np.linspace(spec.x_min, spec.x_max, spec.nx)
    ys = np.linspace(spec.y_min, spec.y_max, spec.ny)
    gx, gy = np.meshgrid(xs, ys)
    values = mode_xy(mode, gx, gy, n)
    return ScalarField(
        bounds=(spec.x_min, spec.x_max, spec.y_min, spec.y_max),
        resolution=(spec.nx, spec.ny),
        values=tuple(float(v) for v in values.ravel()),
    )

def kagome_residual(x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """f_6 + 1/3 - (2/3) cos(x/2) [cos(x/2) + cos(sqrt(3) y/2)]."""
    half = np.cos(np.asarray(x, dtype=float) / 2.0)
    return f_n_xy(6, x, y) + 1.0 / 3.0 - (2.0 / 3.0) * half * (half + np.cos(math.sqrt(3.0) * np.asarray(y, dtype=float) / 2.0))
