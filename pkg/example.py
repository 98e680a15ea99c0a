import math
from typing import TypedDict, Annotated

from neumann_bessel import Catalog, EvalBudget, SweepConfig, default_catalog, sweep
from neumann_bessel.identities import IdentityRecord
from neumann_bessel.polygon import FieldSpec, PlanePoint, f_n, polygon_constants, sample_grid, separatrix_value
from neumann_bessel.series import ComplexValue, SeriesSpec, master_lhs

catalog = default_catalog()

# --- 1. Both sides of a registered identity ---

lhs, rhs = catalog.eval_sides("master", {"n": 4, "p": 1, "z": 12.0, "y": math.pi / 5})
print(f"master   lhs={lhs.re:+.16f}{lhs.im:+.16f}i  tail<={lhs.tail:.1e}  |diff|={lhs.distance(rhs):.1e}")

# Dynamic syntax: '-' in an id becomes '_'
lhs, rhs = catalog.jacobi_even({"z": 4.2, "alpha": math.pi / 2})
print(f"jacobi   |diff|={lhs.distance(rhs):.1e}")

# --- 2. A sweep over a custom grid ---

report = sweep(SweepConfig(ids=("parseval-even", "cos4k"), grids={"z": (0.0, 5.0, 15.0)}, budget=EvalBudget(eps=1e-13)))
print(report.summary())

# --- 3. Registering an identity of your own ---

class ShiftDomain(TypedDict):
    z: Annotated[float, "min=0; max=20; grid=0,1,7.5,20"]

def _generating_lhs(pt, budget):
    # sum_k J_k(z), the n = 1 generating function at y = 0
    return master_lhs(SeriesSpec(1, 0, pt["z"]), budget)

def _generating_rhs(pt, budget):
    return ComplexValue(1.0, 0.0)

mine = Catalog([IdentityRecord("generating-one", "sum of all J_k", "generating function at y = 0",
                               ShiftDomain, _generating_lhs, _generating_rhs)])
print(mine.residual("generating-one", {"z": 7.5}))

# --- 4. Polygon eigenfunctions ---

print(f"f_6 at origin: {f_n(6, PlanePoint(0.0, 0.0))}")
print(f"C_6 = {separatrix_value(6):.12f}")
print(polygon_constants(3))

field = sample_grid("fn", 5, FieldSpec(-4.0, 4.0, -4.0, 4.0, nx=5, ny=5))
print(field.to_csv())
