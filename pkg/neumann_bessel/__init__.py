from neumann_bessel.bessel import EvalBudget, bessel_j, bessel_row, tail_bound, truncation_index
from neumann_bessel.core import Catalog, default_catalog
from neumann_bessel.exceptions import (
    BudgetError, ConfigurationError, DefinitionError, DomainError, NeumannBesselError,
    QuadratureError, SearchError, TailBoundError, UnknownIdentityError
)
from neumann_bessel.harness import ResidualReport, SweepConfig, sweep, verify_all
from neumann_bessel.series import ComplexValue, SeriesSpec, master_lhs, master_rhs

__all__ = [
    "Catalog", "default_catalog", "EvalBudget", "ComplexValue", "SeriesSpec",
    "bessel_j", "bessel_row", "tail_bound", "truncation_index", "master_lhs", "master_rhs",
    "SweepConfig", "ResidualReport", "sweep", "verify_all",
    "NeumannBesselError", "DefinitionError", "DomainError", "ConfigurationError", "BudgetError",
    "TailBoundError", "QuadratureError", "SearchError", "UnknownIdentityError",
]
