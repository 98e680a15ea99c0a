from typing import Any, List, Dict, Optional

class NeumannBesselError(Exception):
    """Base exception for all neumann_bessel errors."""
    pass

class DefinitionError(NeumannBesselError):
    """Raised when a parameter-domain declaration is invalid."""
    pass

class DomainError(NeumannBesselError, ValueError):
    """Raised when an argument or parameter point lies outside its domain."""
    def __init__(self, message: str, errors: List[Dict[str, Any]] = None):
        super().__init__(message)
        self.errors = errors if errors is not None else []

    def __str__(self):
        if not self.errors:
            return super().__str__()

        details = "\n".join([f"  - {e['path']}: {e['message']}" for e in self.errors])
        return f"{super().__str__()}\n{details}"

class ConfigurationError(DomainError):
    """Raised when CLI flags, a config file or a sweep config are invalid."""
    pass

class BudgetError(NeumannBesselError):
    """Raised when a series cannot be certified within max_terms."""
    def __init__(self, message: str, achieved: Optional[float] = None, terms: Optional[int] = None):
        super().__init__(message)
        self.achieved = achieved
        self.terms = terms

class TailBoundError(NeumannBesselError):
    """Raised when the geometric closure of a tail does not converge at k_start."""
    def __init__(self, message: str = "tail bound diverges, increase k_start", k_start: Optional[int] = None):
        super().__init__(message)
        self.k_start = k_start

class QuadratureError(NeumannBesselError):
    """Raised when the trapezoidal rule does not stabilise within its sample cap."""
    pass

class SearchError(NeumannBesselError):
    """Raised when a saddle or root search finds nothing."""
    pass

class UnknownIdentityError(NeumannBesselError, KeyError):
    def __init__(self, identity_id: str):
        super().__init__(f"Unknown identity '{identity_id}'")
        self.identity_id = identity_id

    def __str__(self):
        return self.args[0]
