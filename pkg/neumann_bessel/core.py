from functools import lru_cache
import itertools
import math
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from neumann_bessel.bessel import EvalBudget
from neumann_bessel.compiler import DomainCompiler, ParamSpec
from neumann_bessel.exceptions import DefinitionError, DomainError, UnknownIdentityError
from neumann_bessel.identities import IdentityRecord, ParamPoint, build_catalog
from neumann_bessel.schema import RegistryDocumentGenerator, to_json_string
from neumann_bessel.series import ComplexValue
from neumann_bessel.validators import ObjectValidator

class Catalog:
    """
    Registry of identities, addressable by id.
    Domains are compiled on registration; after freeze() the registry is read-only.
    """
    def __init__(self, records: Optional[Iterable[IdentityRecord]] = None):
        self.compiler = DomainCompiler()
        self._registry: Dict[str, IdentityRecord] = {}
        self._validators: Dict[str, ObjectValidator] = {}
        self._attr_cache: Dict[str, Callable[..., Tuple[ComplexValue, ComplexValue]]] = {}
        self._frozen = False
        for record in records or ():
            self.register(record)

    def register(self, record: IdentityRecord) -> None:
        """
        Registers an identity. Its domain is compiled immediately, so a bad
        declaration fails here rather than during a sweep.
        """
        if self._frozen:
            raise DefinitionError(f"Catalog is frozen, cannot register '{record.id}'")
        if record.id in self._registry:
            raise DefinitionError(f"Identity '{record.id}' is already registered")
        self._validators[record.id] = self.compiler.compile(record.domain)
        self.compiler.params(record.domain)
        self._registry[record.id] = record

    def freeze(self) -> "Catalog":
        self._frozen = True
        return self

    def __contains__(self, identity_id: str) -> bool:
        return identity_id in self._registry

    def __len__(self) -> int:
        return len(self._registry)

    def __iter__(self) -> Iterator[IdentityRecord]:
        return iter(self._registry.values())

    def get(self, identity_id: str) -> IdentityRecord:
        try:
            return self._registry[identity_id]
        except KeyError:
            raise UnknownIdentityError(identity_id) from None

    def ids(self) -> List[str]:
        return list(self._registry)

    def list_identities(self) -> List[Tuple[str, str, str]]:
        """(id, title, reference) in registration order."""
        return [(r.id, r.title, r.reference) for r in self._registry.values()]

    def params(self, identity_id: str) -> List[ParamSpec]:
        return self.compiler.params(self.get(identity_id).domain)

    def validate_point(self, identity_id: str, pt: Mapping[str, Any]) -> ParamPoint:
        """
        Checks pt against the identity's domain and returns it with ints and floats normalised.
        """
        record = self.get(identity_id)
        point = self._validators[identity_id].validate(dict(pt))
        if record.where is not None:
            message = record.where(point)
            if message:
                raise DomainError(f"Point outside the domain of '{identity_id}'", [{"path": identity_id, "message": message}])
        return point

    def eval_sides(self, identity_id: str, pt: Mapping[str, Any], budget: EvalBudget = EvalBudget(),
                   reading: Optional[str] = None) -> Tuple[ComplexValue, ComplexValue]:
        """
        Both sides of an identity at pt, each certified to budget.eps.
        reading selects an alternative right-hand side by name.
        """
        record = self.get(identity_id)
        point = self.validate_point(identity_id, pt)
        readings = record.readings()
        name = record.rhs_name if reading is None else reading
        if name not in readings:
            raise DomainError(f"Unknown reading '{name}' of '{identity_id}'",
                              [{"path": "reading", "message": f"Expected one of: {', '.join(readings)}"}])
        return record.lhs(point, budget), readings[name](point, budget)

    def residual(self, identity_id: str, pt: Mapping[str, Any], budget: EvalBudget = EvalBudget()) -> float:
        lhs, rhs = self.eval_sides(identity_id, pt, budget)
        return lhs.distance(rhs)

    def grid(self, identity_id: str, overrides: Optional[Mapping[str, Sequence[float]]] = None) -> List[ParamPoint]:
        """
        The Cartesian grid of an identity's parameters in declaration order, last
        parameter fastest. overrides replaces the default grid of the named parameters;
        points rejected by the identity's cross-parameter condition are skipped.
        """
        record = self.get(identity_id)
        specs = self.params(identity_id)
        overrides = overrides or {}
        axes = []
        for spec in specs:
            values = overrides.get(spec.name, spec.grid)
            if spec.kind == "int":
                values = [int(v) for v in values]
            axes.append(values)
        points = []
        for combo in itertools.product(*axes):
            point = {spec.name: value for spec, value in zip(specs, combo)}
            if record.where is not None and record.where(point):
                continue
            points.append(point)
        return points

    def reading_residuals(self, identity_id: str, budget: EvalBudget = EvalBudget(),
                          overrides: Optional[Mapping[str, Sequence[float]]] = None) -> Dict[str, float]:
        """Max residual of every right-hand-side reading over the default grid."""
        record = self.get(identity_id)
        worst = {name: 0.0 for name in record.readings()}
        for point in self.grid(identity_id, overrides):
            point = self.validate_point(identity_id, point)
            lhs = record.lhs(point, budget)
            for name, rhs in record.readings().items():
                worst[name] = max(worst[name], lhs.distance(rhs(point, budget)))
        return worst

    def certified_variant(self, identity_id: str, budget: EvalBudget = EvalBudget(),
                          threshold: float = 1e-10) -> Optional[str]:
        """First reading (default first) whose max residual is within threshold, or None."""
        for name, worst in self.reading_residuals(identity_id, budget).items():
            if math.isfinite(worst) and worst <= threshold:
                return name
        return None

    def document(self) -> List[Dict[str, Any]]:
        return RegistryDocumentGenerator().generate(self)

    def schema(self) -> str:
        """
        Returns the registry dump as a JSON string.
        """
        return to_json_string(self.document())

    def __getattr__(self, name: str) -> Callable[..., Tuple[ComplexValue, ComplexValue]]:
        """
        Enables catalog.sq_ground({"r": 1.0, "theta": 0.3}) for eval_sides("sq-ground", ...).
        """
        if name.startswith("_"):
            raise AttributeError(name)
        if name in self._attr_cache:
            return self._attr_cache[name]
        identity_id = name.replace("_", "-")
        if identity_id in self._registry:
            evaluate = lambda pt, budget=EvalBudget(): self.eval_sides(identity_id, pt, budget)
            self._attr_cache[name] = evaluate
            return evaluate
        raise AttributeError(f"'Catalog' object has no attribute '{name}'. No identity '{identity_id}' is registered")

@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    """The full registry, built once and frozen."""
    return Catalog(build_catalog()).freeze()
