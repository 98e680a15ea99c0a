import json
from typing import Any, Dict, List, TYPE_CHECKING

from neumann_bessel.compiler import ParamSpec
from neumann_bessel.validators import NumberValidator, ObjectValidator, Validator

if TYPE_CHECKING:
    from neumann_bessel.core import Catalog

class RegistryDocumentGenerator:
    """Generates the registry dump from a Catalog's compiled domains."""

    def generate(self, catalog: "Catalog") -> List[Dict[str, Any]]:
        """
        One entry {id, title, paper_ref, params} per identity, in listing order.
        """
        entries = []
        for record in catalog:
            domain = catalog.compiler.compile(record.domain)
            entries.append({
                "id": record.id,
                "title": record.title,
                "paper_ref": record.reference,
                "params": self._visit_object(domain, catalog.params(record.id)),
            })
        return entries

    def _visit_object(self, v: ObjectValidator, specs: List[ParamSpec]) -> List[Dict[str, Any]]:
        params = []
        for spec in specs:
            entry = spec.to_dict()
            entry.update(self._visit(v.fields[spec.name]))
            params.append(entry)
        return params

    def _visit(self, validator: Validator) -> Dict[str, Any]:
        if isinstance(validator, NumberValidator):
            return self._visit_number(validator)
        return {}

    def _visit_number(self, v: NumberValidator) -> Dict[str, Any]:
        bounds: Dict[str, Any] = {}
        if v.min_val is not None: bounds['min'] = v.min_val
        if v.max_val is not None: bounds['max'] = v.max_val
        return bounds

def to_json_string(document: Any, indent: int = 2) -> str:
    return json.dumps(document, indent=indent)
