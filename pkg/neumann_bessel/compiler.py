from dataclasses import dataclass
from typing import Any, Type, Dict, List, Tuple, Annotated, Literal, Union, get_origin, get_args, get_type_hints, is_typeddict
import math

import numpy as np

from neumann_bessel.validators import (
    Validator, NumberValidator, StringValidator, BoolValidator,
    ObjectValidator, LiteralValidator
)
from neumann_bessel.exceptions import DefinitionError
from neumann_bessel.utils import parse_constraints, parse_grid, parse_number

KINDS = ("int", "real", "angle")

ANGLE_GRID: Tuple[float, ...] = tuple(k * math.pi / 4 for k in range(8))

@dataclass(frozen=True)
class ParamSpec:
    """One named parameter range of an identity, with its default sweep grid."""
    name: str
    kind: str
    min: float
    max: float
    grid: Tuple[Union[int, float], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "min": self.min, "max": self.max, "kind": self.kind}

class DomainCompiler:
    """Compiles TypedDict domain declarations (Annotated fields) into validators and parameter specs."""

    def __init__(self):
        self._cache: Dict[Type, ObjectValidator] = {}
        self._spec_cache: Dict[Type, List[ParamSpec]] = {}

    def compile(self, schema: Type) -> Validator:
        """
        Compiles a TypedDict (or a single Annotated type) into a Validator instance.
        """
        if schema in self._cache: return self._cache[schema]
        validator = self._build_validator(schema)
        if is_typeddict(schema):
            self._cache[schema] = validator
        return validator

    def params(self, schema: Type) -> List[ParamSpec]:
        """
        Returns the ParamSpec of every numeric field of a domain TypedDict, in declaration order.
        """
        if schema in self._spec_cache: return self._spec_cache[schema]
        if not is_typeddict(schema):
            raise DefinitionError(f"{schema!r} is not a TypedDict")
        specs = []
        for key, value in get_type_hints(schema, include_extras=True).items():
            specs.append(self._build_param(key, value))
        self._spec_cache[schema] = specs
        return specs

    def _build_validator(self, schema: Type) -> Validator:
        origin = get_origin(schema)
        args = get_args(schema)

        if origin is Annotated:
            base_type = args[0]
            constraints = parse_constraints(self._constraint_string(args))
            if constraints.get('kind') == 'angle':
                constraints.setdefault('min', '-2pi')
                constraints.setdefault('max', '2pi')
            if base_type is int or base_type is float:
                return NumberValidator(constraints, number_type=base_type)
            if base_type is str:
                return StringValidator(constraints)
            if get_origin(base_type) is Literal:
                return LiteralValidator(get_args(base_type))
            return self.compile(base_type)

        if is_typeddict(schema): return self._compile_typeddict(schema)
        if origin is Literal:
            return LiteralValidator(args)
        if schema is bool:
            return BoolValidator()
        if schema is int or schema is float:
            return NumberValidator({}, number_type=schema)
        if schema is str:
            return StringValidator({})

        raise DefinitionError(f"Unsupported field type {schema!r}")

    def _compile_typeddict(self, td_cls: Type) -> ObjectValidator:
        type_hints = get_type_hints(td_cls, include_extras=True)
        fields = {}
        for key, value in type_hints.items():
            fields[key] = self.compile(value)
        required_keys = set(getattr(td_cls, '__required_keys__', type_hints.keys()))
        return ObjectValidator(fields, required_keys, name=td_cls.__name__)

    def _build_param(self, name: str, annotation: Any) -> ParamSpec:
        if get_origin(annotation) is not Annotated:
            raise DefinitionError(f"Parameter '{name}' must be Annotated with a range")
        args = get_args(annotation)
        base_type = args[0]
        if base_type not in (int, float):
            raise DefinitionError(f"Parameter '{name}' must be int or float, got {base_type!r}")
        c = parse_constraints(self._constraint_string(args))

        kind = c.get('kind', 'int' if base_type is int else 'real')
        if kind not in KINDS:
            raise DefinitionError(f"Parameter '{name}' has unknown kind '{kind}'")
        if kind == 'int' and base_type is not int:
            raise DefinitionError(f"Parameter '{name}' of kind int must be declared as int")

        if kind == 'angle':
            lo = parse_number(c.get('min', '-2pi'))
            hi = parse_number(c.get('max', '2pi'))
        else:
            if 'min' not in c or 'max' not in c:
                raise DefinitionError(f"Parameter '{name}' needs min and max")
            lo, hi = parse_number(c['min']), parse_number(c['max'])
        if lo > hi:
            raise DefinitionError(f"Parameter '{name}' has min > max")

        if 'grid' in c:
            grid = parse_grid(c['grid'])
        elif kind == 'int':
            if hi - lo > 64:
                raise DefinitionError(f"Parameter '{name}' spans too many integers for a default grid")
            grid = list(range(int(lo), int(hi) + 1))
        elif kind == 'angle':
            grid = [v for v in ANGLE_GRID if lo <= v <= hi]
        else:
            count = int(c.get('count', 5))
            grid = [float(v) for v in np.linspace(lo, hi, count)]

        if base_type is int:
            grid = [int(v) for v in grid]
        bad = [v for v in grid if v < lo - 1e-12 or v > hi + 1e-12]
        if bad:
            raise DefinitionError(f"Grid of '{name}' leaves [{lo}, {hi}]: {bad}")
        return ParamSpec(name, kind, lo, hi, tuple(grid))

    @staticmethod
    def _constraint_string(args: Tuple[Any, ...]) -> str:
        constraint_str = ""
        for arg in args[1:]:
            if isinstance(arg, str):
                constraint_str += arg + ";"
        return constraint_str
