from abc import ABC, abstractmethod
from typing import Any, Dict, Generic, Optional, Set, Tuple, TypeVar, Union
import math

from neumann_bessel.exceptions import DomainError, DefinitionError
from neumann_bessel.utils import parse_number

T = TypeVar("T")

def _fail(path: str, summary: str, message: str) -> DomainError:
    return DomainError(summary, [{"path": path, "message": message}])

class Validator(ABC, Generic[T]):
    """Checks one value of a domain point or settings mapping."""
    __slots__ = ()

    @abstractmethod
    def validate(self, data: Any, path: str = "") -> T:
        pass

class NumberValidator(Validator[Union[int, float]]):
    """
    Checks a finite int/float against min/max/exclusive bounds.
    Strings are accepted when they read as numbers (config files, CLI flags).
    """
    __slots__ = ('number_type', 'min_val', 'max_val', 'exclusive_min_val', 'exclusive_max_val')

    def __init__(self, constraints: Dict[str, Any], number_type: type = int):
        self.number_type = number_type
        bound = lambda key: parse_number(constraints[key]) if key in constraints else None
        self.min_val = bound('min')
        self.max_val = bound('max')
        self.exclusive_min_val = bound('exclusive_min')
        self.exclusive_max_val = bound('exclusive_max')

    def validate(self, data: Any, path: str = "") -> Union[int, float]:
        if isinstance(data, str):
            data = self._coerce(data, path)
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            raise _fail(path, f"Expected number, got {type(data).__name__}", "Invalid type")
        if not math.isfinite(data):
            raise _fail(path, f"Value {data} is not finite", "Must be finite")
        if self.number_type is int and isinstance(data, float) and not data.is_integer():
            raise _fail(path, "Expected integer, got float", "Expected integer")

        if self.min_val is not None and data < self.min_val:
            raise _fail(path, f"{data} is below the range", f"Must be >= {self.min_val}")
        if self.max_val is not None and data > self.max_val:
            raise _fail(path, f"{data} is above the range", f"Must be <= {self.max_val}")
        if self.exclusive_min_val is not None and data <= self.exclusive_min_val:
            raise _fail(path, f"{data} is below the range", f"Must be > {self.exclusive_min_val}")
        if self.exclusive_max_val is not None and data >= self.exclusive_max_val:
            raise _fail(path, f"{data} is above the range", f"Must be < {self.exclusive_max_val}")

        return self.number_type(data)

    def _coerce(self, text: str, path: str) -> Union[int, float]:
        try:
            if self.number_type is int:
                return int(text.strip())
            return parse_number(text)
        except (ValueError, DefinitionError):
            raise _fail(path, f"Cannot read '{text}' as {self.number_type.__name__}", "Invalid number")

class StringValidator(Validator[str]):
    __slots__ = ('min_len',)

    def __init__(self, constraints: Dict[str, Any]):
        self.min_len = int(constraints['min_len']) if constraints.get('min_len') else None

    def validate(self, data: Any, path: str = "") -> str:
        if not isinstance(data, str):
            raise _fail(path, f"Expected string, got {type(data).__name__}", "Invalid type")
        if self.min_len is not None and len(data) < self.min_len:
            raise _fail(path, f"'{data}' is too short", f"Length must be >= {self.min_len}")
        return data

class BoolValidator(Validator[bool]):
    __slots__ = ()

    def validate(self, data: Any, path: str = "") -> bool:
        if isinstance(data, bool):
            return data
        if isinstance(data, str) and data.lower() in ("true", "false", "1", "0", "yes", "no"):
            return data.lower() in ("true", "1", "yes")
        raise _fail(path, f"Expected boolean, got {data!r}", "Invalid boolean")

class ObjectValidator(Validator[Dict]):
    """A whole point: every field error is collected before raising. Unknown keys are errors."""
    __slots__ = ('fields', 'required_keys', 'name')

    def __init__(self, fields: Dict[str, Validator], required_keys: Set[str], name: Optional[str] = None):
        self.fields = fields
        self.required_keys = required_keys
        self.name = name

    def validate(self, data: Any, path: str = "") -> Dict:
        if not isinstance(data, dict):
            raise _fail(path, f"Expected mapping, got {type(data).__name__}", "Invalid type")

        at = lambda key: f"{path}.{key}" if path else key
        values, errors = {}, []
        for key in sorted(self.required_keys - data.keys()):
            errors.append({"path": at(key), "message": "Field is required"})

        for key, value in data.items():
            if key not in self.fields:
                errors.append({"path": at(key), "message": "Unknown parameter"})
                continue
            try:
                values[key] = self.fields[key].validate(value, path=at(key))
            except DomainError as e:
                errors.extend(e.errors)

        if errors:
            raise DomainError(f"Invalid {self.name or 'point'}", errors)
        return values

class LiteralValidator(Validator[Any]):
    __slots__ = ('allowed_values',)

    def __init__(self, allowed_values: Tuple[Any, ...]):
        self.allowed_values = allowed_values

    def validate(self, data: Any, path: str = "") -> Any:
        if data not in self.allowed_values:
            allowed = ", ".join(repr(v) for v in self.allowed_values)
            raise _fail(path, f"Value must be one of: {allowed}", f"Expected one of: {allowed}")
        return data
