from typing import Dict, Any, List, Union
import math
import re

from neumann_bessel.exceptions import ConfigurationError, DefinitionError

_PI_TERM = re.compile(r"^\s*([+-]?[0-9.eE+-]*?)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")

def parse_constraints(annotation_str: str) -> Dict[str, Any]:
    """
    Parses a constraint string such as "min=0; max=20; kind=real" into a dict.
    Bare words become boolean flags.
    """
    if not annotation_str:
        return {}
    return _parse_simple(annotation_str)

def _parse_simple(text: str) -> Dict[str, Any]:
    constraints = {}
    pattern = r"([^=;\s]+)\s*=\s*'([^']*)'|([^=;\s]+)\s*=\s*([^;]+)|([^=;\s]+)"
    for match in re.finditer(pattern, text):
        if match.group(1):
            constraints[match.group(1)] = match.group(2)
        elif match.group(3):
            key, val = match.group(3), match.group(4).strip()
            if val.lower() == 'true': val = True
            elif val.lower() == 'false': val = False
            constraints[key] = val
        elif match.group(5):
            constraints[match.group(5)] = True
    return constraints

def parse_number(text: Union[str, int, float]) -> float:
    """
    Reads a float literal or a multiple of pi ("pi", "-pi", "pi/4", "2*pi/3", "2pi").
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    raw = str(text).strip()
    try:
        return float(raw)
    except ValueError:
        pass
    match = _PI_TERM.match(raw)
    if not match:
        raise DefinitionError(f"Cannot read '{raw}' as a number")
    coeff = match.group(1)
    if coeff in ("", "+"): factor = 1.0
    elif coeff == "-": factor = -1.0
    else: factor = float(coeff)
    divisor = float(match.group(2)) if match.group(2) else 1.0
    return factor * math.pi / divisor

def parse_grid(text: Union[str, List[Any]]) -> List[float]:
    """Parses "0,5,10" (or "0, pi/4, pi/2") into a list of floats."""
    if isinstance(text, (list, tuple)):
        return [parse_number(v) for v in text]
    parts = [p for p in str(text).split(",") if p.strip()]
    if not parts:
        raise DefinitionError("Empty grid")
    return [parse_number(p) for p in parts]

def parse_config_text(text: str) -> Dict[str, Any]:
    """
    Parses a flat config file: one "key = value" per line, '#' starts a comment.
    Keys are normalised so that "max-terms", "Max Terms" and "max_terms" coincide.
    """
    settings: Dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line: continue
        if ";" in line:
            raise ConfigurationError("Invalid config file", [{"path": f"line {lineno}", "message": "One setting per line"}])
        if "=" in line:
            key, _, value = line.partition("=")
            key = key.strip()
            if not key:
                raise ConfigurationError("Invalid config file", [{"path": f"line {lineno}", "message": "Missing key"}])
            parsed = _parse_simple(f"{normalize_key(key)}={value.strip()}") if value.strip() else {normalize_key(key): ""}
        else:
            parsed = _parse_simple(normalize_key(line))
        settings.update(parsed)
    return settings

def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_").replace(" ", "_")
