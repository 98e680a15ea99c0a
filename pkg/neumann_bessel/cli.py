"""
Command-line entry point: neumann-bessel <subcommand> [flags].

Every flag can also be set in a flat config file (--config), one "key = value"
per line; flags given on the command line win. Repeated flags become one config
value: `id = master,cos4k` and `grid = z=0,1,5|y=0`. Exit status is 0 when all
checks pass, 1 when verification fails and 2 for usage or configuration errors.
"""
import argparse
import json
import logging
import sys
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, TypedDict

from neumann_bessel.bessel import EvalBudget, bessel_j
from neumann_bessel.compiler import DomainCompiler
from neumann_bessel.core import default_catalog
from neumann_bessel.exceptions import (
    ConfigurationError, DefinitionError, DomainError, NeumannBesselError, SearchError, UnknownIdentityError
)
from neumann_bessel.harness import SweepConfig, grid_values, sweep, verify_all
from neumann_bessel.polygon import MODES, FieldSpec, find_saddles, sample_grid, saddle_rings
from neumann_bessel.quadrature import bessel_fourier_oracle, bessel_series_oracle
from neumann_bessel.utils import normalize_key, parse_config_text

logger = logging.getLogger(__name__)

class CliSettings(TypedDict, total=False):
    """Settings shared by flags and the config file."""
    eps: Annotated[float, "exclusive_min=0; max=1"]
    threshold: Annotated[float, "min=0"]
    max_terms: Annotated[int, "min=1; max=100000"]
    threads: Annotated[int, "min=0; max=256"]
    out: Annotated[str, "min_len=1"]
    format: Literal["json", "csv"]
    verbose: Annotated[int, "min=0; max=3"]
    # eval, sweep, verify
    id: Annotated[str, "min_len=1"]
    grid: Annotated[str, "min_len=1"]
    reading: Annotated[str, "min_len=1"]
    all: bool
    # contour, separatrix
    mode: Literal["fn", "hexagon-triangle", "decagon"]
    n: Annotated[int, "min=1; max=64"]
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: Annotated[int, "min=2; max=4001"]
    ny: Annotated[int, "min=2; max=4001"]
    radius: Annotated[float, "exclusive_min=0; max=50"]
    # identity parameters (ranges are checked by each identity's domain) and bessel
    m: int
    p: int
    q: int
    a: float
    alpha: float
    beta: float
    r: float
    t: float
    theta: float
    x: float
    y: float
    z: float
    zp: float

SETTINGS = tuple(CliSettings.__annotations__)

# repeatable flags and the separator joining them into one setting
JOINED = {"id": ",", "grid": "|"}

def _fmt(value: float) -> str:
    return format(float(value), ".17g")

def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)

def _param_names() -> List[str]:
    names: List[str] = []
    catalog = default_catalog()
    for identity_id in catalog.ids():
        for spec in catalog.params(identity_id):
            if spec.name not in names:
                names.append(spec.name)
    return names

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file; flags override it")
    common.add_argument("-v", "--verbose", action="count", default=None, help="log progress to stderr (-vv for debug)")
    common.add_argument("--eps", type=str, default=None, help="absolute tolerance of every truncation (default 1e-12)")
    common.add_argument("--max-terms", type=str, default=None, help="cap on series terms (default 2000)")
    common.add_argument("--threshold", type=str, default=None, help="pass cutoff on |lhs - rhs| (default 100 * eps)")
    common.add_argument("--threads", type=str, default=None, help="worker threads, 0 = auto")
    common.add_argument("--out", default=None, help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="neumann-bessel", description="Certified Neumann-Bessel series identities")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list registered identities")
    sub.add_parser("registry", parents=[common], help="dump the registry as JSON")

    ev = sub.add_parser("eval", parents=[common], help="evaluate both sides of one identity")
    ev.add_argument("--id", default=None, help="identity to evaluate")
    ev.add_argument("--reading", default=None, help="alternative right-hand side by name")
    for name in _param_names():
        ev.add_argument(f"--{name}", default=None, metavar="VALUE")

    ver = sub.add_parser("verify", parents=[common], help="full registry sweep plus polygon checks")
    ver.add_argument("--all", action="store_true", default=None, help="every identity (the default)")
    ver.add_argument("--id", action="append", default=None, help="restrict the sweep to these ids")
    ver.add_argument("--format", choices=["json", "csv"], default=None)

    sw = sub.add_parser("sweep", parents=[common], help="residual sweep over chosen identities")
    sw.add_argument("--id", action="append", default=None)
    sw.add_argument("--grid", action="append", default=None, metavar="NAME=VALUES",
                    help="replace a parameter grid: z=0,1,5 or z=0:30:8 (min:max:count)")
    sw.add_argument("--format", choices=["json", "csv"], default=None)

    co = sub.add_parser("contour", parents=[common], help="export a sampled field as CSV")
    co.add_argument("--mode", choices=list(MODES), default=None)
    co.add_argument("--n", type=str, default=None)
    for name in ("xmin", "xmax", "ymin", "ymax", "nx", "ny"):
        co.add_argument(f"--{name}", type=str, default=None)

    se = sub.add_parser("separatrix", parents=[common], help="saddle level C_n and saddle points of f_n")
    se.add_argument("--n", type=str, default=None)
    se.add_argument("--radius", type=str, default=None)

    be = sub.add_parser("bessel", parents=[common], help="J_m(z) with both oracles")
    be.add_argument("--m", type=str, default=None)
    be.add_argument("--z", type=str, default=None)
    return parser

def load_settings(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Config file values overridden by explicit flags, validated against CliSettings.
    """
    settings: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigurationError("Cannot read config file", [{"path": args.config, "message": str(exc)}])
        settings.update(parse_config_text(text))
    for key in SETTINGS:
        value = getattr(args, key, None)
        if isinstance(value, list):
            value = JOINED[key].join(value)
        if value is not None:
            settings[normalize_key(key)] = value
    try:
        return DomainCompiler().compile(CliSettings).validate(settings)
    except DomainError as exc:
        raise ConfigurationError("Invalid settings", exc.errors) from None

def _budget(settings: Dict[str, Any]) -> EvalBudget:
    return EvalBudget(settings.get("eps", EvalBudget.eps), settings.get("max_terms", EvalBudget.max_terms))

def _configure_logging(level: int) -> None:
    logging.basicConfig(
        level=(logging.WARNING, logging.INFO, logging.DEBUG)[min(level, 2)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

def _emit_report(report, settings: Dict[str, Any]) -> None:
    text = report.to_csv() if settings.get("format") == "csv" else report.to_json()
    _write(text, settings.get("out"))

def cmd_list(args, settings) -> int:
    lines = [f"{i}\t{title}\t{ref}\n" for i, title, ref in default_catalog().list_identities()]
    _write("".join(lines), settings.get("out"))
    return 0

def cmd_registry(args, settings) -> int:
    _write(default_catalog().schema() + "\n", settings.get("out"))
    return 0

def _require(settings: Dict[str, Any], key: str, command: str) -> Any:
    if key not in settings:
        raise ConfigurationError(f"{command} needs --{key}", [{"path": key, "message": "Field is required"}])
    return settings[key]

def _ids(settings: Dict[str, Any]) -> List[str]:
    return [i.strip() for i in settings.get("id", "").split(",") if i.strip()]

def cmd_eval(args, settings) -> int:
    catalog = default_catalog()
    record = catalog.get(_require(settings, "id", "eval"))
    point = {spec.name: settings[spec.name] for spec in catalog.params(record.id) if spec.name in settings}
    budget = _budget(settings)
    lhs, rhs = catalog.eval_sides(record.id, point, budget, reading=settings.get("reading"))
    residual = lhs.distance(rhs)
    fields = [record.id, *(_fmt(v) for v in (lhs.re, lhs.im, rhs.re, rhs.im, residual))]
    _write(" ".join(fields) + "\n", settings.get("out"))
    threshold = settings.get("threshold", 100.0 * budget.eps)
    return 0 if residual <= threshold else 1

def _sweep_config(settings: Dict[str, Any], ids: Sequence[str], grids: Dict[str, List[float]]) -> SweepConfig:
    return SweepConfig(
        ids=tuple(ids),
        grids={k: tuple(v) for k, v in grids.items()},
        budget=_budget(settings),
        threshold=settings.get("threshold"),
        workers=settings.get("threads", 0),
    )

def cmd_verify(args, settings) -> int:
    ids = _ids(settings)
    if settings.get("all") or not ids:
        ids = ["all"]
    report, passed = verify_all(_sweep_config(settings, ids, {}))
    _emit_report(report, settings)
    return 0 if passed else 1

def cmd_sweep(args, settings) -> int:
    _require(settings, "id", "sweep")
    grids: Dict[str, List[float]] = {}
    for item in settings.get("grid", "").split("|"):
        if not item.strip():
            continue
        name, sep, values = item.partition("=")
        if not sep or not name.strip():
            raise ConfigurationError("Invalid grid flag", [{"path": "grid", "message": f"Expected NAME=VALUES, got '{item}'"}])
        grids[name.strip()] = grid_values(values)
    report = sweep(_sweep_config(settings, _ids(settings), grids))
    _emit_report(report, settings)
    return 0 if report.failures == 0 else 1

def cmd_contour(args, settings) -> int:
    defaults = FieldSpec()
    spec = FieldSpec(
        x_min=settings.get("xmin", defaults.x_min), x_max=settings.get("xmax", defaults.x_max),
        y_min=settings.get("ymin", defaults.y_min), y_max=settings.get("ymax", defaults.y_max),
        nx=settings.get("nx", defaults.nx), ny=settings.get("ny", defaults.ny),
    )
    mode = settings.get("mode", "fn")
    field = sample_grid(mode, settings.get("n", 6) if mode == "fn" else None, spec)
    _write(field.to_csv(), settings.get("out"))
    return 0

def cmd_separatrix(args, settings) -> int:
    n = settings.get("n", 6)
    radius = settings.get("radius", 8.0)
    rings = saddle_rings(n, radius)
    if not rings:
        raise SearchError(f"No saddle of f_{n} within radius {radius}")
    saddles = [cp.to_dict() for cp in find_saddles(n, radius) if cp.hessian_class == "saddle"]
    lines = [_fmt(rings[0][1])]
    lines.extend(f"ring {_fmt(r)} {_fmt(v)} {c}" for r, v, c in rings)
    lines.append(json.dumps(saddles, indent=2))
    _write("\n".join(lines) + "\n", settings.get("out"))
    return 0

def cmd_bessel(args, settings) -> int:
    m, z = _require(settings, "m", "bessel"), _require(settings, "z", "bessel")
    lines = [f"bessel_j {_fmt(bessel_j(m, z))}"]
    for name, oracle in (("series_oracle", bessel_series_oracle), ("fourier_oracle", bessel_fourier_oracle)):
        try:
            lines.append(f"{name} {_fmt(oracle(m, z))}")
        except DomainError as exc:
            lines.append(f"{name} unavailable ({exc.errors[0]['message'] if exc.errors else exc})")
    _write("\n".join(lines) + "\n", settings.get("out"))
    return 0

COMMANDS = {
    "list": cmd_list,
    "registry": cmd_registry,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "contour": cmd_contour,
    "separatrix": cmd_separatrix,
    "bessel": cmd_bessel,
}

def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = load_settings(args)
        _configure_logging(settings.get("verbose", 0))
        logger.debug("settings: %s", settings)
        return COMMANDS[args.command](args, settings)
    except (ConfigurationError, DomainError, UnknownIdentityError, DefinitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NeumannBesselError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1

def main() -> None:
    sys.exit(run())
