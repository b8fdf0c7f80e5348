"""Command-line front end.

Subcommands::

    equilibria            fixed points, classes and thresholds
    bifurcation scalar    long-run samples of the scalar map along an r grid
    bifurcation system    long-run samples of the planar system along a beta grid
    simulate              one orbit of the planar system with a verdict
    beta-c                conversion rate at the Neimark-Sacker crossing

Every option can also come from ``--config FILE``: one ``key = value`` pair
per line, ``#`` starts a comment, keys are option names without the leading
dashes (``x0``, ``cycle-tol`` or ``cycle_tol``). Options given on the command
line win over the file. Output goes to ``--output``; otherwise to
``$ALLEE_RICKER_OUTPUT_DIR/<command>.<ext>`` when that variable is set;
otherwise to stdout.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .errors import DomainError, NumericalError
from .host_parasitoid import (
    EquilibriumReport,
    InteriorEquilibrium,
    State,
    StabilityClass,
    SystemParams,
    beta_sweep,
    boundary_equilibria_report,
    classify_interior,
    find_beta_c,
    find_interior_equilibria,
    simulate_orbit,
    solve_stability_thresholds,
)
from .numerics import EigenPair
from .scalar_map import (
    ScalarParams,
    bifurcation_sweep,
    classify_scalar_equilibria,
    critical_point_xm,
    find_two_cycle,
    solve_xa,
)

OUTPUT_DIR_ENV = "ALLEE_RICKER_OUTPUT_DIR"
SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    """Bad option value, config file or grid."""


@dataclass(frozen=True)
class Range:
    lo: float
    hi: float
    steps: int

    def __str__(self) -> str:
        return f"{self.lo!r}:{self.hi!r}:{self.steps}"


def parse_range(text: str) -> Range:
    """Parse ``lo:hi:steps``; the grid must be nonempty with ``steps >= 2``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must look like lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"range must look like lo:hi:steps, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ConfigError(f"empty range {text!r}: need finite lo < hi")
    if steps < 2:
        raise ConfigError(f"range {text!r} needs steps >= 2")
    return Range(lo, hi, steps)


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"not a finite number: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if not v > 0.0:
        raise ConfigError(f"must be > 0, got {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None
    if v < 1:
        raise ConfigError(f"must be >= 1, got {text!r}")
    return v


def _fmt(text: str) -> str:
    if text not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {text!r}")
    return text


@dataclass(frozen=True)
class Option:
    name: str
    convert: Callable[[str], Any]
    default: Any = None
    help: str = ""

    @property
    def dest(self) -> str:
        return self.name.replace("-", "_")


_COMMON = [
    Option("format", _fmt, "csv", "output format: csv or json"),
    Option("output", str, None, "output file (default: env dir or stdout)"),
]

# (command, sub) -> option table; default None without REQUIRED means "absent"
REQUIRED = object()
_OPTIONS: dict[tuple[str, str | None], list[Option]] = {
    ("equilibria", None): [
        Option("a", _finite, REQUIRED, "Allee threshold, 0 < a < 1"),
        Option("r", _finite, REQUIRED, "growth rate, r > 0"),
        Option("beta", _finite, None, "conversion rate; omit for the scalar map"),
    ],
    ("bifurcation", "scalar"): [
        Option("a", _finite, REQUIRED, "Allee threshold"),
        Option("r", parse_range, REQUIRED, "r grid lo:hi:steps"),
        Option("transient", _count, 2000, "discarded iterates"),
        Option("record", _count, 128, "recorded iterates per row"),
        Option("seed", _finite, None, "initial x (default (1+a)/2 + 0.01)"),
        Option("distinct-tol", _positive, 1e-6, "tolerance for the distinct-value count"),
    ],
    ("bifurcation", "system"): [
        Option("a", _finite, REQUIRED, "Allee threshold"),
        Option("r", _finite, REQUIRED, "growth rate"),
        Option("beta", parse_range, REQUIRED, "beta grid lo:hi:steps"),
        Option("transient", _count, 5000, "discarded iterates"),
        Option("record", _count, 128, "recorded iterates per row"),
        Option("offset", _finite, 1e-3, "x-offset from the interior equilibrium seed"),
        Option("distinct-tol", _positive, 1e-6, "tolerance for the distinct-value count"),
    ],
    ("simulate", None): [
        Option("a", _finite, REQUIRED, "Allee threshold"),
        Option("r", _finite, REQUIRED, "growth rate"),
        Option("beta", _finite, REQUIRED, "conversion rate"),
        Option("x0", _finite, REQUIRED, "initial host density"),
        Option("y0", _finite, 0.0, "initial parasitoid density"),
        Option("steps", _count, 100_000, "step budget"),
        Option("stride", _count, 1, "write every stride-th state"),
        Option("k-max", _count, 64, "largest detectable period"),
        Option("cycle-tol", _positive, 1e-6, "cycle detection tolerance"),
        Option("conv-tol", _positive, 1e-9, "convergence tolerance"),
    ],
    ("beta-c", None): [
        Option("a", _finite, REQUIRED, "Allee threshold"),
        Option("r", _finite, REQUIRED, "growth rate"),
        Option("tol", _positive, 1e-6, "bisection tolerance in beta"),
    ],
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved options for one run (defaults filled in)."""

    command: str
    sub: str | None
    values: dict[str, Any]

    @property
    def model(self) -> str:
        if self.command == "bifurcation":
            return self.sub or "scalar"
        if self.command == "equilibria" and self.values.get("beta") is None:
            return "scalar"
        return "system"

    @property
    def label(self) -> str:
        return self.command if self.sub is None else f"{self.command}-{self.sub}"

    def provenance(self) -> dict[str, str]:
        out = {"command": self.label, "model": self.model, "version": __version__}
        for k in sorted(self.values):
            out[k] = _scalar_text(self.values[k])
        return out

    def __getitem__(self, key: str) -> Any:
        return self.values[key]


def _scalar_text(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def read_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    out: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if not key:
            raise ConfigError(f"{path}:{n}: empty key")
        out[key] = value
    return out


def resolve(command: str, sub: str | None, cli: dict[str, str | None], file: dict[str, str]) -> RunConfig:
    """Merge command line over config file over defaults and convert types."""
    table = _COMMON + _OPTIONS[(command, sub)]
    known = {o.dest for o in table}
    unknown = sorted(set(file) - known - {"config"})
    if unknown:
        raise ConfigError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
    values: dict[str, Any] = {}
    for opt in table:
        raw = cli.get(opt.dest)
        if raw is None:
            raw = file.get(opt.dest)
        if raw is None:
            if opt.default is REQUIRED:
                raise ConfigError(f"missing required option --{opt.name}")
            values[opt.dest] = opt.default
            continue
        try:
            values[opt.dest] = opt.convert(raw)
        except ConfigError as exc:
            raise ConfigError(f"--{opt.name}: {exc}") from None
    return RunConfig(command, sub, values)


# ---------------------------------------------------------------- serialization

def _num(v: float) -> float | None:
    v = float(v)
    return v if math.isfinite(v) else None


def _complex_json(z: complex) -> dict[str, float | None]:
    return {"re": _num(z.real), "im": _num(z.imag)}


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


class Document:
    """Accumulates CSV rows or a JSON body under a provenance header."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.columns: list[str] = []
        self.rows: list[list[Any]] = []
        self.trailer: list[str] = []
        self.body: dict[str, Any] = {}

    def render(self) -> str:
        if self.cfg["format"] == "json":
            doc = {"schema_version": SCHEMA_VERSION, "config": self.cfg.provenance(), **self.body}
            return json.dumps(doc, indent=2, allow_nan=False) + "\n"
        buf = io.StringIO()
        buf.write(f"# allee_ricker {self.cfg.label}\n")
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        for k, v in self.cfg.provenance().items():
            buf.write(f"# {k}={v}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_cell(v) for v in row) + "\n")
        for line in self.trailer:
            buf.write(f"# {line}\n")
        return buf.getvalue()


def _destination(cfg: RunConfig) -> Path | None:
    if cfg["output"]:
        return Path(cfg["output"])
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{cfg.label}.{cfg['format']}"
    return None


def _emit(doc: Document, stdout) -> None:
    text = doc.render()
    dest = _destination(doc.cfg)
    if dest is None:
        stdout.write(text)
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    with open(dest, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands

_BOUNDARY_WHY = {
    "E0": "multiplier exp(-a r) < 1; parasitoid multiplier 0",
    "E1": "host multiplier 1 + a r (1 - a) > 1; parasitoid multiplier beta a",
    "E2": "host multiplier 1 - r (1 - a); parasitoid multiplier beta",
}


def _eig_fields(e: EigenPair) -> list[float]:
    return [e.lam1.real, e.lam1.imag, e.lam2.real, e.lam2.imag]


def _equilibria_system(cfg: RunConfig, doc: Document) -> None:
    p = SystemParams(cfg["r"], cfg["a"], cfg["beta"])
    sp = p.scalar
    boundary = boundary_equilibria_report(p)
    interior: list[tuple[InteriorEquilibrium, Any]] = [
        (e, classify_interior(e, p)) for e in find_interior_equilibria(p)
    ]
    x_d, x_t = solve_stability_thresholds(p)
    thresholds = {
        "x_hat": 0.5 * (1.0 + p.a),
        "x_m": critical_point_xm(sp),
        "x_a": solve_xa(sp),
        "x_D": x_d,
        "x_T": x_t if p.r > p.r0 else None,
        "r0": p.r0,
    }

    def boundary_row(e: EquilibriumReport) -> dict[str, Any]:
        return {
            "name": e.name, "kind": "boundary", "x": e.x, "y": e.y,
            "class": e.stability.value, "stable": e.stability is StabilityClass.STABLE,
            "rationale": _BOUNDARY_WHY[e.name], "eigen": e.eigen,
        }

    entries = [boundary_row(e) for e in boundary]
    for i, (e, c) in enumerate(interior, 1):
        entries.append({
            "name": f"E*{i}", "kind": "interior", "x": e.x, "y": e.y,
            "class": c.stability.value, "stable": c.stability is StabilityClass.STABLE,
            "rationale": c.regime + ("" if c.agrees else "; eigenvalues disagree"),
            "eigen": e.eigen,
        })

    if cfg["format"] == "json":
        doc.body["equilibria"] = [
            {**{k: v for k, v in d.items() if k != "eigen"},
             "x": _num(d["x"]), "y": _num(d["y"]),
             "eigenvalues": [_complex_json(d["eigen"].lam1), _complex_json(d["eigen"].lam2)]}
            for d in entries
        ]
        doc.body["thresholds"] = {k: (None if v is None else _num(v)) for k, v in thresholds.items()}
        return
    doc.columns = ["kind", "name", "x", "y", "lam1_re", "lam1_im", "lam2_re", "lam2_im",
                   "class", "stable", "rationale"]
    for d in entries:
        doc.rows.append([d["kind"], d["name"], d["x"], d["y"], *_eig_fields(d["eigen"]),
                         d["class"], str(d["stable"]).lower(), d["rationale"].replace(",", ";")])
    for k, v in thresholds.items():
        doc.rows.append(["threshold", k, v, None, None, None, None, None, None, None, None])


def _equilibria_scalar(cfg: RunConfig, doc: Document) -> None:
    p = ScalarParams(cfg["r"], cfg["a"])
    rows = [(f"x={e.x!r}", e.x, e.multiplier, e.stability.value, e.note or "")
            for e in classify_scalar_equilibria(p)]
    cycle = None
    if p.r > p.r0:
        cycle = find_two_cycle(p)
    thresholds = {"x_m": critical_point_xm(p), "x_a": solve_xa(p), "r0": p.r0}
    if cfg["format"] == "json":
        doc.body["equilibria"] = [
            {"x": _num(x), "multiplier": _num(m), "class": s, "note": note}
            for _, x, m, s, note in rows
        ]
        doc.body["two_cycle"] = None if cycle is None else {
            "x1": cycle.x1, "x2": cycle.x2, "multiplier": _num(cycle.multiplier),
            "class": cycle.stability.value,
        }
        doc.body["thresholds"] = {k: _num(v) for k, v in thresholds.items()}
        return
    doc.columns = ["kind", "x", "x2", "multiplier", "class", "note"]
    for _, x, m, s, note in rows:
        doc.rows.append(["fixed_point", x, None, m, s, note.replace(",", ";")])
    if cycle is not None:
        doc.rows.append(["two_cycle", cycle.x1, cycle.x2, cycle.multiplier,
                         cycle.stability.value, ""])
    for k, v in thresholds.items():
        doc.rows.append([f"threshold:{k}", v, None, None, None, None])


def cmd_equilibria(cfg: RunConfig, doc: Document) -> None:
    if cfg.model == "scalar":
        _equilibria_scalar(cfg, doc)
    else:
        _equilibria_system(cfg, doc)


def cmd_bifurcation(cfg: RunConfig, doc: Document) -> None:
    if cfg.sub == "scalar":
        g: Range = cfg["r"]
        table = bifurcation_sweep(cfg["a"], g.lo, g.hi, g.steps, cfg["transient"],
                                  cfg["record"], cfg["seed"])
        series = {"x": table.samples}
    else:
        g = cfg["beta"]
        table = beta_sweep(cfg["a"], cfg["r"], g.lo, g.hi, g.steps, cfg["transient"],
                           cfg["record"], cfg["offset"])
        series = {"x": table.samples[..., 0], "y": table.samples[..., 1]}
    counts = table.distinct_counts(cfg["distinct_tol"])
    name = table.parameter
    doc.trailer.append(f"seed: {table.seed}")
    if cfg["format"] == "json":
        doc.body["seed"] = table.seed
        doc.body["rows"] = [
            {name: float(v), "distinct": int(c),
             **{k: [_num(s) for s in arr[i]] for k, arr in series.items()}}
            for i, (v, c) in enumerate(zip(table.values, counts))
        ]
        return
    n = table.record
    doc.columns = [name, "distinct"] + [f"{k}_{j}" for k in series for j in range(n)]
    for i, (v, c) in enumerate(zip(table.values, counts)):
        row: list[Any] = [float(v), int(c)]
        for arr in series.values():
            row.extend(float(s) for s in arr[i])
        doc.rows.append(row)


def cmd_simulate(cfg: RunConfig, doc: Document) -> None:
    p = SystemParams(cfg["r"], cfg["a"], cfg["beta"])
    orbit = simulate_orbit(
        State(cfg["x0"], cfg["y0"]), p, budget=cfg["steps"], stride=cfg["stride"],
        k_max=cfg["k_max"], cycle_tol=cfg["cycle_tol"], conv_tol=cfg["conv_tol"],
    )
    verdict = {
        "verdict": orbit.verdict.value,
        "steps": orbit.steps,
        "period": orbit.period,
        "point": None if orbit.point is None else [orbit.point.x, orbit.point.y],
    }
    if cfg["format"] == "json":
        doc.body["orbit"] = [[int(t), _num(x), _num(y)]
                             for t, (x, y) in zip(orbit.times, orbit.states)]
        doc.body["result"] = verdict
        return
    doc.columns = ["t", "x", "y"]
    doc.rows = [[int(t), float(x), float(y)] for t, (x, y) in zip(orbit.times, orbit.states)]
    point = "" if orbit.point is None else f"{orbit.point.x!r} {orbit.point.y!r}"
    doc.trailer.append(
        f"verdict={orbit.verdict.value} steps={orbit.steps} "
        f"period={'' if orbit.period is None else orbit.period} point={point}"
    )


def cmd_beta_c(cfg: RunConfig, doc: Document) -> None:
    res = find_beta_c(cfg["a"], cfg["r"], tol=cfg["tol"])
    fields = {"beta_c": res.beta_c, "tolerance": res.tolerance,
              "x_equilibrium": res.x_equilibrium, "x_D": res.x_d}
    if cfg["format"] == "json":
        doc.body["result"] = fields
        return
    doc.columns = list(fields)
    doc.rows = [list(fields.values())]


_COMMANDS = {
    "equilibria": cmd_equilibria,
    "bifurcation": cmd_bifurcation,
    "simulate": cmd_simulate,
    "beta-c": cmd_beta_c,
}


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep argparse's exit status 2, add the prog prefix
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_options(parser: argparse.ArgumentParser, table: list[Option]) -> None:
    for opt in _COMMON + table:
        extra = "" if opt.default in (None, REQUIRED) else f" [default: {_scalar_text(opt.default)}]"
        req = " (required)" if opt.default is REQUIRED else ""
        parser.add_argument(f"--{opt.name}", dest=opt.dest, default=None,
                            metavar=opt.name.upper().replace("-", "_"),
                            help=opt.help + req + extra)
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="key = value file supplying any option")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="allee-ricker", description=__doc__.split("\n\n")[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("equilibria", "simulate", "beta-c"):
        _add_options(subs.add_parser(name), _OPTIONS[(name, None)])
    bif = subs.add_parser("bifurcation").add_subparsers(dest="sub", required=True,
                                                        parser_class=_Parser)
    for model in ("scalar", "system"):
        _add_options(bif.add_parser(model), _OPTIONS[("bifurcation", model)])
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cli = vars(ns)
    command, sub = cli.pop("command"), cli.pop("sub", None)
    try:
        file = read_config_file(cli["config"]) if cli.get("config") else {}
        cfg = resolve(command, sub, cli, file)
        doc = Document(cfg)
        _COMMANDS[command](cfg, doc)
        _emit(doc, stdout)
    except (ConfigError, DomainError) as exc:
        print(f"allee-ricker: error: {exc}", file=stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"allee-ricker: numerical failure: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"allee-ricker: error: cannot write output: {exc}", file=stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
