"""Command-line front end: ``pulsebloch <command> [options]``.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import dataclasses
import io
import json
import math
import operator
import sys

import numpy as np

from . import __version__
from .bloch import (
    CoherentStateAngles,
    Exponential,
    Rectangular,
    SinSquared,
    evolution_matrix,
    initial_bloch,
    pulse_name,
)
from .checks import ORACLE_TOL, oracle_check
from .oracle import DEFAULT_STEP
from .qfi import Grid, SweepSpec, sweep

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SCHEMA = ["theta", "phi", "delta", "tau", "param", "mode", "qfi", "branch", "norm"]

DEFAULTS = {
    "pulse": "rect",
    "delta": 0.0,
    "omega_ratio": 1.0,
    "omega_prime": 1.0,
    "n": 1,
    "theta": None,
    "phi": None,
    "tau": None,
    "mode": "exact",
    "param": "theta",
    "grid_theta": None,
    "grid_phi": None,
    "grid_delta": None,
    "out": "-",
    "format": "csv",
    "step": DEFAULT_STEP,
    "samples": 101,
    "tau_max": 20.0,
}

# figure id -> fixed parameters; tau is counted in units of 1/omega_q and the
# rectangular scaled time is omega_prime * tau
FIGURES = {
    "fig1": {"param": "theta", "phi": math.pi, "omega_primes": (0.3, 0.9)},
    "fig2": {"param": "theta", "phi": (math.pi / 4, math.pi / 2), "omega_primes": (0.5,)},
    "fig3": {"param": "phi", "theta": math.pi / 4, "omega_primes": (0.3, 0.6, 0.9)},
    "fig4": {"param": "phi", "theta": math.pi / 2, "omega_primes": (0.3, 0.6, 0.9)},
}
FIGURE_GRIDS = {
    "theta": Grid(0.0, math.pi, 51),
    "phi": Grid(0.0, 2 * math.pi, 101),
    "delta": Grid(0.0, 1.0, 51),
}


class UsageError(Exception):
    pass


# -- number parsing ----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("unsupported expression")


def parse_number(text) -> float:
    """Parse a float or a small arithmetic expression in ``pi`` (e.g. ``3*pi/4``)."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        try:
            value = float(_eval_node(ast.parse(str(text).strip(), mode="eval")))
        except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError):
            raise UsageError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"not a finite number: {text!r}")
    return value


def parse_grid(text) -> Grid:
    """``"lo,hi,count"`` (or a JSON list) -> :class:`Grid`; a single value is a one-point grid."""
    parts = list(text) if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        if len(parts) == 1:
            return Grid.point(parse_number(parts[0]))
        if len(parts) != 3:
            raise UsageError(f"grid must be 'min,max,count', got {text!r}")
        count = int(str(parts[2]).strip())
        return Grid(parse_number(parts[0]), parse_number(parts[1]), count)
    except ValueError as e:
        raise UsageError(f"bad grid {text!r}: {e}") from None


# -- argument handling -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags override it")
    common.add_argument("--pulse", choices=["rect", "exp", "sin2"])
    common.add_argument("--delta", help="scaled detuning Delta/Omega0 (rect)")
    common.add_argument("--omega-ratio", dest="omega_ratio", help="Omega0/gamma_p (exp)")
    common.add_argument("--omega-prime", dest="omega_prime", help="Omega0/omega_q (sin2)")
    common.add_argument("--n", help="beating index of the sin2 pulse")
    common.add_argument("--theta")
    common.add_argument("--phi")
    common.add_argument("--tau", help="scaled time of the pulse")
    common.add_argument("--mode", choices=["exact", "paper"])
    common.add_argument("--param", choices=["theta", "phi"])
    common.add_argument("--grid-theta", dest="grid_theta", metavar="MIN,MAX,COUNT")
    common.add_argument("--grid-phi", dest="grid_phi", metavar="MIN,MAX,COUNT")
    common.add_argument("--grid-delta", dest="grid_delta", metavar="MIN,MAX,COUNT")
    common.add_argument("--out", help="output path, '-' for stdout")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--step", help="RK4 step size")
    common.add_argument("--samples", help="number of time samples (evolve)")
    common.add_argument("--tau-max", dest="tau_max", help="largest time on the oracle grid")

    parser = argparse.ArgumentParser(prog="pulsebloch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pulsebloch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="Bloch-vector time series")
    sub.add_parser("qfi", parents=[common], help="QFI at a single point")
    sub.add_parser("sweep", parents=[common], help="QFI over a theta x phi x delta grid")
    rep = sub.add_parser("reproduce", parents=[common], help="figure data in both modes")
    rep.add_argument("figure", choices=sorted(FIGURES))
    sub.add_parser("oracle-check", parents=[common], help="closed forms vs RK4")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Merge command-line flags over the config file over the defaults."""
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as e:
            raise OSError(f"cannot read config {args.config}: {e}") from e
        except json.JSONDecodeError as e:
            raise UsageError(f"invalid JSON in {args.config}: {e}") from None
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = {}
    explicit = set()
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None or key in file_cfg:
            explicit.add(key)
        cfg[key] = flag if flag is not None else file_cfg.get(key, default)
    for key in ("delta", "omega_ratio", "omega_prime", "step", "tau_max"):
        cfg[key] = parse_number(cfg[key])
    for key in ("theta", "phi", "tau"):
        if cfg[key] is not None:
            cfg[key] = parse_number(cfg[key])
    for key in ("n", "samples"):
        try:
            cfg[key] = int(cfg[key])
        except (TypeError, ValueError):
            raise UsageError(f"--{key} must be an integer") from None
    for key in ("grid_theta", "grid_phi", "grid_delta"):
        if cfg[key] is not None:
            cfg[key] = parse_grid(cfg[key])
    for key, choices in (("pulse", ("rect", "exp", "sin2")), ("mode", ("exact", "paper")),
                         ("param", ("theta", "phi")), ("format", ("csv", "json"))):
        if cfg[key] not in choices:
            raise UsageError(f"--{key} must be one of {choices}")
    cfg["explicit"] = explicit
    return cfg


def make_pulse(cfg: dict):
    try:
        if cfg["pulse"] == "rect":
            return Rectangular(cfg["delta"])
        if cfg["pulse"] == "exp":
            return Exponential(cfg["omega_ratio"])
        return SinSquared(cfg["omega_prime"], cfg["n"])
    except ValueError as e:
        raise UsageError(str(e)) from None


def require(cfg: dict, *keys):
    missing = [k for k in keys if cfg[k] is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def make_angles(cfg: dict) -> CoherentStateAngles:
    require(cfg, "theta", "phi")
    try:
        return CoherentStateAngles(cfg["theta"], cfg["phi"])
    except ValueError as e:
        raise UsageError(str(e)) from None


def check_tau(tau: float):
    if tau < 0:
        raise UsageError("--tau must be >= 0")


# -- output ------------------------------------------------------------------


def fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(meta: list[str], columns: list[str], rows) -> str:
    buf = io.StringIO()
    for line in meta:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_json(meta: list[str], columns: list[str], rows) -> str:
    records = [{c: _json_safe(row[c]) for c in columns} for row in rows]
    return json.dumps({"meta": meta, "columns": columns, "records": records}, indent=1) + "\n"


def render(cfg: dict, meta: list[str], columns: list[str], rows) -> str:
    rows = list(rows)
    if cfg["format"] == "json":
        return render_json(meta, columns, rows)
    return render_csv(meta, columns, rows)


def emit(text: str, path: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def header(cfg: dict, command: str, *extra: str) -> list[str]:
    return [f"pulsebloch {__version__}", f"command: {command}", *extra]


def pulse_meta(pulse) -> str:
    fields = ", ".join(f"{f.name}={fmt(getattr(pulse, f.name))}" for f in dataclasses.fields(pulse))
    return f"pulse: {pulse_name(pulse)} ({fields})"


def _record_row(rec) -> dict:
    return dataclasses.asdict(rec)


# -- commands ----------------------------------------------------------------


def cmd_evolve(cfg: dict) -> tuple[int, str]:
    require(cfg, "tau")
    check_tau(cfg["tau"])
    pulse = make_pulse(cfg)
    angles = make_angles(cfg)
    if cfg["samples"] < 1:
        raise UsageError("--samples must be >= 1")
    s0 = initial_bloch(angles).as_array()
    times = np.linspace(0.0, cfg["tau"], cfg["samples"]) if cfg["samples"] > 1 else np.array([cfg["tau"]])
    rows = []
    for t in times:
        s = evolution_matrix(pulse, float(t), cfg["mode"]) @ s0
        rows.append({"tau": float(t), "sx": float(s[0]), "sy": float(s[1]), "sz": float(s[2]),
                     "norm": float(np.linalg.norm(s))})
    meta = header(cfg, "evolve", pulse_meta(pulse), f"mode: {cfg['mode']}",
                  f"theta: {fmt(angles.theta)}", f"phi: {fmt(angles.phi)}")
    return EXIT_OK, render(cfg, meta, ["tau", "sx", "sy", "sz", "norm"], rows)


def cmd_qfi(cfg: dict) -> tuple[int, str]:
    require(cfg, "tau")
    check_tau(cfg["tau"])
    spec = _sweep_spec(cfg, Grid.point(make_angles(cfg).theta), Grid.point(cfg["phi"]),
                       Grid.point(cfg["delta"] if cfg["pulse"] == "rect" else 0.0))
    rows = [_record_row(r) for r in sweep(spec)]
    meta = header(cfg, "qfi", pulse_meta(spec.pulse), f"mode: {spec.mode}", f"tau: {fmt(spec.tau)}")
    return EXIT_OK, render(cfg, meta, SCHEMA, rows)


def _sweep_spec(cfg, theta_grid, phi_grid, delta_grid) -> SweepSpec:
    try:
        return SweepSpec(make_pulse(cfg), cfg["param"], theta_grid, phi_grid, delta_grid,
                         cfg["tau"], cfg["mode"])
    except ValueError as e:
        raise UsageError(str(e)) from None


def _grid_or_point(cfg, key, default_grid=None):
    if cfg["grid_" + key] is not None:
        return cfg["grid_" + key]
    if cfg.get(key) is not None:
        return Grid.point(cfg[key])
    if default_grid is not None:
        return default_grid
    raise UsageError(f"need --grid-{key} or --{key}")


def cmd_sweep(cfg: dict) -> tuple[int, str]:
    require(cfg, "tau")
    check_tau(cfg["tau"])
    theta_grid = _grid_or_point(cfg, "theta")
    phi_grid = _grid_or_point(cfg, "phi")
    if cfg["pulse"] == "rect":
        delta_grid = _grid_or_point(cfg, "delta")
    else:
        delta_grid = cfg["grid_delta"] or Grid.point(0.0)
    spec = _sweep_spec(cfg, theta_grid, phi_grid, delta_grid)
    try:
        rows = [_record_row(r) for r in sweep(spec)]
    except ValueError as e:
        raise UsageError(str(e)) from None
    meta = header(cfg, "sweep", pulse_meta(spec.pulse), f"mode: {spec.mode}", f"tau: {fmt(spec.tau)}",
                  "branch: per row (pure/mixed/unphysical)")
    return EXIT_OK, render(cfg, meta, SCHEMA, rows)


def figure_rows(figure: str, cfg: dict):
    """Rows for one figure: every grid point in both modes, for each pulse strength."""
    fig = FIGURES[figure]
    tau_q = cfg["tau"] if cfg["tau"] is not None else math.pi
    check_tau(tau_q)
    omega_primes = (cfg["omega_prime_override"],) if cfg.get("omega_prime_override") else fig["omega_primes"]
    theta_grid = cfg["grid_theta"] or (
        Grid.point(fig["theta"]) if "theta" in fig else FIGURE_GRIDS["theta"])
    phis = fig.get("phi")
    if cfg["grid_phi"] is not None:
        phi_grids = [cfg["grid_phi"]]
    elif phis is None:
        phi_grids = [FIGURE_GRIDS["phi"]]
    else:
        phi_grids = [Grid.point(p) for p in (phis if isinstance(phis, tuple) else (phis,))]
    delta_grid = cfg["grid_delta"] or FIGURE_GRIDS["delta"]
    rows = []
    for op in omega_primes:
        tau = op * tau_q
        for phi_grid in phi_grids:
            specs = [SweepSpec(Rectangular(0.0), fig["param"], theta_grid, phi_grid, delta_grid, tau, m)
                     for m in ("exact", "paper")]
            for exact, paper in zip(*(sweep(s) for s in specs)):
                rows.append(_record_row(exact))
                rows.append(_record_row(paper))
    return rows, tau_q, omega_primes


def cmd_reproduce(cfg: dict) -> tuple[int, str]:
    figure = cfg["figure"]
    try:
        rows, tau_q, omega_primes = figure_rows(figure, cfg)
    except ValueError as e:
        raise UsageError(str(e)) from None
    fig = FIGURES[figure]
    meta = header(
        cfg, f"reproduce {figure}",
        "pulse: rect",
        "mode: exact and paper (two rows per grid point)",
        f"param: {fig['param']}",
        f"tau_q: {fmt(tau_q)} (omega_q*t; assumed evaluation time, default pi)",
        "omega_prime: " + ", ".join(fmt(o) for o in omega_primes),
        "tau column: Omega0*t = omega_prime * tau_q",
        "branch: per row (pure/mixed/unphysical; unphysical rows have qfi=nan)",
    )
    return EXIT_OK, render(cfg, meta, SCHEMA, rows)


def cmd_oracle_check(cfg: dict) -> tuple[int, str]:
    if cfg["step"] <= 0 or cfg["tau_max"] < 0:
        raise UsageError("--step must be > 0 and --tau-max >= 0")
    pulses = [
        Rectangular(cfg["delta"] if "delta" in cfg["explicit"] else 0.5),
        make_pulse({**cfg, "pulse": "exp", "omega_ratio": cfg["omega_ratio"]}),
        make_pulse({**cfg, "pulse": "sin2"}),
    ]
    report = oracle_check(pulses, cfg["mode"], cfg["step"], cfg["tau_max"])
    summary = report.as_dict(ORACLE_TOL)
    summary["pulses"] = [pulse_meta(p)[len("pulse: "):] for p in pulses]
    code = EXIT_OK if report.passed(ORACLE_TOL) else EXIT_CHECK
    return code, json.dumps(summary, indent=1) + "\n"


COMMANDS = {
    "evolve": cmd_evolve,
    "qfi": cmd_qfi,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = resolve(args)
        cfg["figure"] = getattr(args, "figure", None)
        if args.command == "reproduce" and "omega_prime" in cfg["explicit"]:
            cfg["omega_prime_override"] = cfg["omega_prime"]
        code, text = COMMANDS[args.command](cfg)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"pulsebloch: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"pulsebloch: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        emit(text, cfg["out"])
    except OSError as e:
        print(f"pulsebloch: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
