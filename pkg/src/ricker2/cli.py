"""Command-line frontend: simulate | factor | map | scan | verify.

Every output file is a comma-separated CSV with '#'-prefixed header
comments carrying the full effective configuration (defaults
materialized), 17-significant-digit floats (round-trip exact for
doubles), and LF line endings.  Identical invocations produce
byte-identical files; pass --timestamp to embed a wall-clock line.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 numerical error (orbit left the representable range).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import verify as verify_mod
from .analysis import ScanGrid, basin_scan
from .core import iterate_direct, make_cycle
from .errors import NonFiniteState, RickerError
from .factor import classify, for_initial, iterate_factored, t_closed_form
from .maps import build_return_map, find_periodic_points
from . import kernels


class UsageError(Exception):
    """Bad flags or config file contents (exit code 2)."""


def _fmt(v: float) -> str:
    return "%.17g" % v


def _parse_cycle(text: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"--a: {exc}") from exc
    if not values:
        raise UsageError("--a: need at least one value")
    return make_cycle(values)


def _parse_init(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(
            f"--init expects 'x_prev:x_curr', got {text!r}"
        )
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"--init: {exc}") from exc


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range expects 'lo:hi:count', got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"range: {exc}") from exc


DEFAULTS = {
    "simulate": {
        "steps": 200, "method": "direct", "xprev": 1.0, "prefix": "orbit",
    },
    "factor": {"steps": 64, "t0": 1.0, "prefix": "factors"},
    "map": {
        "omega": "1", "grid": 2048, "xprev": 1.0, "samples": 512,
        "prefix": "map",
    },
    "scan": {
        "burn_in": 20_000, "window": 600, "max_period": 100,
        "tol": 1e-8, "match_tol": 1e-6, "prefix": "basin",
    },
}


def _merge_config(args: argparse.Namespace, command: str) -> dict:
    """flags > config-file keys > defaults; returns the effective dict."""
    cfg = dict(DEFAULTS.get(command, {}))
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"--config {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError(f"--config {path}: expected a JSON object")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        cfg[key] = value
    return cfg


def _header_lines(command: str, cfg: dict, extra: dict,
                  timestamp: bool) -> list[str]:
    shown = {k: v for k, v in cfg.items() if k not in ("out", "timestamp")}
    lines = [
        f"# ricker2 {command}",
        f"# config: {json.dumps(shown, sort_keys=True, default=str)}",
    ]
    for key in sorted(extra):
        lines.append(f"# {key}: {extra[key]}")
    if timestamp:
        lines.append(f"# generated: {time.strftime('%Y-%m-%dT%H:%M:%S')}")
    return lines


def _write_csv(path: Path, header_lines: list[str], columns: list[str],
               rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _initial_pairs(cfg: dict) -> list[tuple[float, float]]:
    inits = cfg.get("init")
    if inits:
        if isinstance(inits, str):
            inits = [inits]
        return [_parse_init(t) if isinstance(t, str) else tuple(t)
                for t in inits]
    if cfg.get("t0") is not None and "xprev" in cfg:
        x_prev = float(cfg["xprev"])
        t0 = float(cfg["t0"])
        return [(x_prev, t0 * x_prev * math.exp(-x_prev))]
    raise UsageError("need --init x_prev:x_curr (repeatable) or --t0")


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, "simulate")
    if "a" not in cfg:
        raise UsageError("simulate needs --a")
    cycle = _parse_cycle(cfg["a"]) if isinstance(cfg["a"], str) else \
        make_cycle(cfg["a"])
    pairs = _initial_pairs(cfg)
    steps = int(cfg["steps"])
    out_dir = Path(cfg.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    method = cfg["method"]
    if method not in ("direct", "factored"):
        raise UsageError(f"--method must be direct|factored, got {method!r}")

    for i, pair in enumerate(pairs):
        if method == "factored":
            trace = iterate_factored(cycle, pair, steps)
        else:
            trace = iterate_direct(cycle, pair, steps)
        init = trace.initial
        fs = None
        if init.t0 is not None:
            fs = classify(cycle, init.t0)
        extra = {"sigma": _fmt(cycle.sigma)}
        if fs is not None:
            extra["factor_class"] = fs.parity_class.value
            extra["t0"] = _fmt(init.t0)
        header = _header_lines(
            "simulate", {**cfg, "init": f"{init.x_prev}:{init.x_curr}"},
            extra, bool(cfg.get("timestamp")),
        )
        rows = []
        for n in range(-1, steps + 1):
            x = trace.value_at(n)
            parity = "even" if n % 2 == 0 else "odd"
            rows.append((str(n), _fmt(x), parity, trace.source.value))
        name = f"{cfg['prefix']}_{i:03d}"
        _write_csv(out_dir / f"{name}.csv", header,
                   ["n", "x", "parity", "source"], rows)
        meta = {
            "command": "simulate",
            "config": {k: v for k, v in cfg.items() if k != "out"},
            "initial": [init.x_prev, init.x_curr],
            "sigma": cycle.sigma,
            "factor_class": fs.parity_class.value if fs else None,
            "t0": init.t0,
        }
        (out_dir / f"{name}.meta.json").write_text(
            json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n"
        )
        print(f"wrote {out_dir / (name + '.csv')}")
    return 0


def cmd_factor(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, "factor")
    if "a" not in cfg:
        raise UsageError("factor needs --a")
    cycle = _parse_cycle(cfg["a"]) if isinstance(cfg["a"], str) else \
        make_cycle(cfg["a"])
    t0 = float(cfg["t0"])
    fs = classify(cycle, t0)
    steps = int(cfg["steps"])
    out_dir = Path(cfg.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"sigma = {_fmt(cycle.sigma)}")
    print(f"class = {fs.parity_class.value}")
    if fs.is_periodic:
        print(f"q = {fs.q}")
        print("t-cycle = " + ", ".join(_fmt(v) for v in fs.cycle_values))
    else:
        print(f"q = none (unbounded); log-drift per 2 steps = "
              f"{_fmt(cycle.sigma)}")
    extra = {"sigma": _fmt(cycle.sigma), "factor_class": fs.parity_class.value}
    if fs.is_periodic:
        extra["q"] = str(fs.q)
    header = _header_lines("factor", cfg, extra, bool(cfg.get("timestamp")))
    rows = [(str(n), _fmt(t_closed_form(fs, n))) for n in range(steps + 1)]
    path = out_dir / f"{cfg['prefix']}.csv"
    _write_csv(path, header, ["n", "t"], rows)
    print(f"wrote {path}")
    return 0


def cmd_map(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, "map")
    if "a" not in cfg:
        raise UsageError("map needs --a")
    cycle = _parse_cycle(cfg["a"]) if isinstance(cfg["a"], str) else \
        make_cycle(cfg["a"])
    pairs = _initial_pairs(cfg)
    fs = for_initial(cycle, pairs[0])
    cm = build_return_map(fs)  # NotPeriodicFactor for unbounded classes
    out_dir = Path(cfg.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    omegas = sorted(
        {int(tok) for tok in str(cfg["omega"]).split(",") if tok.strip()}
    )
    beta = cycle.bound
    xmax = float(cfg.get("xmax", beta))
    xmin = float(cfg.get("xmin", 1e-6))
    xs = np.linspace(xmin, xmax, int(cfg["samples"]))
    cols = {"x": xs}
    for k in (1, 2, 3):
        cols[f"f{k}"] = kernels.f_pow_grid(cm.factor_cycle, xs, k)

    points = []
    chaos = False
    for omega in omegas:
        pts = find_periodic_points(
            cm, omega, interval=(xmin, xmax), grid_size=int(cfg["grid"])
        )
        if omega == 3 and pts:
            chaos = True
        points.extend(pts)
    extra = {
        "sigma": _fmt(cycle.sigma),
        "factor_class": fs.parity_class.value,
        "q": str(cm.q),
        "t0": _fmt(fs.t0),
        "chaos_flag": str(chaos).lower(),
    }
    header = _header_lines("map", cfg, extra, bool(cfg.get("timestamp")))
    curve_rows = [
        tuple(_fmt(cols[c][i]) for c in ("x", "f1", "f2", "f3"))
        for i in range(len(xs))
    ]
    curve_path = out_dir / f"{cfg['prefix']}.csv"
    _write_csv(curve_path, header, ["x", "f1", "f2", "f3"], curve_rows)
    point_rows = [
        (str(p.omega), _fmt(p.x), _fmt(p.multiplier), p.stability)
        for p in points
    ]
    points_path = out_dir / f"{cfg['prefix']}_points.csv"
    _write_csv(points_path, header,
               ["omega", "x", "multiplier", "stability"], point_rows)
    for p in points:
        print(f"omega={p.omega} x={_fmt(p.x)} multiplier={_fmt(p.multiplier)}"
              f" {p.stability}")
    if chaos:
        print("chaos flag: period-3 points found")
    print(f"wrote {curve_path} and {points_path}")
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    cfg = _merge_config(args, "scan")
    for key in ("a", "xprev_range", "xcurr_range"):
        if key not in cfg:
            raise UsageError(f"scan needs --{key.replace('_', '-')}")
    cycle = _parse_cycle(cfg["a"]) if isinstance(cfg["a"], str) else \
        make_cycle(cfg["a"])
    grid = ScanGrid(
        x_prev_range=_parse_range(str(cfg["xprev_range"])),
        x_curr_range=_parse_range(str(cfg["xcurr_range"])),
        cycle=cycle,
        burn_in=int(cfg["burn_in"]),
        window=int(cfg["window"]),
        max_period=int(cfg["max_period"]),
        tol=float(cfg["tol"]),
        match_tol=float(cfg["match_tol"]),
    )
    result = basin_scan(grid)
    out_dir = Path(cfg.get("out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    extra = {"sigma": _fmt(cycle.sigma), "n_attractors": str(len(result.table))}
    header = _header_lines("scan", cfg, extra, bool(cfg.get("timestamp")))
    cell_rows = [
        (
            _fmt(c.initial[0]), _fmt(c.initial[1]), str(c.cycle_id),
            "" if c.report.period is None else str(c.report.period),
        )
        for c in result.cells
    ]
    basin_path = out_dir / f"{cfg['prefix']}.csv"
    _write_csv(basin_path, header,
               ["x_prev", "x_curr", "cycle_id", "period"], cell_rows)
    table_rows = [
        (
            str(e.cycle_id), e.classification.value,
            "" if e.period is None else str(e.period),
            "" if e.values is None else ";".join(_fmt(v) for v in e.values),
        )
        for e in result.table
    ]
    table_path = out_dir / f"{cfg['prefix']}_cycles.csv"
    _write_csv(table_path, header,
               ["cycle_id", "classification", "period", "values"], table_rows)
    print(f"{len(result.table)} distinct attractors over "
          f"{len(result.cells)} cells")
    print(f"wrote {basin_path} and {table_path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    only = None
    if args.only:
        only = [tok for item in args.only for tok in item.split(",")]
    try:
        results = verify_mod.run(only=only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    print(verify_mod.format_report(results))
    if args.json:
        payload = [r.to_record() for r in results]
        Path(args.json).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n"
        )
        print(f"wrote {args.json}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricker2",
        description="Periodically forced second-order Ricker equation: "
        "simulation, factor analysis, return maps, basin scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--a", help="comma-separated forcing cycle, e.g. "
                       "1,1.9,0.8")
        p.add_argument("--config", help="JSON config file (flat keys "
                       "mirroring the flag names)")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--timestamp", action="store_true", default=None,
                       help="embed a wall-clock line in headers")

    p_sim = sub.add_parser("simulate", help="iterate orbits to CSV")
    add_common(p_sim)
    p_sim.add_argument("--init", action="append",
                       help="initial pair x_prev:x_curr (repeatable)")
    p_sim.add_argument("--t0", type=float,
                       help="factor seed; sets x_curr = t0*x_prev*e^{-x_prev}")
    p_sim.add_argument("--xprev", type=float, help="x_prev used with --t0")
    p_sim.add_argument("--steps", type=int, help="number of samples")
    p_sim.add_argument("--method", choices=("direct", "factored"))
    p_sim.add_argument("--prefix", help="output file prefix")

    p_fac = sub.add_parser("factor", help="classify the factor sequence")
    add_common(p_fac)
    p_fac.add_argument("--t0", type=float, help="factor seed t0 > 0")
    p_fac.add_argument("--steps", type=int, help="factor values to emit")
    p_fac.add_argument("--prefix", help="output file prefix")

    p_map = sub.add_parser("map", help="return map curves and periodic "
                           "points")
    add_common(p_map)
    p_map.add_argument("--init", action="append",
                       help="initial pair fixing the factor seed")
    p_map.add_argument("--t0", type=float)
    p_map.add_argument("--xprev", type=float)
    p_map.add_argument("--omega", help="comma list of periods to search")
    p_map.add_argument("--grid", type=int, help="root-search grid size")
    p_map.add_argument("--samples", type=int, help="curve sample count")
    p_map.add_argument("--xmin", type=float)
    p_map.add_argument("--xmax", type=float)
    p_map.add_argument("--prefix", help="output file prefix")

    p_scan = sub.add_parser("scan", help="basin-of-attraction grid scan")
    add_common(p_scan)
    p_scan.add_argument("--xprev-range", dest="xprev_range",
                        help="lo:hi:count")
    p_scan.add_argument("--xcurr-range", dest="xcurr_range",
                        help="lo:hi:count")
    p_scan.add_argument("--burn-in", dest="burn_in", type=int)
    p_scan.add_argument("--window", type=int)
    p_scan.add_argument("--max-period", dest="max_period", type=int)
    p_scan.add_argument("--tol", type=float)
    p_scan.add_argument("--match-tol", dest="match_tol", type=float)
    p_scan.add_argument("--prefix", help="output file prefix")

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--only", action="append",
                       help="criterion names (comma-separable; peven/podd "
                       "select the even/odd-period groups)")
    p_ver.add_argument("--json", help="write the JSON report here")
    return parser


_COMMANDS = {
    "simulate": cmd_simulate,
    "factor": cmd_factor,
    "map": cmd_map,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonFiniteState as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (RickerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:  # console-script target
    sys.exit(main())


if __name__ == "__main__":
    entry()
