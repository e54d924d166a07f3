"""Command-line interface: scan, point, limits and verify subcommands.

Option resolution order: explicit flag, then a PAIRSIM_* environment
variable, then a key=value config file given with --config, then the
built-in default. Flag and config keys share names (dashes become
underscores in the file and upper case in the environment, e.g.
--g-min / g_min / PAIRSIM_G_MIN).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .entanglement import strong_coupling_limits
from .model import ModelParams
from .scan import METHODS, ScanConfig, point_report, run_scan
from .verification import run_verification

_ENV_PREFIX = "PAIRSIM_"


def _parse_level_pairs(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(","):
        k, _, kp = chunk.partition(":")
        pairs.append((int(k), int(kp)))
    return tuple(pairs)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot interpret {text!r} as a boolean")


def _read_config_file(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed config line: {raw!r}")
        values[key.strip().lower()] = value.strip()
    return values


def _resolve(args: argparse.Namespace, key: str, parse, default, file_values: dict,
             environ) -> object:
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    env = environ.get(_ENV_PREFIX + key.upper())
    if env is not None:
        return parse(env)
    if key in file_values:
        return parse(file_values[key])
    return default


def build_scan_config(args: argparse.Namespace, environ=os.environ) -> ScanConfig:
    """Assemble the scan configuration from flags, environment and config file."""
    file_values = _read_config_file(getattr(args, "config", None))

    def get(key, parse, default):
        return _resolve(args, key, parse, default, file_values, environ)

    omega = get("omega", int, 16)
    pairs = get("pairs", int, None)
    eps = get("eps", float, 1.0)
    g_min = get("g_min", float, None)
    g_max = get("g_max", float, None)
    g_points = get("g_points", int, None)
    g_log = get("g_log", _parse_bool, None)

    if g_min is None and g_max is None and g_points is None and g_log is None:
        g_values: tuple[float, ...] = ()  # ScanConfig fills the default grid
    else:
        g_min = 0.02 * eps if g_min is None else g_min
        g_max = 10.0 * omega * eps if g_max is None else g_max
        g_points = 60 if g_points is None else g_points
        if g_log is None or g_log:
            g_values = tuple(np.geomspace(g_min, g_max, g_points))
        else:
            g_values = tuple(np.linspace(g_min, g_max, g_points))

    return ScanConfig(
        omega=omega,
        pairs=pairs,
        eps=eps,
        g_values=g_values,
        level_pairs=get("pairs_of_levels", _parse_level_pairs, ()),
        methods=tuple(get("methods", lambda s: tuple(s.split(",")), METHODS)),
        out_dir=Path(get("out", str, "out")),
        make_plots=get("plots", _parse_bool, True),
        jobs=get("jobs", int, 1),
    )


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--omega", type=int, help="number of doubly degenerate levels")
    sub.add_argument("--pairs", type=int, help="number of fermion pairs N/2")
    sub.add_argument("--eps", type=float, help="level spacing")
    sub.add_argument("--pairs-of-levels", dest="pairs_of_levels",
                     type=_parse_level_pairs, metavar="K:K'[,K:K']",
                     help="level pairs for four-mode measures")
    sub.add_argument("--methods", type=lambda s: tuple(s.split(",")),
                     help="comma list from exact,bcs,pbcs")
    sub.add_argument("--config", help="key=value config file (flags win)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairsim",
        description="Exact, BCS and projected-BCS correlation measures "
                    "for the finite pairing model",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    scan = subs.add_parser("scan", help="coupling scan to CSV and SVG files")
    _add_common_flags(scan)
    scan.add_argument("--g-min", dest="g_min", type=float)
    scan.add_argument("--g-max", dest="g_max", type=float)
    scan.add_argument("--g-points", dest="g_points", type=int)
    scan.add_argument("--g-log", dest="g_log", action="store_const", const=True,
                      help="log-spaced grid (default for explicit grids)")
    scan.add_argument("--g-linear", dest="g_log", action="store_const", const=False)
    scan.add_argument("--out", help="output directory")
    scan.add_argument("--jobs", type=int, help="parallel scan workers")
    scan.add_argument("--no-plots", dest="plots", action="store_const", const=False,
                      help="skip figure generation")

    point = subs.add_parser("point", help="full report at a single coupling")
    _add_common_flags(point)
    point.add_argument("--g", type=float, required=True, help="coupling G")

    limits = subs.add_parser("limits", help="strong-coupling closed forms")
    limits.add_argument("--omega", type=int, default=16)

    verify = subs.add_parser("verify", help="run the verification suites")
    verify.add_argument("--level", choices=("fast", "full"), default="fast")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "scan":
        config = build_scan_config(args)
        result = run_scan(config)
        for method, path in result.csv_paths.items():
            print(f"wrote {path} ({len(result.rows[method])} rows)")
        for path in result.figure_paths:
            print(f"wrote {path}")
        return 0

    if args.command == "point":
        file_values = _read_config_file(args.config)
        omega = _resolve(args, "omega", int, 16, file_values, os.environ)
        params = ModelParams(
            omega=omega,
            pairs=_resolve(args, "pairs", int, None, file_values, os.environ),
            eps=_resolve(args, "eps", float, 1.0, file_values, os.environ),
            coupling=args.g,
        )
        level_pairs = _resolve(args, "pairs_of_levels", _parse_level_pairs, None,
                               file_values, os.environ)
        methods = tuple(_resolve(args, "methods", lambda s: tuple(s.split(",")),
                                 METHODS, file_values, os.environ))
        print(point_report(params, level_pairs, methods))
        return 0

    if args.command == "limits":
        rec = strong_coupling_limits(args.omega)
        print(f"strong-coupling limits, omega = {args.omega}")
        print(f"  <n n> = <n~ n~>          = {rec.nn:.10g}")
        print(f"  inner block elements     = {rec.inner:.10g}")
        print(f"  concurrence C            = {rec.concurrence:.10g}")
        print(f"  mutual information I     = {rec.mutual_information:.10g}")
        print(f"  block entropy S          = {rec.block_entropy:.10g}")
        print(f"  discord D                = {rec.discord:.10g}")
        print(f"  discord (omega -> inf)   = {rec.discord_large_omega:.10g}")
        return 0

    if args.command == "verify":
        results = run_verification(args.level)
        failed = 0
        for check in results:
            status = "PASS" if check.passed else "FAIL"
            print(f"[{status}] {check.name}")
            print(f"       tolerance: {check.tolerance}")
            print(f"       margin:    {check.margin}")
            if not check.passed:
                failed += 1
        print(f"{len(results) - failed}/{len(results)} checks passed")
        return 1 if failed else 0

    raise AssertionError(f"unhandled command {args.command}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
