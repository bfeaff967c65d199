"""Command-line entry point.

Subcommands: ``efficiency`` (analytic measurement-efficiency tables),
``sweep`` (Monte-Carlo curves only), ``threshold`` (curves plus crossing
estimate) and ``verify`` (stabilizer-algebra checks).  Exit codes: 0 success,
1 invalid parameters or configuration, 2 runtime failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .config import RunConfig, format_config, load_config, parse_eta_grid
from .errors import ValidationError
from .gsm import Architecture, preset_table, table_to_csv, table_to_text
from .lattice import build_network
from .report import emit_results, sweep_tag
from .syndrome import build_syndrome_graphs, export_edge_list
from .threshold import estimate_threshold, sweep
from .verify import run_verification

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="flat key = value config file")
    parser.add_argument("--print-config", action="store_true",
                        help="print the resolved configuration and exit")
    parser.add_argument("--out", dest="out_dir", metavar="DIR",
                        help="output directory (default: $GHZFUSION_OUTDIR or ./out)")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--workers", type=int, help="worker processes (0 = all cores)")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--arch", dest="architecture", choices=["minimal", "cyclic"])
    parser.add_argument("--protocol", choices=["static", "active"])
    parser.add_argument("--n", type=int, help="outer repetition size")
    parser.add_argument("--m", type=int, help="inner block size")
    parser.add_argument("--j", type=int, help="feed-forward depth (active only)")
    parser.add_argument("--convention", choices=["hadamard", "shor", "auto"])
    parser.add_argument("--distances", help="comma list, e.g. 9,11,13")
    parser.add_argument("--eta-grid", dest="eta_grid",
                        help="comma list or start:stop:count")
    parser.add_argument("--eta-center", dest="eta_center", type=float,
                        help="centre of an auto-generated grid")
    parser.add_argument("--eta-span", dest="eta_span", type=float,
                        help="fractional half-width of the auto grid (default 0.3)")
    parser.add_argument("--eta-points", dest="eta_points", type=int,
                        help="points in the auto grid (default 9)")
    parser.add_argument("--samples", type=int, help="Monte-Carlo samples per point")
    parser.add_argument("--correlation", choices=["independent", "per-bsm"])
    parser.add_argument("--hub-rotation", dest="hub_rotation", type=int,
                        help="rotate the star-hub convention (0..3)")
    parser.add_argument("--bootstrap", type=int, help="bootstrap resamples")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzfusion",
        description="GHZ-measurement fusion architectures: efficiency tables, "
        "erasure-percolation Monte Carlo, and loss thresholds.",
    )
    parser.add_argument("--version", action="version", version=f"ghzfusion {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eff = sub.add_parser("efficiency", help="emit measurement-efficiency tables")
    p_eff.add_argument("--table", choices=["I", "II", "III", "IV"],
                       help="preset table (I static/cyclic, II static/minimal, "
                       "III active/cyclic, IV active/minimal)")
    p_eff.add_argument("--floor", type=float, help="omit entries below this value")
    _add_common(p_eff)

    for name, help_text in (
        ("sweep", "run Monte-Carlo curves over a loss-rate grid"),
        ("threshold", "run curves and estimate the threshold crossing"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_model_flags(p)
        if name == "sweep":
            p.add_argument("--dump-graphs", dest="dump_graphs", action="store_const",
                           const=True, help="export syndrome-graph edge lists")
        _add_common(p)

    p_ver = sub.add_parser("verify", help="stabilizer checks of the architecture algebra")
    p_ver.add_argument("--arch", dest="architecture",
                       choices=["minimal", "cyclic", "both"], default="both")
    p_ver.add_argument("--json", action="store_true", help="emit JSON instead of text")
    _add_common(p_ver)

    return parser


_CONFIG_KEYS = (
    "architecture", "protocol", "n", "m", "j", "convention", "distances",
    "eta_grid", "eta_center", "eta_span", "eta_points", "samples", "seed",
    "workers", "correlation", "hub_rotation", "out_dir", "table", "floor",
    "dump_graphs", "bootstrap",
)


def _overrides_from_args(args: argparse.Namespace) -> dict:
    from .bsm import Convention, Protocol
    from .erasure import CorrelationMode

    raw = {key: getattr(args, key, None) for key in _CONFIG_KEYS}
    convert = {
        "architecture": Architecture,
        "protocol": Protocol,
        "convention": lambda v: None if v == "auto" else Convention(v),
        "correlation": CorrelationMode,
        "distances": lambda v: tuple(int(x) for x in v.replace(",", " ").split()),
        "eta_grid": parse_eta_grid,
    }
    out = {}
    for key, value in raw.items():
        if value is None:
            continue  # flag not given; file value or default applies
        out[key] = convert[key](value) if key in convert and isinstance(value, str) else value
    return out


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    return load_config(getattr(args, "config", None), _overrides_from_args(args))


def _cmd_efficiency(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    if args.print_config:
        print(format_config(config), end="")
        return EXIT_OK
    table = preset_table(config.table, floor=config.floor)
    out_dir = config.resolved_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"efficiency_table_{config.table}.csv"
    csv_path.write_text(table_to_csv(table))
    print(table_to_text(table))
    print(f"wrote {csv_path}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, with_threshold: bool) -> int:
    config = _resolve_config(args)
    if args.print_config:
        print(format_config(config), end="")
        return EXIT_OK
    out_dir = config.resolved_out_dir()
    started = time.time()
    if with_threshold:
        result = estimate_threshold(config.sweep_config(), n_bootstrap=config.bootstrap)
        paths = emit_results(out_dir, [result.sweep], [result])
        print(
            f"threshold eta_c = {result.crossing.eta_c:.6g} "
            f"+- {result.crossing.sigma:.2g} "
            f"(95% CI [{result.crossing.ci_low:.6g}, {result.crossing.ci_high:.6g}])"
        )
    else:
        result = sweep(config.sweep_config())
        paths = emit_results(out_dir, [result])
        if config.dump_graphs:
            for d in config.distances:
                network = build_network(d, config.architecture)
                bundle = build_syndrome_graphs(
                    network, config.architecture, config.hub_rotation
                )
                for graph in bundle.graphs():
                    path = out_dir / f"graph_{sweep_tag(result)}_d{d}_{graph.name}.txt"
                    with path.open("w") as stream:
                        export_edge_list(graph, stream)
                    paths.append(path)
    elapsed = time.time() - started
    print(f"seed {config.seed}, version {__version__}, wall time {elapsed:.1f}s")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.architecture == "both":
        architectures = (Architecture.MINIMAL, Architecture.CYCLIC)
    else:
        architectures = (Architecture(args.architecture),)
    reports = run_verification(architectures)
    if args.json:
        print(json.dumps([r.to_dict() for r in reports], indent=2))
    else:
        for report in reports:
            print(report.to_text())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_RUNTIME


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "efficiency":
            return _cmd_efficiency(args)
        if args.command == "sweep":
            return _cmd_sweep(args, with_threshold=False)
        if args.command == "threshold":
            return _cmd_sweep(args, with_threshold=True)
        if args.command == "verify":
            return _cmd_verify(args)
        parser.error(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - mapped to a stable exit code
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
