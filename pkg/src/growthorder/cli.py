"""Command-line scenario runner.

Usage::

    growthorder [--config FILE] [--out DIR] [--workers N] [--format csv|csv+svg] COMMAND [options]

Parameters come from built-in defaults, then the config file section named
after the command, then command-line flags (flags win). Exit codes: 0 success,
1 validation error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import scenarios
from .competition import CompetitionSystem, Replicator
from .errors import DomainError, NumericalError, ParseError

log = logging.getLogger("growthorder")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def _floats(text: str) -> list[float]:
    items = [s.strip() for s in str(text).split(",") if s.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(s) for s in items]


def _replicators(text: str) -> list[Replicator]:
    reps = []
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 3:
            raise ValueError(f"replicator {item!r} is not LABEL:EFFICIENCY:INITIAL")
        reps.append(Replicator(parts[0], float(parts[1]), float(parts[2])))
    return reps


def _bool(text: str | bool) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# kind -> key -> (converter, default)
SCHEMAS: dict[str, dict[str, tuple[Callable[[Any], Any], Any]]] = {
    "table1": {},
    "growth": {
        "principals": (_floats, list(scenarios.DEFAULT_PRINCIPALS)),
        "orders": (_floats, list(scenarios.DEFAULT_ORDERS)),
        "rate": (float, 0.05),
        "horizon": (float, 100.0),
        "samples": (int, 201),
        "unit": (str, "EUR"),
    },
    "doubling": {
        "principals": (_floats, list(scenarios.DEFAULT_PRINCIPALS)),
        "orders": (_floats, list(scenarios.DEFAULT_ORDERS)),
        "rates": (_floats, scenarios.default_rate_grid()),
        "target_doubling": (float, 10.0),
        "unit": (str, "EUR"),
    },
    "compete": {
        "order": (float, 0.5),
        "replicators": (_replicators, "A:1:1,B:10:1"),
        "t_end": (float, 100.0),
        "tol": (float, 0.01),
    },
    "inequality": {
        "balances": (str, None),
        "rate": (float, 0.05),
        "order": (float, 0.95),
        "times": (_floats, [float(t) for t in range(0, 101, 10)]),
        "lorenz_times": (_floats, [0.0, 100.0]),
        "unit": (str, "EUR"),
    },
    "sweep": {
        "principals": (_floats, list(scenarios.DEFAULT_PRINCIPALS)),
        "orders": (_floats, list(scenarios.DEFAULT_ORDERS)),
        "rates": (_floats, [0.01, 0.05, 0.1]),
        "horizon": (float, 100.0),
        "check_integrator": (_bool, False),
    },
}

GLOBAL_DEFAULTS = {"out": "out", "workers": 1, "format": "csv+svg"}


@dataclass
class Scenario:
    name: str
    kind: str
    parameters: dict[str, Any]
    output_dir: Path


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2, which is reserved
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _add_global(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", type=Path, default=default, help="INI file with one section per command")
    parser.add_argument("--out", default=default, help="output directory (default: out)")
    parser.add_argument("--workers", type=int, default=default, help="parallel workers for sweeps")
    parser.add_argument("--format", choices=("csv", "csv+svg"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="growthorder", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    _add_global(parser, suppress=False)
    common = _Parser(add_help=False)
    _add_global(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("table1", parents=[common], help="effective principal table")

    p = sub.add_parser("growth", parents=[common], help="growth curves per principal")
    p.add_argument("--principals")
    p.add_argument("--orders")
    p.add_argument("--rate")
    p.add_argument("--horizon")
    p.add_argument("--samples")
    p.add_argument("--unit")

    p = sub.add_parser("doubling", parents=[common], help="doubling time against interest rate")
    p.add_argument("--principals")
    p.add_argument("--orders")
    p.add_argument("--rates")
    p.add_argument("--target-doubling", dest="target_doubling")
    p.add_argument("--unit")

    p = sub.add_parser("compete", parents=[common], help="flow-reactor competition")
    p.add_argument("--order")
    p.add_argument("--replicators", help="comma-separated LABEL:EFFICIENCY:INITIAL")
    p.add_argument("--t-end", dest="t_end")
    p.add_argument("--tol")

    p = sub.add_parser("inequality", parents=[common], help="Gini trajectory and Lorenz curves")
    p.add_argument("--balances", help="CSV with a single 'balance' column")
    p.add_argument("--rate")
    p.add_argument("--order")
    p.add_argument("--times")
    p.add_argument("--lorenz-times", dest="lorenz_times")
    p.add_argument("--unit")

    p = sub.add_parser("sweep", parents=[common], help="grid of growth-law evaluations")
    p.add_argument("--principals")
    p.add_argument("--orders")
    p.add_argument("--rates")
    p.add_argument("--horizon")
    p.add_argument("--check-integrator", dest="check_integrator", action="store_const", const="true")
    return parser


def _read_config(path: Path | None) -> configparser.ConfigParser:
    config = configparser.ConfigParser(interpolation=None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                config.read_file(fh)
        except configparser.Error as exc:
            raise ParseError(str(exc), path=str(path)) from None
    return config


def resolve(args: argparse.Namespace) -> tuple[Scenario, dict[str, Any]]:
    """Merge defaults, config file and flags into a validated scenario."""
    kind = args.command
    config = _read_config(args.config)
    settings: dict[str, Any] = dict(GLOBAL_DEFAULTS)
    if config.has_section("global"):
        for key, value in config.items("global"):
            if key not in GLOBAL_DEFAULTS:
                raise ParseError(f"unknown key {key!r} in [global]", path=str(args.config))
            settings[key] = value
    for key in GLOBAL_DEFAULTS:
        if getattr(args, key, None) is not None:
            settings[key] = getattr(args, key)

    schema = SCHEMAS[kind]
    raw: dict[str, Any] = {key: default for key, (_, default) in schema.items()}
    if config.has_section(kind):
        for key, value in config.items(kind):
            if key not in schema:
                raise ParseError(f"unknown key {key!r} in [{kind}]", path=str(args.config))
            raw[key] = value
    for key in schema:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value

    params: dict[str, Any] = {}
    for key, (convert, _) in schema.items():
        value = raw[key]
        if value is None:
            raise DomainError(f"{kind}: missing required parameter {key!r}")
        try:
            params[key] = value if not isinstance(value, str) else convert(value)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{kind}: bad value for {key!r}: {exc}") from None

    try:
        settings["workers"] = int(settings["workers"])
    except ValueError:
        raise DomainError(f"workers must be an integer, got {settings['workers']!r}") from None
    if settings["workers"] < 1:
        raise DomainError("workers must be >= 1")
    if settings["format"] not in ("csv", "csv+svg"):
        raise DomainError(f"format must be csv or csv+svg, got {settings['format']!r}")
    return Scenario(kind, kind, params, Path(settings["out"])), settings


def execute(scenario: Scenario, settings: dict[str, Any]) -> scenarios.Artifact:
    out = scenario.output_dir
    out.mkdir(parents=True, exist_ok=True)
    plots = settings["format"] == "csv+svg"
    p = scenario.parameters
    if scenario.kind == "table1":
        return scenarios.run_table1(out)
    if scenario.kind == "growth":
        return scenarios.run_growth_curves(out, p["principals"], p["orders"], p["rate"],
                                           p["horizon"], p["samples"], p["unit"], plots)
    if scenario.kind == "doubling":
        return scenarios.run_doubling_curves(out, p["principals"], p["orders"], p["rates"],
                                             p["target_doubling"], p["unit"], plots)
    if scenario.kind == "compete":
        system = CompetitionSystem(p["replicators"], p["order"])
        return scenarios.run_competition(out, system, p["t_end"], p["tol"], plots)
    if scenario.kind == "inequality":
        return scenarios.run_inequality(out, p["balances"], p["rate"], p["order"], p["times"],
                                        p["lorenz_times"], p["unit"], plots)
    if scenario.kind == "sweep":
        return scenarios.run_sweep(out, p["principals"], p["orders"], p["rates"], p["horizon"],
                                   p["check_integrator"], settings["workers"])
    raise DomainError(f"unknown scenario kind {scenario.kind!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already printed
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        scenario, settings = resolve(args)
        artifact = execute(scenario, settings)
    except (DomainError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in artifact.paths:
        print(path)
    report = artifact.report
    if report is not None:
        print(f"outcome: {report.outcome.kind} {' '.join(report.outcome.winners)}")
        for row in report.rows:
            status = "pass" if row.passed else "FAIL"
            print(f"  {row.label}: predicted {row.predicted:.6g} simulated {row.simulated:.6g} {status}")
        print(f"  drift {report.drift:.3g} converged={report.converged}")
    for err in artifact.errors:
        print(f"numerical failure: {err}", file=sys.stderr)
    return EXIT_NUMERICAL if artifact.errors else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
