"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 accuracy error.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys

from . import __version__
from .bidiff import bidiff_coefficients
from .engine import star, total_symbol_closed
from .errors import (
    BadManifest,
    BadPotential,
    DegenerateMetric,
    DimensionMismatch,
    InsufficientAccuracy,
    StarError,
)
from .kaehler import chart_build
from .manifest import Manifest, parse_manifest
from .render import render_report, series_block, series_pretty
from .symbols import SymbolSeries
from .verify import (
    Report,
    random_function,
    verify_associativity,
    verify_filtration,
    verify_lemmas,
    verify_structure,
    verify_symbol_conditions,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ACCURACY = 0, 1, 2, 3
CHECKS = ("conditions", "assoc", "lemmas", "filtration", "structure")
DEFAULT_CHECKS = "conditions,assoc,lemmas,filtration"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stdout.write(render_report(_error_obj("UsageError", message), "json"))
        self.exit(EXIT_INPUT)


def _error_obj(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--manifest", required=True, metavar="PATH")
    p.add_argument("--nu-order", type=int, metavar="N", help="override the manifest nu-truncation")
    p.add_argument("--jet-accuracy", type=int, metavar="T",
                   help="override the jet accuracy (derived when omitted)")
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepstar", description=(
        "Exact total symbols and star products with separation of variables."))
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = sub.add_parser("symbol", parents=[common], help="total symbol of L_f")
    p.add_argument("--function", required=True, metavar="NAME")

    p = sub.add_parser("star", parents=[common], help="star product f * g")
    p.add_argument("-f", required=True, metavar="NAME")
    p.add_argument("-g", required=True, metavar="NAME")

    p = sub.add_parser("ctable", parents=[common], help="bidifferential coefficients C_r")
    p.add_argument("--max-deg", type=int, metavar="d")

    # -h names the third function, so only --help prints usage here
    p = sub.add_parser("verify", parents=[common], add_help=False,
                       help="run exact verification checks")
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("--checks", default=DEFAULT_CHECKS, metavar="LIST")
    p.add_argument("--seed", type=int, default=0, metavar="UINT")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("-f", metavar="NAME")
    p.add_argument("-g", metavar="NAME")
    p.add_argument("-h", dest="h_name", metavar="NAME")
    return parser


def _series(manifest: Manifest, name: str) -> SymbolSeries:
    return SymbolSeries.function(manifest.dimension, manifest.function(name))


def _chart(manifest: Manifest, args):
    n = args.nu_order if args.nu_order is not None else manifest.nu_truncation
    if n < 0:
        raise BadManifest("--nu-order must be non-negative")
    t = manifest.resolved_jet_accuracy(n, args.jet_accuracy)
    return chart_build(manifest.build_potential(), n, t)


def _header(command: str, chart) -> dict:
    return {"command": command, "dimension": chart.dim, "nu_truncation": chart.nu_truncation,
            "jet_accuracy": chart.jet_accuracy}


def cmd_symbol(manifest, args) -> tuple:
    chart = _chart(manifest, args)
    F = total_symbol_closed(chart, _series(manifest, args.function))
    out = _header("symbol", chart)
    out["function"] = args.function
    out.update(series_block(F))
    out["pretty"] = [f"tau(L_{args.function}), nu-order {chart.nu_truncation}, "
                     f"jet accuracy {chart.jet_accuracy}:"] + series_pretty(F)
    return out, EXIT_OK


def cmd_star(manifest, args) -> tuple:
    chart = _chart(manifest, args)
    prod = star(chart, _series(manifest, args.f), _series(manifest, args.g))
    out = _header("star", chart)
    out["f"], out["g"] = args.f, args.g
    out.update(series_block(prod, fibre=False))
    out["pretty"] = [f"{args.f} * {args.g}, nu-order {chart.nu_truncation}, "
                     f"jet accuracy {chart.jet_accuracy}:"] + series_pretty(prod)
    return out, EXIT_OK


def cmd_ctable(manifest, args) -> tuple:
    chart = _chart(manifest, args)
    table = bidiff_coefficients(chart, args.max_deg)
    out = _header("ctable", chart)
    out["max_deg"] = args.max_deg if args.max_deg is not None else chart.nu_truncation
    out["entries"] = table.to_json()
    pretty = [f"C_r(f, g) = sum c * dbar^a f * d^b g, nu-order {chart.nu_truncation}:"]
    for r, rows in table.entries.items():
        for a, b, c in rows:
            pretty.append(f"  r={r} a={list(a)} b={list(b)}: {c}")
    out["pretty"] = pretty
    return out, EXIT_OK


def _triples(manifest: Manifest, args, rng: random.Random):
    dim = manifest.dimension
    names = sorted(manifest.functions)
    if args.f or args.g or args.h_name:
        picked = [args.f or names[0], args.g or names[0], args.h_name or names[0]]
        yield "/".join(picked), [_series(manifest, n) for n in picked]
    elif names:
        cyc = list(itertools.islice(itertools.cycle(names), 3))
        yield "/".join(cyc), [_series(manifest, n) for n in cyc]
    for i in range(3):
        yield f"random#{i}", [random_function(dim, rng) for _ in range(3)]


def cmd_verify(manifest, args) -> tuple:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise BadManifest(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    chart = _chart(manifest, args)
    rng = random.Random(args.seed)
    report = Report("verify")
    names = sorted(manifest.functions)
    sections = []
    for check in checks:
        part = Report(check)
        if check in ("conditions", "filtration"):
            for name in names:
                f = _series(manifest, name)
                F = total_symbol_closed(chart, f)
                sub = verify_symbol_conditions(chart, F, f) if check == "conditions" \
                    else verify_filtration(chart, F)
                for c in sub.checks:
                    c.detail = {"function": name, **c.detail}
                part.extend(sub)
        elif check == "assoc":
            for label, (f, g, h) in _triples(manifest, args, rng):
                sub = verify_associativity(chart, f, g, h)
                for c in sub.checks:
                    c.detail = {"triple": label, **c.detail}
                part.extend(sub)
        elif check == "lemmas":
            part.extend(verify_lemmas(chart, args.samples, args.seed))
        elif check == "structure":
            for i in range(3):
                f, g, h = (random_function(chart.dim, rng) for _ in range(3))
                part.extend(verify_structure(chart, f, g, h, i))
        report.extend(part)
        sections.append(part)
    out = _header("verify", chart)
    out["seed"] = args.seed
    out["passed"] = report.passed
    out["sections"] = [s.to_json() for s in sections]
    pretty = []
    for s in sections:
        for c in s.checks:
            where = ", ".join(f"{k}={c.detail[k]}" for k in ("function", "triple", "l", "sample")
                              if k in c.detail)
            pretty.append(f"[{'PASS' if c.passed else 'FAIL'}] {s.title}: {c.name}"
                          + (f" ({where})" if where else ""))
    pretty.append("ALL PASS" if report.passed else "FAILURES PRESENT")
    out["pretty"] = pretty
    return out, EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"symbol": cmd_symbol, "star": cmd_star, "ctable": cmd_ctable, "verify": cmd_verify}


def run_command(cmd: str, manifest: Manifest, args) -> tuple:
    """Dispatch a subcommand; returns (result dict, exit code)."""
    return COMMANDS[cmd](manifest, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    try:
        try:
            with open(args.manifest, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise BadManifest(f"cannot read manifest: {exc}") from exc
        manifest = parse_manifest(text)
        result, code = run_command(args.command, manifest, args)
    except InsufficientAccuracy as exc:
        sys.stdout.write(render_report(_error_obj("InsufficientAccuracy", str(exc)), "json"))
        return EXIT_ACCURACY
    except (BadManifest, BadPotential, DegenerateMetric, DimensionMismatch) as exc:
        sys.stdout.write(render_report(_error_obj(type(exc).__name__, str(exc)), "json"))
        return EXIT_INPUT
    except StarError as exc:
        sys.stdout.write(render_report(_error_obj(type(exc).__name__, str(exc)), "json"))
        return EXIT_INPUT
    sys.stdout.write(render_report(result, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
