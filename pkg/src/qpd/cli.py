"""Command-line front end: ``qpd series|verify|mine|oracle|identities|conjectures``.

Exit status: 0 success, 1 a proven claim or identity failed, 2 usage or
input error, 3 a conjecture was refuted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .counters import odd_multiplicity_count, oracle_pd, oracle_pdk
from .identities import EvaluationError, ParseError, check_identity, evaluate, load_ledger, parse_expression
from .verify import (
    RegistryError,
    check_conjectures,
    find_claims,
    load_registry,
    mine_congruences,
    verify_registry,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUTED = 0, 1, 2, 3

# option name -> converter, for config files
CONFIG_KEYS = {
    "precision": int,
    "mod": int,
    "k": int,
    "m": int,
    "n_max": int,
    "a_max": int,
    "min_support": int,
    "jobs": int,
    "format": str,
    "out": str,
    "registry": str,
    "ledger": str,
    "extended": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}

DEFAULTS = {"jobs": 1, "min_support": 20, "extended": False}


class UsageError(Exception):
    pass


def read_config(path: str | Path) -> dict:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config entry {line!r}")
        try:
            out[key] = CONFIG_KEYS[key](value.strip())
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return out


def _apply_config(args: argparse.Namespace) -> None:
    path = args.config or os.environ.get("QPD_CONFIG")
    config = read_config(path) if path else {}
    for key, value in config.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _common(p: argparse.ArgumentParser, fmt_default: str) -> None:
    p.add_argument("--format", choices=("json", "csv", "plain"), default=None, help=f"default {fmt_default}")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--config", default=None, help="key=value config file (also $QPD_CONFIG)")
    p.set_defaults(format_default=fmt_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpd", description="Partitions with designated summands as q-series.")
    parser.add_argument("--version", action="version", version=f"qpd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="expand an expression")
    p.add_argument("expr")
    p.add_argument("-N", "--precision", type=int, default=None)
    p.add_argument("--mod", type=int, default=None)
    _common(p, "plain")

    p = sub.add_parser("verify", help="check registry claims over a range")
    p.add_argument("ids", nargs="+", help="claim ids or 'all'")
    p.add_argument("--n-max", type=int, default=None, help="largest progression argument (default: per claim)")
    p.add_argument("--extended", action="store_const", const=True, default=None, help="widen parameter caps")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--registry", default=None)
    p.add_argument("--timings", action="store_true", help="include elapsed times (breaks byte-identical output)")
    _common(p, "json")

    p = sub.add_parser("mine", help="search progressions where PD_k vanishes mod m")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("-m", type=int, default=None)
    p.add_argument("--a-max", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--min-support", type=int, default=None)
    p.add_argument("--minimal", action="store_true", help="drop families implied by coarser ones")
    p.add_argument("--registry", default=None)
    _common(p, "csv")

    p = sub.add_parser("oracle", help="count by enumeration")
    p.add_argument("kind", choices=("pd", "pdk", "oddmult"))
    p.add_argument("values", nargs="+", type=int, help="n, or k n for pdk")
    _common(p, "plain")

    p = sub.add_parser("identities", help="check the identity ledger")
    p.add_argument("ids", nargs="*", help="ledger ids (default: all)")
    p.add_argument("-N", "--precision", type=int, default=None, help="default: 500 exact, 1000 modular")
    p.add_argument("--ledger", default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--timings", action="store_true")
    _common(p, "plain")

    p = sub.add_parser("conjectures", help="run the conjectural claims")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--registry", default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--timings", action="store_true")
    _common(p, "plain")
    return parser


# --- output --------------------------------------------------------------------


def _csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: row[c] for c in columns})
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(args) -> str:
    return args.format or args.format_default


REPORT_COLUMNS = ["claim", "params", "status", "modulus", "n_lo", "n_hi", "checked", "verdict", "failure_count", "first_failure", "label"]


def _render_reports(args, reports: list) -> str:
    fmt = _fmt(args)
    timings = getattr(args, "timings", False)
    if fmt == "json":
        return json.dumps([r.to_json(timings) for r in reports], indent=2) + "\n"
    if fmt == "csv":
        rows = []
        for r in reports:
            rows.append(
                {
                    "claim": r.claim_id,
                    "params": ";".join(f"{k}={v}" for k, v in sorted(r.params.items())),
                    "status": r.status,
                    "modulus": "-" if r.modulus is None else r.modulus,
                    "n_lo": r.n_range[0],
                    "n_hi": r.n_range[1],
                    "checked": r.checked,
                    "verdict": r.verdict,
                    "failure_count": r.failure_count,
                    "first_failure": r.failures[0][0] if r.failures else "",
                    "label": r.label,
                }
            )
        return _csv(rows, REPORT_COLUMNS)
    lines = [r.summary_line() for r in reports]
    if timings:
        lines = [f"{line} [{r.elapsed:.3f}s]" for line, r in zip(lines, reports)]
    return "\n".join(lines) + "\n"


def _status_of(reports: list) -> int:
    if any(not r.passed and not r.conjectural for r in reports):
        return EXIT_FAIL
    if any(not r.passed and r.conjectural for r in reports):
        return EXIT_REFUTED
    return EXIT_OK


# --- commands -----------------------------------------------------------------


def cmd_series(args) -> int:
    if args.precision is None:
        raise UsageError("series needs -N/--precision")
    if args.precision < 0:
        raise UsageError("precision must be nonnegative")
    if args.mod is not None and args.mod < 2:
        raise UsageError("--mod must be at least 2")
    s = evaluate(parse_expression(args.expr), args.precision, args.mod)
    fmt = _fmt(args)
    if fmt == "json":
        _emit(args, json.dumps({"expr": args.expr, **s.to_json()}, indent=2) + "\n")
    elif fmt == "csv":
        _emit(args, _csv([{"n": n, "c": c} for n, c in enumerate(s.coeffs)], ["n", "c"]))
    else:
        _emit(args, "".join(f"{n},{c}\n" for n, c in enumerate(s.coeffs)))
    return EXIT_OK


def cmd_verify(args) -> int:
    claims = load_registry(args.registry)
    try:
        chosen = find_claims(claims, args.ids)
    except KeyError as exc:
        raise UsageError(f"unknown claim id: {exc.args[0]}") from None
    if args.n_max is not None and args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    reports = verify_registry(chosen, args.n_max, extended=args.extended, jobs=args.jobs)
    _emit(args, _render_reports(args, reports))
    return _status_of(reports)


def cmd_mine(args) -> int:
    if args.k is None or args.m is None or args.a_max is None:
        raise UsageError("mine needs -k, -m and --a-max")
    if args.k < 2 or args.m < 2 or args.a_max < 2 or args.min_support < 10:
        raise UsageError("mine needs k >= 2, m >= 2, --a-max >= 2, --min-support >= 10")
    cands = mine_congruences(args.k, args.m, args.a_max, args.n_max, args.min_support, load_registry(args.registry))
    if args.minimal:
        cands = [c for c in cands if c.minimal]
    rows = [c.row() for c in cands]
    fmt = _fmt(args)
    columns = ["k", "m", "A", "r", "support", "status", "from_n", "minimal", "registry"]
    if fmt == "json":
        _emit(args, json.dumps({"schema_version": 1, "candidates": rows}, indent=2) + "\n")
    elif fmt == "csv":
        _emit(args, _csv(rows, columns))
    else:
        _emit(args, "".join(" ".join(str(r[c]) for c in columns).rstrip() + "\n" for r in rows))
    return EXIT_OK


def cmd_oracle(args) -> int:
    vals = args.values
    if args.kind == "pdk":
        if len(vals) != 2:
            raise UsageError("oracle pdk needs k and n")
        k, n = vals
        if k < 2 or n < 0:
            raise UsageError("oracle pdk needs k >= 2 and n >= 0")
        result = oracle_pdk(k, n)
    else:
        if len(vals) != 1 or vals[0] < 0:
            raise UsageError(f"oracle {args.kind} needs one n >= 0")
        result = oracle_pd(vals[0]) if args.kind == "pd" else odd_multiplicity_count(vals[0])
    if _fmt(args) == "json":
        _emit(args, json.dumps({"kind": args.kind, "args": vals, "value": str(result)}) + "\n")
    else:
        _emit(args, f"{result}\n")
    return EXIT_OK


def cmd_identities(args) -> int:
    ledger = load_ledger(args.ledger)
    if args.ids:
        known = {c.id for c in ledger}
        missing = [i for i in args.ids if i not in known]
        if missing:
            raise UsageError(f"unknown identity id: {', '.join(missing)}")
        ledger = [c for c in ledger if c.id in set(args.ids)]
    if args.precision is not None and args.precision < 1:
        raise UsageError("precision must be at least 1")
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(check_identity, ledger, [args.precision] * len(ledger)))
    else:
        reports = [check_identity(c, args.precision) for c in ledger]
    _emit(args, _render_reports(args, reports))
    return _status_of(reports)


def cmd_conjectures(args) -> int:
    n_max = 3000 if args.n_max is None else args.n_max
    if n_max < 100:
        raise UsageError("--n-max must be at least 100")
    reports = check_conjectures(n_max, load_registry(args.registry), jobs=args.jobs)
    _emit(args, _render_reports(args, reports))
    return _status_of(reports)


COMMANDS = {
    "series": cmd_series,
    "verify": cmd_verify,
    "mine": cmd_mine,
    "oracle": cmd_oracle,
    "identities": cmd_identities,
    "conjectures": cmd_conjectures,
}


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except (UsageError, ParseError, EvaluationError, RegistryError, OSError, ValueError) as exc:
        print(f"qpd {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
