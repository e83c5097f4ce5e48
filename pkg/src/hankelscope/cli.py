"""Command-line front end.

Exit status: 0 on success, 1 on usage, spec or hypothesis errors, 2 when a
``check`` finds the geometric prediction contradicted by the spectral scan.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .domain import DomainError, check_complete, check_convex, detect_gamma
from .hankel import PolySymbol, hankel_action, hankel_eigenvalue, projection_coeff
from .moments import MomentTable, cache_path, default_cache_dir, warm_cache
from .probe import Thresholds, decay_scan, theorem_check
from .specio import (
    SpecError,
    dumps,
    parse_domain_spec,
    parse_symbol_spec,
    symbol_to_spec,
)

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2

CSV_COLUMNS = ("N", "term_j", "term_k", "shell_sup")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _pair(text):
    try:
        a, b = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'j,k', got {text!r}") from None
    if a < 0 or b < 0:
        raise argparse.ArgumentTypeError(f"indices must be >= 0, got {text!r}")
    return a, b


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return value


def _nonneg_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hankelscope", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("domain", type=Path, help="domain spec file (JSON)")
    common.add_argument("--out", type=Path, help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", type=Path,
                        help="moment cache directory (default: $HANKELSCOPE_CACHE or a user data dir)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the moment cache")
    common.add_argument("-v", "--verbose", action="store_true")

    gamma = _Parser(add_help=False)
    gamma.add_argument("--flat-eps", type=_positive_float)
    gamma.add_argument("--len-eps", type=_positive_float)

    scan = _Parser(add_help=False)
    scan.add_argument("--nmin", type=_nonneg_int, default=20)
    scan.add_argument("--nmax", type=_nonneg_int, default=400)
    scan.add_argument("--tau-decay", type=_positive_float, default=Thresholds.tau_decay)
    scan.add_argument("--decay-ratio", type=_positive_float, default=Thresholds.decay_ratio)
    scan.add_argument("--tau-floor", type=_positive_float, default=Thresholds.tau_floor)
    scan.add_argument("--var-tol", type=_positive_float, default=Thresholds.var_tol)

    symbol = _Parser(add_help=False)
    symbol.add_argument("--symbol", type=Path, required=True, help="symbol spec file (JSON)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("geometry", parents=[common, gamma],
                   help="profile checks and analytic-disk sets")
    p = sub.add_parser("moment", parents=[common], help="log-moment of z^beta, or warm the cache")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=_pair)
    group.add_argument("--warm", type=_nonneg_int, metavar="DEGREE",
                       help="fill the cache for all |beta| <= DEGREE")
    p = sub.add_parser("eig", parents=[common], help="Hankel eigenvalue for zbar^alpha at e_n")
    p.add_argument("--alpha", type=_pair, required=True)
    p.add_argument("--n", type=_pair, required=True)
    p = sub.add_parser("probe", parents=[common, scan], help="shell-sup decay scan of one monomial")
    p.add_argument("--alpha", type=_pair, required=True)
    sub.add_parser("scan", parents=[common, scan, symbol], help="decay scan of a polynomial symbol")
    sub.add_parser("check", parents=[common, scan, symbol, gamma],
                   help="compare boundary geometry with the decay scan")
    sub.add_parser("report", parents=[common, scan, symbol, gamma],
                   help="geometry, scan and consistency check in one document")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _thresholds(args) -> Thresholds:
    return Thresholds(args.tau_decay, args.decay_ratio, args.tau_floor, args.var_tol)


def _scan_range(args):
    if args.nmin >= args.nmax:
        raise UsageError(f"--nmin must be < --nmax (got {args.nmin}, {args.nmax})")
    return args.nmin, args.nmax


def _geometry(domain, args):
    complete = check_complete(domain)
    convex = check_convex(domain)
    out = {
        "domain": domain.to_spec(),
        "R1_max": domain.R1_max,
        "R2_max": domain.R2_max,
        "complete": {"ok": complete.ok, "reason": complete.reason},
        "convex": {"ok": convex.ok, "reason": convex.reason},
        "gamma": None,
    }
    if complete:
        out["gamma"] = detect_gamma(domain, args.flat_eps, args.len_eps).to_dict()
    return out


def _scan_csv(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for order, j, k, value in report.csv_rows():
        writer.writerow((order, j, k, repr(value)))
    return buf.getvalue()


def _emit(text: str, args):
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")


def run_command(args) -> int:
    domain = parse_domain_spec(_read(args.domain))
    table = None
    if args.no_cache:
        table = MomentTable(domain)
    else:
        table = MomentTable(domain, cache_path(args.cache_dir or default_cache_dir(), domain))
    status = EXIT_OK
    csv_text = None

    cmd = args.command
    if cmd == "geometry":
        result = _geometry(domain, args)
    elif cmd == "moment":
        if args.beta is not None:
            value = table.get(args.beta)
            result = {"domain": domain.to_spec(), "beta": list(args.beta), "logM": value,
                      "M": math.exp(value) if value < 709 else math.inf}
        else:
            count = warm_cache(domain, args.warm, table)
            result = {"domain": domain.to_spec(), "degree_bound": args.warm, "entries": count}
            if args.format == "csv":
                csv_text = "b1,b2,logM\n" + "".join(
                    f"{b1},{b2},{v!r}\n" for (b1, b2), v in table.items() if b1 + b2 <= args.warm)
    elif cmd == "eig":
        action = hankel_action(domain, args.alpha, args.n, table)
        result = {
            "domain": domain.to_spec(),
            "alpha": list(args.alpha),
            "n": list(args.n),
            "eigenvalue": hankel_eigenvalue(domain, args.alpha, args.n, table),
            "projection_coeff": projection_coeff(domain, args.alpha, args.n, table),
            "action": {
                "anti": action.anti,
                "correction": action.correction,
                "correction_index": None if action.correction is None else list(action.correction_index),
            },
        }
    elif cmd in ("probe", "scan"):
        nmin, nmax = _scan_range(args)
        if cmd == "probe":
            f = PolySymbol.monomial(*args.alpha)
        else:
            f = parse_symbol_spec(_read(args.symbol))
        report = decay_scan(domain, f, nmin, nmax, table, _thresholds(args))
        result = {"domain": domain.to_spec(), "symbol": symbol_to_spec(f), **report.to_dict()}
        if args.format == "csv":
            csv_text = _scan_csv(report)
    elif cmd == "check":
        nmin, nmax = _scan_range(args)
        f = parse_symbol_spec(_read(args.symbol))
        report = theorem_check(domain, f, nmin, nmax, table, _thresholds(args), args.flat_eps, args.len_eps)
        result = {"domain": domain.to_spec(), "symbol": symbol_to_spec(f), **report.to_dict()}
        if args.format == "csv":
            csv_text = _scan_csv(report.scan)
        if not report.agreement:
            print("hankelscope: geometric prediction contradicted by the spectral scan", file=sys.stderr)
            status = EXIT_DISAGREE
    else:  # report
        nmin, nmax = _scan_range(args)
        f = parse_symbol_spec(_read(args.symbol))
        result = {"geometry": _geometry(domain, args), "symbol": symbol_to_spec(f),
                  "moment_method": table.metadata["method"], "consistency": None}
        try:
            check = theorem_check(domain, f, nmin, nmax, table, _thresholds(args), args.flat_eps, args.len_eps)
        except DomainError as exc:
            result["consistency_skipped"] = str(exc)
            scan_report = decay_scan(domain, f, nmin, nmax, table, _thresholds(args))
        else:
            result["consistency"] = {k: v for k, v in check.to_dict().items() if k != "scan"}
            scan_report = check.scan
            if not check.agreement:
                status = EXIT_DISAGREE
        result["scan"] = scan_report.to_dict()
        if args.format == "csv":
            csv_text = _scan_csv(scan_report)

    table.flush()
    if args.format == "csv":
        if csv_text is None:
            raise UsageError(f"--format csv is not available for '{cmd}'")
        _emit(csv_text, args)
    else:
        _emit(dumps(result), args)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return run_command(args)
    except (UsageError, SpecError, DomainError, ValueError, OSError) as exc:
        print(f"hankelscope: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
