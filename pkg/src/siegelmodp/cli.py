"""Command line entry point: ``siegelmodp <subcommand>`` or ``python3 -m siegelmodp``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import experiments as X
from . import qexp
from . import ringmodp as R
from .genforms import GENERATOR_NAMES, GeneratorCache, WEIGHTS
from .thetaops import a_op, theta, theta1

log = logging.getLogger("siegelmodp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cache(args, bound: int = 16) -> GeneratorCache:
    return GeneratorCache(bound, args.cache_dir)


def _read(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return qexp.parse(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    gc = _cache(args, args.bound)
    names = args.names or list(GENERATOR_NAMES)
    rows = []
    for n in names:
        if n not in WEIGHTS:
            raise UsageError(f"unknown generator {n!r}; choose from {', '.join(GENERATOR_NAMES)}")
        F = gc[n]
        rows.append({"name": n, "weight": F.weight, "bound": F.bound, "path": str(gc.path(n)),
                     "nonzero": sum(1 for _ in F.items())})
    _emit(_table(rows, args.format), None)
    return 0


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    if not rows:
        return ""
    if fmt == "csv":
        lines = [",".join(rows[0])] + [",".join(str(v) for v in r.values()) for r in rows]
    else:
        lines = ["  ".join(f"{k}={v}" for k, v in r.items()) for r in rows]
    return "\n".join(lines) + "\n"


def _as_char(F, p: int | None):
    if p is None:
        return F
    if F.char == 0:
        return qexp.reduce_mod(F, p)
    if F.char != p:
        raise UsageError(f"input is in characteristic {F.char}, not {p}")
    return F


def cmd_theta(args) -> int:
    F = _as_char(_read(args.infile), args.p)
    if args.j == 2:
        _emit(qexp.serialize(theta(F)), args.out)
    else:
        _emit(theta1(F).serialize(), args.out)
    return 0


def cmd_aop(args) -> int:
    F = _as_char(_read(args.infile), args.p)
    _emit(qexp.serialize(a_op(F, args.j, args.M)), args.out)
    return 0


def cmd_filtration(args) -> int:
    F = _as_char(_read(args.infile), args.p)
    k = F.weight if args.weight is None else args.weight
    gc = _cache(args)
    f = R.psi_inv(F, k, gc)
    h = R.h_poly(args.p, gc)
    o = R.ord_h(f, h)
    row = {"p": args.p, "weight": k, "poly": str(f), "h": str(h),
           "ord_h": "inf" if o == float("inf") else o, "omega": R.omega1(f, gens_cache=gc)}
    _emit(_table([row], args.format), None)
    return 0


def cmd_table_aop(args) -> int:
    t = X.table_aop(args.p, args.kmax, _cache(args), order=args.order)
    _emit(X.render_aop(t, args.format), args.out)
    return 0


def _primes(args):
    return [int(x) for x in args.primes.split(",")] if args.primes else None


def cmd_table_kernel(args) -> int:
    t = X.table_theta_kernel(args.pmax, args.kmax, args.cap, _cache(args), primes=_primes(args),
                             threads=args.threads)
    _emit(X.render_kernel(t, args.format), args.out)
    return 0


def cmd_audit(args) -> int:
    gc = _cache(args)
    t = X.table_theta_kernel(args.pmax, args.kmax, args.cap, gc, primes=_primes(args), threads=args.threads)
    _emit(X.render_records(X.audit_conjecture(t, gc), args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    checks = X.verify(args.suite, _cache(args))
    _emit(X.render_records(checks, args.format), None)
    return 0 if all(c.passed for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="siegelmodp", description=__doc__)
    ap.add_argument("--cache-dir", default=None, help="generator cache (default: $SIEGELMODP_CACHE or ~/.cache/siegelmodp)")
    ap.add_argument("--format", choices=("text", "csv", "json"), default="text")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for table-kernel/audit")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="build or load the generator expansions")
    s.add_argument("--bound", type=int, default=16)
    s.add_argument("--names", nargs="*")
    s.set_defaults(func=cmd_gen)

    for name, func, helptext in (("theta", cmd_theta, "apply Theta^[j] to an expansion file"),
                                 ("aop", cmd_aop, "apply A^(j)(M) to an expansion file")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--j", type=int, choices=(1, 2), required=True)
        if name == "theta":
            s.add_argument("--p", type=int, required=True)
        else:
            s.add_argument("--M", type=int, required=True)
            s.add_argument("--p", type=int, default=None, help="reduce mod p first")
        s.add_argument("--in", dest="infile", required=True, help="qexp file, or - for stdin")
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("filtration", help="ord_h and filtration of a mod-p form")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--weight", type=int)
    s.add_argument("--in", dest="infile", required=True)
    s.set_defaults(func=cmd_filtration)

    s = sub.add_parser("table-aop", help="filtrations of A(p) images")
    s.add_argument("--p", type=int, choices=(5, 7), required=True)
    s.add_argument("--kmax", type=int, default=60)
    s.add_argument("--order", choices=tuple(R.ORDERS), default="grevlex")
    s.add_argument("--out")
    s.set_defaults(func=cmd_table_aop)

    for name, func in (("table-kernel", cmd_table_kernel), ("audit", cmd_audit)):
        s = sub.add_parser(name, help="kernel of Theta mod p" if name == "table-kernel" else "conjecture audit")
        s.add_argument("--pmax", type=int, default=79)
        s.add_argument("--kmax", type=int, default=100)
        s.add_argument("--cap", type=int, default=15)
        s.add_argument("--primes", help="comma separated list overriding --pmax")
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("verify", help="run generator gates and property checks")
    s.add_argument("--suite", choices=("gates", "properties", "all"), default="all")
    s.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("siegelmodp: error: --threads must be positive", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        print(f"siegelmodp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
