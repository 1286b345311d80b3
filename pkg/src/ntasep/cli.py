"""Command-line front end.

Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
errors (malformed or non-basic sectors, bad words, exceeded resource caps).

Notation: sectors are comma-separated counts (``1,1,2``); words are digit
strings (``1233``) or comma-separated letters when some letter exceeds 9;
box lines are strings over ``B``/``W``; rates are exact fractions
(``1,1/2,3``), never decimals.  Polynomials use the text form documented in
:mod:`ntasep.ring`.  Set ``NTASEP_WORKERS`` to run verification checks in
parallel processes.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import alalgo, generator, mpa, verify
from .lattice import (DEFAULT_MAX_LENGTH, CapExceeded, Sector, SectorError, check_length,
                      enumerate_sector, format_word, parse_word)
from .matrix import SparsePolyMatrix


class UsageError(Exception):
    pass


def _sector(args) -> Sector:
    m = Sector.parse(args.sector)
    check_length(m, args.max_length)
    return m


def _rates(args, n: int, required: bool = False):
    if args.rates is None:
        if required:
            raise UsageError("--rates is required for this route")
        return None
    r = generator.RateAssignment.parse(args.rates)
    if len(r.x) < n:
        raise UsageError(f"need {n} rates, got {len(r.x)}")
    return r.restrict(n)


def _print_matrix(M: SparsePolyMatrix, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(M.to_json_obj()) + "\n")
    elif fmt == "tsv":
        out.write(M.to_tsv())
    else:
        width = max((len(format_word(w)) for w in M.rows), default=0)
        for r, w in enumerate(M.rows):
            cells = [str(M[r, c]) for c in range(len(M.cols))]
            out.write(f"{format_word(w):>{width}}  " + "  ".join(cells) + "\n")


def _print_fraction_matrix(rows, entries, fmt, out):
    items = sorted(entries.items())
    if fmt == "json":
        out.write(json.dumps({"rows": [format_word(w) for w in rows],
                              "cols": [format_word(w) for w in rows],
                              "entries": [[r, c, str(v)] for (r, c), v in items]}) + "\n")
    else:
        for (r, c), v in items:
            out.write(f"{format_word(rows[r])}\t{format_word(rows[c])}\t{v}\n")


def _print_pairs(words, values, fmt, out, key="weight") -> None:
    if fmt == "json":
        out.write(json.dumps([{"word": format_word(w), key: str(v)}
                              for w, v in zip(words, values)]) + "\n")
    else:
        sep = "\t" if fmt == "tsv" else "  "
        for w, v in zip(words, values):
            out.write(f"{format_word(w)}{sep}{v}\n")


def cmd_enumerate(args, out) -> int:
    m = _sector(args)
    words = enumerate_sector(m)
    if args.format == "json":
        out.write(json.dumps([format_word(w) for w in words]) + "\n")
    else:
        out.write("".join(format_word(w) + "\n" for w in words))
    return 0


def cmd_generator(args, out) -> int:
    m = _sector(args)
    rates = _rates(args, m.nspecies)
    if rates is None:
        _print_matrix(generator.build_generator(m), args.format, out)
    else:
        _print_fraction_matrix(enumerate_sector(m), generator.generator_at(m, rates),
                               args.format, out)
    return 0


def cmd_stationary(args, out) -> int:
    m = _sector(args)
    words = enumerate_sector(m)
    if args.route == "kernel":
        rates = _rates(args, m.nspecies, required=True)
        values = generator.stationary_kernel(m, rates)
        _print_pairs(words, values, args.format, out, key="probability")
        return 0
    weights = verify.stationary(m, args.route)
    rates = _rates(args, m.nspecies)
    if rates is not None:
        values = verify.normalize([p.evaluate(rates.y) for p in weights])
        _print_pairs(words, values, args.format, out, key="probability")
    else:
        _print_pairs(words, weights, args.format, out)
    return 0


def cmd_psi(args, out) -> int:
    m = _sector(args)
    if m.nspecies < 1:
        raise UsageError("psi needs a sector with at least two parts")
    psi = mpa.conjugation_matrix(m) if args.route == "mpa" else alalgo.psi_al(m)
    _print_matrix(psi, args.format, out)
    return 0


def cmd_al_construct(args, out) -> int:
    boxes = alalgo.parse_boxes(args.boxes)
    k = parse_word(args.word)
    if len(k) > args.max_length:
        raise CapExceeded(f"L={len(k)} exceeds the configured cap {args.max_length}")
    res = alalgo.al_construct(boxes, k, args.level)
    obj = {
        "boxes": alalgo.format_boxes(boxes),
        "lower": format_word(k),
        "upper": format_word(res.upper),
        "weight": str(res.weight_poly()),
        "arrows": [a.to_json() for a in res.arrows],
    }
    if args.format == "json":
        out.write(json.dumps(obj) + "\n")
    else:
        sep = "\t" if args.format == "tsv" else "  "
        out.write(f"{obj['upper']}{sep}{obj['weight']}\n")
    return 0


def cmd_trace(args, out) -> int:
    k = parse_word(args.lower)
    N = args.level if args.level is not None else max(k)
    j = parse_word(args.upper, N + 1)
    if len(j) != len(k):
        raise UsageError("upper and lower words must have equal length")
    if len(j) > args.max_length:
        raise CapExceeded(f"L={len(j)} exceeds the configured cap {args.max_length}")
    t = mpa.trajectory(N, j, k)
    value = mpa.trace_word(N, j, k)
    obj = {"upper": format_word(j), "lower": format_word(k), "level": N, "trace": str(value),
           "fixed_state": list(t.fixed_state) if t else None,
           "states": [list(s) for s in t.states] if t else None}
    if args.format == "json":
        out.write(json.dumps(obj) + "\n")
    else:
        out.write(f"{obj['trace']}\n")
    return 0


def cmd_verify(args, out) -> int:
    if args.maxL > args.max_length:
        raise CapExceeded(f"--maxL {args.maxL} exceeds the configured cap {args.max_length}")
    reports = verify.run_suite(args.suite, workers=args.workers, max_n=args.maxN,
                               max_l=args.maxL, seed=args.seed, cap=args.charpoly_cap,
                               hat_max_n=args.hat_maxN)
    if args.format == "json":
        out.write(verify.reports_json(reports) + "\n")
    else:
        for r in reports:
            out.write(r.line() + "\n")
            if not r.passed:
                out.write("      " + json.dumps(r.counterexample) + "\n")
        failed = sum(not r.passed for r in reports)
        out.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
    return 0 if all(r.passed for r in reports) else 1


def _common(fmt: str = "json") -> argparse.ArgumentParser:
    # a fresh parent per subcommand: argparse shares parent actions, so defaults would leak
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "pretty"), default=fmt)
    common.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH,
                        help="refuse lattices longer than this (default %(default)s)")
    return common


def build_parser() -> argparse.ArgumentParser:

    p = argparse.ArgumentParser(prog="ntasep", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[_common()], help="list the configurations of a sector")
    s.add_argument("--sector", required=True)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("generator", parents=[_common()], help="the generator M_m")
    s.add_argument("--sector", required=True)
    s.add_argument("--rates", help="evaluate at these hopping rates x_1..x_N")
    s.set_defaults(func=cmd_generator)

    s = sub.add_parser("stationary", parents=[_common()], help="stationary weights of a sector")
    s.add_argument("--sector", required=True)
    s.add_argument("--route", choices=("mpa", "al", "kernel"), default="mpa")
    s.add_argument("--rates", help="normalize at these rates (required for --route kernel)")
    s.set_defaults(func=cmd_stationary)

    s = sub.add_parser("psi", parents=[_common()], help="the conjugation matrix psi_m")
    s.add_argument("--sector", required=True)
    s.add_argument("--route", choices=("mpa", "al"), default="mpa")
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("al-construct", parents=[_common()], help="run the two-line construction once")
    s.add_argument("--boxes", required=True, help="box line over B/W")
    s.add_argument("--word", required=True, help="lower configuration")
    s.add_argument("--level", type=int, help="N (default: largest letter of the word)")
    s.set_defaults(func=cmd_al_construct)

    s = sub.add_parser("trace", parents=[_common()], help="trace of a word product of a^(N) entries")
    s.add_argument("--upper", required=True, help="row word j over 1..N+1")
    s.add_argument("--lower", required=True, help="column word k over 1..N")
    s.add_argument("--level", type=int, help="N (default: largest letter of the lower word)")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("verify", parents=[_common("pretty")], help="run verification checks")
    s.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    s.add_argument("--maxN", type=int, default=3)
    s.add_argument("--maxL", type=int, default=6)
    s.add_argument("--hat-maxN", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--charpoly-cap", type=int, default=generator.DEFAULT_CHARPOLY_CAP)
    s.add_argument("--workers", type=int, help="worker processes (default: $NTASEP_WORKERS or 1)")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except CapExceeded as exc:
        print(f"ntasep: resource cap exceeded: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SectorError, ValueError, IndexError) as exc:
        print(f"ntasep: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
