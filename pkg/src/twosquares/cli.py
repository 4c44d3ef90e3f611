"""Command-line front end: ``twosquares <subcommand> ...``.

Exit status is 0 on success, 2 on a usage error and 3 when a budget or
coverage limit is hit.  Every number printed comes straight from the
library; floats use 10 significant digits.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
from decimal import Decimal, InvalidOperation
import json
import sys

from . import local, regions, sieve, singular, stats
from .errors import TwoSquaresError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _g(v: float) -> str:
    return f"{v:.10g}"


def parse_int(text: str) -> int:
    """Integer from '1000', '1e9', '10_000' or '2.5e3'."""
    try:
        d = Decimal(text.replace("_", ""))
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_float(text: str) -> float:
    try:
        return float(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_offsets(text: str) -> local.OffsetSet:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"offsets must be comma-separated integers: {text!r}") from None
    if len(set(values)) != len(values):
        raise argparse.ArgumentTypeError(f"duplicate offsets in {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty offset list")
    return local.OffsetSet(values)


def parse_int_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_window(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("window must be X,W")
    return parse_int(parts[0]), parse_int(parts[1])


def parse_region(text: str) -> regions.Region:
    """'i1,...,ir:l1,...,lr' (e.g. '2:1' or '1,1:1,2')."""
    try:
        blocks, lengths = text.split(":")
        return regions.Region([int(b) for b in blocks.split(",")], [parse_float(l) for l in lengths.split(",")])
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"region must look like '2:1' or '1,1:1,2', got {text!r}") from None


def _sub(subs, name: str, help: str) -> argparse.ArgumentParser:
    p = subs.add_parser(name, help=help, add_help=False)
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("--out", help="write output to this file instead of standard output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twosquares", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = _sub(subs, "sieve", "dump a membership window (sots-window v1)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("-x", type=parse_int, help="window [0, x]")
    g.add_argument("--window", type=parse_window, help="window [X, X+W) given as X,W")

    p = _sub(subs, "count", "N(x), the number of sums of two squares in [1, x]")
    p.add_argument("-x", type=parse_int, required=True)

    p = _sub(subs, "density", "exact local density delta_h(p)")
    p.add_argument("-h", dest="offsets", type=parse_offsets, required=True)
    p.add_argument("-p", type=parse_int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = _sub(subs, "sss", "singular series with tail bound")
    p.add_argument("-h", dest="offsets", type=parse_offsets, required=True)
    p.add_argument("--cutoff", type=parse_int, default=singular.DEFAULT_CUTOFF)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = _sub(subs, "admissible", "whether the singular series is positive")
    p.add_argument("-h", dest="offsets", type=parse_offsets, required=True)

    p = _sub(subs, "correlate", "correlation count, prediction and error term")
    p.add_argument("-h", dest="offsets", type=parse_offsets, required=True)
    p.add_argument("-x", type=parse_int, required=True)
    p.add_argument("--cutoff", type=parse_int, default=singular.DEFAULT_CUTOFF)
    p.add_argument("--format", choices=["csv", "json", "text"], default="csv")

    p = _sub(subs, "table", "observed vs predicted counts at several x")
    p.add_argument("-h", dest="offsets", type=parse_offsets, required=True)
    p.add_argument("--x-list", type=parse_int_list, required=True)
    p.add_argument("--cutoff", type=parse_int, default=singular.DEFAULT_CUTOFF)

    p = _sub(subs, "spacings", "histogram of rescaled gaps in a window")
    p.add_argument("--window", type=parse_window, required=True)
    p.add_argument("--bins", type=parse_int, default=50)
    p.add_argument("--plot-data", action="store_true", help="two columns (t, density) instead of bin masses")

    p = _sub(subs, "intervals", "distribution of counts in (n, n + lambda y]")
    p.add_argument("-x", type=parse_int, required=True)
    p.add_argument("--lambda", dest="lam", type=parse_float, default=1.0)
    p.add_argument("--m-max", type=parse_int, default=None)

    p = _sub(subs, "moments", "empirical moments of interval counts vs Poisson")
    p.add_argument("-x", type=parse_int, required=True)
    p.add_argument("--ell", type=parse_int, required=True)
    p.add_argument("--lambda", dest="lam", type=parse_float, default=1.0)

    p = _sub(subs, "avg-sss", "average of the singular series over a dilated region")
    p.add_argument("-k", type=parse_int, required=True)
    p.add_argument("--region", type=parse_region, default=None, help="blocks:lengths, default 'k:1'")
    p.add_argument("-y", type=parse_float, required=True)
    p.add_argument("--with-zero", action="store_true", help="prepend the offset 0")

    p = _sub(subs, "cancel-check", "exact sum of local increments over all residue tuples")
    p.add_argument("-p", type=parse_int, required=True)
    p.add_argument("--alpha", type=parse_int, required=True)
    p.add_argument("-k", type=parse_int, required=True)
    p.add_argument("--with-zero", action="store_true")
    return parser


def _csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _frac(f) -> str:
    return f"{f.numerator}/{f.denominator}"


def _run(args, out) -> None:
    cmd = args.command
    if cmd == "sieve":
        win = sieve.sieve_upto(args.x) if args.x is not None else sieve.window_sieve(*args.window)
        win.dump(out.buffer if hasattr(out, "buffer") else out)
    elif cmd == "count":
        print(stats.counting_function(args.x), file=out)
    elif cmd == "density":
        d = local.delta(args.offsets, args.p)
        if args.format == "json":
            json.dump({"p": d.p, "alpha": d.alpha, "residue_count": d.residue_count, "hp_count": d.hp_count,
                       "num": d.value.numerator, "den": d.value.denominator}, out)
            out.write("\n")
        else:
            print(_frac(d.value), file=out)
    elif cmd == "sss":
        s = singular.singular_series(args.offsets, args.cutoff)
        if args.format == "json":
            json.dump({"value": s.value, "tail_bound": s.tail_bound, "cutoff": s.cutoff,
                       "factors": [{"p": p, "num": f.numerator, "den": f.denominator} for p, f in s.local_factors],
                       "admissible": s.admissible}, out)
            out.write("\n")
        else:
            print(f"value {_g(s.value)}", file=out)
            print(f"tail_bound {_g(s.tail_bound)}", file=out)
            print(f"cutoff {s.cutoff}", file=out)
            for p, f in s.local_factors:
                print(f"factor p={p} {_frac(f)}", file=out)
    elif cmd == "admissible":
        print("true" if singular.is_admissible(args.offsets) else "false", file=out)
    elif cmd == "correlate":
        r = stats.correlation(args.offsets, args.x, cutoff=args.cutoff)
        fields = {"x": r.x, "count": r.count, "prediction": r.expected_count, "ratio": r.ratio,
                  "r_k": r.r_k, "r_1": r.n_x / r.x, "singular_series": r.singular, "error_term": r.error_term}
        if args.format == "json":
            json.dump(fields, out)
            out.write("\n")
        elif args.format == "text":
            for k, v in fields.items():
                print(f"{k} {v if isinstance(v, int) else _g(v)}", file=out)
        else:
            _csv(out, ["x", "count", "prediction", "ratio"], [[r.x, r.count, _g(r.expected_count), _g(r.ratio)]])
    elif cmd == "table":
        rows = stats.table_rows(args.offsets, args.x_list, cutoff=args.cutoff)
        _csv(out, ["x", "count", "prediction", "ratio"], [[r.x, r.count, _g(r.prediction), _g(r.ratio)] for r in rows])
    elif cmd == "spacings":
        h = stats.spacing_histogram(sieve.window_sieve(*args.window), args.bins)
        if args.plot_data:
            t, dens = h.density()
            _csv(out, ["t", "density"], [[_g(a), _g(b)] for a, b in zip(t, dens)])
        else:
            _csv(out, ["bin_lo", "bin_hi", "mass", "exp_reference"],
                 [[_g(lo), _g(hi), _g(m), _g(r)] for lo, hi, m, r in zip(h.edges[:-1], h.edges[1:], h.masses, h.reference)])
    elif cmd == "intervals":
        ic = stats.interval_counts(args.x, args.lam, m_max=args.m_max)
        _csv(out, ["m", "empirical", "poisson"], [[m, _g(e), _g(p)] for m, (e, p) in enumerate(zip(ic.empirical, ic.poisson))])
    elif cmd == "moments":
        y = stats.default_y(args.x)
        rows = [[ell, _g(stats.empirical_moment(ell, args.x, args.lam, y)), _g(regions.poisson_moment(ell, args.lam))]
                for ell in range(1, args.ell + 1)]
        _csv(out, ["ell", "empirical", "poisson"], rows)
    elif cmd == "avg-sss":
        region = args.region or regions.Region.box(args.k)
        rep = stats.singular_series_average(args.k, region, args.with_zero, args.y)
        _csv(out, ["y", "points", "sum", "main_term", "relative_error", "max_tail"],
             [[_g(args.y), rep.points, _g(rep.total), _g(rep.main_term), _g(rep.relative_error), _g(rep.max_tail)]])
    elif cmd == "cancel-check":
        s = local.cancellation_sum(args.p, args.alpha, args.k, args.with_zero)
        print(s, file=out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"twosquares: error: {exc}", file=sys.stderr)
        return 2
    try:
        with contextlib.ExitStack() as stack:
            out = sys.stdout
            if args.out:
                binary = args.command == "sieve"
                out = stack.enter_context(open(args.out, "wb" if binary else "w", newline="" if not binary else None))
            _run(args, out)
    except ValueError as exc:
        print(f"twosquares: error: {exc}", file=sys.stderr)
        return 2
    except TwoSquaresError as exc:
        print(f"twosquares: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
