"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data validation error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import bench, oracles
from .core import (
    CountDistribution,
    NumericalInstabilityError,
    ProbabilityPolynomial,
    TrinaryTrial,
    expand,
    expand_fft,
    expand_trinary,
    expand_truncated,
    update_trial,
)
from .dataset import DatasetError, load_dataset
from .spatial import (
    Circle,
    Point,
    Rect,
    UnknownObjectError,
    distance_rank_probability,
    knn_membership_probability,
    range_count_query,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

ALGORITHMS = {
    "naive": expand,
    "fft": expand_fft,
    "recurrence": oracles.poisson_binomial_recurrence,
    "brute": oracles.brute_force_pmf,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str, count: Optional[int], flag: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")] if text.strip() else []
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise UsageError(f"{flag}: expected {count} numbers, got {len(values)}")
    return values


def _dump(doc) -> str:
    return json.dumps(doc, separators=(",", ":"))


def _dist_doc(dist: CountDistribution) -> str:
    return _dump({"offset": dist.offset, "pmf": dist.pmf.tolist()})


def _region(args):
    if (args.circle is None) == (args.rect is None):
        raise UsageError("give exactly one of --circle cx,cy,r or --rect x1,y1,x2,y2")
    if args.circle is not None:
        cx, cy, r = _floats(args.circle, 3, "--circle")
        return Circle(Point(cx, cy), r)
    x1, y1, x2, y2 = _floats(args.rect, 4, "--rect")
    return Rect(Point(x1, y1), Point(x2, y2))


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")


def _cmd_pmf(args) -> str:
    _require(args, "probs")
    probs = _floats(args.probs, None, "--probs")
    if args.truncate is not None:
        poly = expand_truncated(probs, args.truncate)
        return _dump({"truncation_bound": poly.truncation_bound, "coeffs": poly.coeffs.tolist()})
    return _dist_doc(ALGORITHMS[args.algo](probs))


def _cmd_pmf_trinary(args) -> str:
    _require(args, "probs")
    trials = []
    for item in filter(None, args.probs.split(",")):
        try:
            p, p_bar = (float(v) for v in item.split(":"))
        except ValueError:
            raise UsageError(f"--probs: expected p:p_bar pairs, got {item!r}") from None
        trials.append(TrinaryTrial(p, p_bar))
    fn = oracles.brute_force_trinary if args.algo == "brute" else expand_trinary
    return _dump({"grid": fn(trials).coeffs.tolist()})


def _cmd_range_count(args) -> str:
    _require(args, "data")
    region = _region(args)
    return _dist_doc(range_count_query(load_dataset(args.data), region))


def _query_point(args) -> Point:
    return Point(*_floats(args.point, 2, "--point"))


def _cmd_knn(args) -> str:
    _require(args, "data", "candidate", "k")
    db = load_dataset(args.data)
    return repr(knn_membership_probability(db, _query_point(args), args.candidate, args.k))


def _cmd_rank(args) -> str:
    _require(args, "data", "candidate", "k")
    db = load_dataset(args.data)
    return repr(distance_rank_probability(db, _query_point(args), args.candidate, args.k))


def _cmd_update(args) -> str:
    _require(args, "p_old", "p_new")
    src = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
    try:
        doc = json.load(src)
        dist = CountDistribution(doc["pmf"], int(doc.get("offset", 0)))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DatasetError(f"cannot read pmf document: {exc}") from None
    finally:
        if src is not sys.stdin:
            src.close()
    updated = update_trial(dist.to_polynomial(), args.p_old, args.p_new)
    return _dist_doc(CountDistribution.from_polynomial(updated))


def _cmd_bench(args) -> str:
    sizes = [int(v) for v in _floats(args.sizes, None, "--sizes")]
    rows = bench.run_bench(sizes, k=args.k, seed=args.seed, repeat=args.repeat)
    return bench.format_table(rows, args.k)


COMMANDS = {
    "pmf": _cmd_pmf,
    "pmf-trinary": _cmd_pmf_trinary,
    "range-count": _cmd_range_count,
    "knn": _cmd_knn,
    "rank": _cmd_rank,
    "update": _cmd_update,
    "bench": _cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probcount", description="Exact probabilistic counting over uncertain objects.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *flags):
        if "data" in flags:
            p.add_argument("--data", help="JSON Lines dataset")
        if "region" in flags:
            p.add_argument("--circle", help="cx,cy,r")
            p.add_argument("--rect", help="x1,y1,x2,y2")
        if "query" in flags:
            p.add_argument("--point", default="0,0", help="query point x,y (default 0,0)")
            p.add_argument("--candidate", help="candidate object id")
            p.add_argument("--k", type=int)

    p = sub.add_parser("pmf", help="count distribution for a list of success probabilities")
    p.add_argument("--probs", help="comma-separated probabilities")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), default="naive")
    p.add_argument("--truncate", type=int, metavar="K", help="keep only counts below K")

    p = sub.add_parser("pmf-trinary", help="joint (satisfy, undecided) grid")
    p.add_argument("--probs", help="comma-separated p:p_bar pairs")
    p.add_argument("--algo", choices=["naive", "brute"], default="naive")

    common(sub.add_parser("range-count", help="count distribution inside a region"), "data", "region")
    common(sub.add_parser("knn", help="probability the candidate is a k-nearest neighbour"), "data", "query")
    common(sub.add_parser("rank", help="probability the candidate has distance rank k"), "data", "query")

    p = sub.add_parser("update", help="change one trial probability inside a pmf document")
    p.add_argument("--input", default="-", help="pmf document path, '-' for stdin")
    p.add_argument("--p-old", type=float)
    p.add_argument("--p-new", type=float)

    p = sub.add_parser("bench", help="time naive, truncated and FFT expansion")
    p.add_argument("--sizes", default="1000,2000,4000")
    p.add_argument("--k", type=int, help="also time truncated expansion with this bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, UnknownObjectError) as exc:
        msg = f"unknown object id {exc.args[0]!r}" if isinstance(exc, UnknownObjectError) else str(exc)
        print(f"probcount: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalInstabilityError as exc:
        print(f"probcount: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DatasetError, ValueError, OSError) as exc:
        print(f"probcount: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
