"""Command-line front end: ``qid verify | enumerate | bijection | table``.

Exit status: 0 success, 1 identity mismatch or failed sweep, 2 usage or
precondition error, 3 coefficient overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .bijections import (
    NonTerminationError,
    PreconditionError,
    StrictnessViolation,
    alpha_k,
    alpha_k_steps,
    thm41_reduce,
    verify_pairing,
)
from .identities import IDENTITIES, IdentitySpec, InvalidSpecError, catalog, verify
from .partitions import (
    arm_length,
    corner_count,
    enumerate_partitions,
    enumerate_strict_partitions,
    format_partition,
    hook_length,
    parse_partition,
)
from .qseries import SeriesOverflowError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_OVERFLOW = 0, 1, 2, 3

STATS_COLUMNS = ["partition", "length", "corners", "smallest", "arms", "hooks"]
TABLE_COLUMNS = ["q_degree", "b_degree", "lhs", "rhs", "equal"]


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p):
        p.add_argument("--m", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)

    def add_output(p, formats=("text", "json", "csv")):
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--output", "-o", default="-", help="output path (default: stdout)")

    p = sub.add_parser("verify", help="compare both sides of an identity")
    p.add_argument("--identity", required=True, help="one of %s, or 'all'" % ", ".join(IDENTITIES))
    p.add_argument("--order", type=int, default=50)
    add_params(p)
    add_output(p)
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as null")

    p = sub.add_parser("enumerate", help="list partitions of n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--stats", action="store_true", help="CSV with " + ",".join(STATS_COLUMNS))
    add_output(p, ("text", "json"))

    p = sub.add_parser("bijection", help="check the alpha_k pairing")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--trace", help="partition such as '[5]' to trace through alpha_k")
    p.add_argument("--reduce", help="partition to run through the multi-index reduction")
    p.add_argument("--indices", help="comma-separated column indices for --reduce")
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--max-n", type=int)
    add_output(p, ("text", "json"))

    p = sub.add_parser("table", help="CSV of both sides, one row per coefficient")
    p.add_argument("--identity", required=True)
    p.add_argument("--order", type=int, default=50)
    add_params(p)
    p.add_argument("--output", "-o", default="-")
    return parser


def _open_output(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit(text: str, path: str):
    stream, close = _open_output(path)
    try:
        stream.write(text)
    finally:
        if close:
            stream.close()


def _check_order(order: int):
    if order < 0:
        raise UsageError("--order must be >= 0")
    cap = os.environ.get("QID_MAX_ORDER")
    if cap:
        try:
            limit = int(cap)
        except ValueError:
            raise UsageError(f"QID_MAX_ORDER={cap!r} is not an integer")
        if order > limit:
            raise UsageError(f"--order {order} exceeds QID_MAX_ORDER={limit}")


def _specs_from_args(args) -> list[IdentitySpec]:
    _check_order(args.order)
    if args.identity.strip().lower() == "all":
        if any(getattr(args, a) is not None for a in ("m", "t", "n", "k")):
            raise UsageError("--identity all takes no parameters")
        return catalog(args.order)
    spec = IdentitySpec(args.identity, args.order, m=args.m, t=args.t, n=args.n, k=args.k)
    try:
        spec.validate()
    except InvalidSpecError as exc:
        raise UsageError(str(exc))
    return [spec]


def _fmt(v):
    return "-" if v is None else str(v)


def cmd_verify(args) -> int:
    specs = _specs_from_args(args)
    reports = [verify(s) for s in specs]
    timing = not args.no_timing

    if args.format == "json":
        payload = [r.to_json(timing=timing) for r in reports]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity", "m", "t", "n", "k", "order", "equal", "q_degree", "b_degree", "lhs", "rhs", "elapsed_ms"])
        for r in reports:
            mm = r.first_mismatch
            w.writerow([
                r.spec.identity, _fmt(r.spec.m), _fmt(r.spec.t), _fmt(r.spec.n), _fmt(r.spec.k),
                r.spec.order, str(r.equal).lower(),
                "" if mm is None else mm.q_degree,
                "" if mm is None or mm.b_degree is None else mm.b_degree,
                "" if mm is None else mm.lhs,
                "" if mm is None else mm.rhs,
                f"{r.elapsed_ms:.3f}" if timing else "",
            ])
        text = buf.getvalue()
    else:
        lines = []
        for r in reports:
            params = " ".join(f"{k}={v}" for k, v in r.spec.params().items() if v is not None)
            head = f"{r.spec.identity} {params + ' ' if params else ''}N={r.spec.order}"
            if r.equal:
                status = f"OK ({len(r.rows)} cells)"
            else:
                mm = r.first_mismatch
                status = f"MISMATCH at q^{mm.q_degree} b^{_fmt(mm.b_degree)}: lhs={mm.lhs} rhs={mm.rhs}"
            tail = f" [{r.elapsed_ms:.1f} ms]" if timing else ""
            lines.append(f"{head}: {status}{tail}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if all(r.equal for r in reports) else EXIT_MISMATCH


def partition_stats(lam) -> list:
    """Row of the ``--stats`` CSV: arms and hooks of row-1 cells up to the smallest part."""
    cols = range(1, lam.smallest + 1)
    return [
        format_partition(lam),
        lam.length,
        corner_count(lam),
        lam.smallest,
        " ".join(str(arm_length(lam, 1, j)) for j in cols),
        " ".join(str(hook_length(lam, 1, j)) for j in cols),
    ]


def cmd_enumerate(args) -> int:
    if args.n < 0 or (args.strict and args.n < 1):
        raise UsageError("--n must be >= 0 (>= 1 with --strict)")
    parts = enumerate_strict_partitions(args.n) if args.strict else enumerate_partitions(args.n)
    if args.format == "json":
        if args.stats:
            rows = [dict(zip(STATS_COLUMNS, partition_stats(p))) for p in parts]
        else:
            rows = [format_partition(p) for p in parts]
        text = json.dumps(rows, indent=2) + "\n"
    elif args.stats:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STATS_COLUMNS)
        for p in parts:
            w.writerow(partition_stats(p))
        text = buf.getvalue()
    else:
        text = "".join(format_partition(p) + "\n" for p in parts)
    _emit(text, args.output)
    return EXIT_OK


def _pairing_text(report) -> list[str]:
    flag = lambda b: "yes" if b else "no"
    lines = [
        f"D({report.n},{report.k}): {len(report.pairs)} pairs, {len(report.unpaired)} unpaired, "
        f"injective={flag(report.injective)} image_exact={flag(report.image_exact)}"
    ]
    lines += [f"  {format_partition(a)} -> {format_partition(b)}" for a, b in report.pairs]
    lines.append("  unpaired: " + (" ".join(format_partition(u) for u in report.unpaired) or "none"))
    lines += [f"  problem: {p}" for p in report.problems]
    return lines


def cmd_bijection(args) -> int:
    if args.trace is not None:
        if args.k is None:
            raise UsageError("--trace needs --k")
        lam = parse_partition(args.trace)
        if args.n is not None and args.n != lam.weight:
            raise UsageError(f"--n {args.n} does not match the weight of {args.trace}")
        steps = alpha_k_steps(lam.parts, args.k)
        image = alpha_k(lam.parts, args.k)
        if args.format == "json":
            text = json.dumps({
                "partition": format_partition(lam), "k": args.k,
                "steps": [list(s) for s in steps], "image": format_partition(image),
            }, indent=2) + "\n"
        else:
            chain = " -> ".join("(" + ",".join(map(str, s)) + ")" for s in steps)
            text = f"{chain} -> sorted {format_partition(image)}\n"
        _emit(text, args.output)
        return EXIT_OK

    if args.reduce is not None:
        if not args.indices:
            raise UsageError("--reduce needs --indices")
        lam = parse_partition(args.reduce)
        indices = tuple(int(x) for x in args.indices.split(",") if x.strip())
        try:
            trace = thm41_reduce(lam.parts, indices)
        except (StrictnessViolation, NonTerminationError) as exc:
            print(f"qid: reduction anomaly: {exc}", file=sys.stderr)
            return EXIT_MISMATCH
        if args.format == "json":
            text = json.dumps(trace.to_json(), indent=2) + "\n"
        else:
            d = trace.to_json()
            text = "".join(f"{key}: {d[key]}\n" for key in d)
        _emit(text, args.output)
        return EXIT_OK

    if args.sweep:
        if args.max_n is None or args.max_n < 1:
            raise UsageError("--sweep needs --max-n >= 1")
        reports = [verify_pairing(n, k) for n in range(1, args.max_n + 1) for k in range(1, n + 1)]
    else:
        if args.n is None or args.k is None:
            raise UsageError("bijection needs --n and --k, --trace, --reduce or --sweep")
        if args.n < 1 or args.k < 1:
            raise UsageError("--n and --k must be >= 1")
        reports = [verify_pairing(args.n, args.k)]

    if args.format == "json":
        payload = [r.to_json() for r in reports]
        text = json.dumps(payload[0] if len(payload) == 1 and not args.sweep else payload, indent=2) + "\n"
    elif args.sweep:
        bad = [r for r in reports if not r.ok]
        lines = []
        for r in bad:
            lines += _pairing_text(r)
        lines.append(f"checked {len(reports)} domains up to n={args.max_n}: {len(bad)} failing")
        text = "\n".join(lines) + "\n"
    else:
        text = "\n".join(_pairing_text(reports[0])) + "\n"
    _emit(text, args.output)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH


def cmd_table(args) -> int:
    args.identity = args.identity.strip()
    if args.identity.lower() == "all":
        raise UsageError("table takes a single identity")
    _check_order(args.order)
    spec = IdentitySpec(args.identity, args.order, m=args.m, t=args.t, n=args.n, k=args.k)
    try:
        spec.validate()
    except InvalidSpecError as exc:
        raise UsageError(str(exc))
    report = verify(spec)
    with_b = any(b is not None for _, b, _, _ in report.rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS if with_b else [c for c in TABLE_COLUMNS if c != "b_degree"])
    for q, b, lv, rv in report.rows:
        row = [q, b, lv, rv, str(lv == rv).lower()] if with_b else [q, lv, rv, str(lv == rv).lower()]
        w.writerow(row)
    _emit(buf.getvalue(), args.output)
    return EXIT_OK if report.equal else EXIT_MISMATCH


COMMANDS = {
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "bijection": cmd_bijection,
    "table": cmd_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PreconditionError) as exc:
        print(f"qid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SeriesOverflowError as exc:
        print(f"qid: overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW


if __name__ == "__main__":
    sys.exit(main())
