"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 leaf budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bounds import BOUND_NAMES, bounds_row, height_bound, improved_height_bound
from .coverio import FORMATS, write_cover
from .decomposer import LeafBudgetExceeded, height, iter_cover
from .discrepancy import PointFileError, disc_sandwich, read_points
from .verify import (
    VerificationReport,
    check_delta_recursion,
    check_monotonicity,
    check_partition,
    check_sibling_weights,
    uncorrected_delta,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_MAX_LEAVES = 10**7


def parse_dims(text: str) -> list[int]:
    """``"3"`` or ``"2..6"`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension spec {text!r}") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"bad dimension spec {text!r}")
    return dims


def parse_epsilons(text: str) -> list[float]:
    try:
        eps = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from None
    if not eps or any(not 0.0 < e <= 1.0 for e in eps):
        raise argparse.ArgumentTypeError("every epsilon must lie in (0, 1]")
    return eps


def epsilon_arg(text: str) -> float:
    eps = parse_epsilons(text)
    if len(eps) != 1:
        raise argparse.ArgumentTypeError("expected a single epsilon")
    return eps[0]


def _format_value(v) -> str:
    if v is None:
        return ""
    return str(v) if isinstance(v, int) else format(v, ".10g")


def cmd_cover(args) -> int:
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        stats = write_cover(args.dimension, args.epsilon, out, args.format, max_leaves=args.max_leaves)
    except LeafBudgetExceeded as exc:
        s = exc.stats
        print(f"truncated count={s.leaf_count} budget={exc.budget}", file=sys.stderr)
        return EXIT_BUDGET
    finally:
        if out is not sys.stdout:
            out.close()
    print(
        f"count={stats.leaf_count} height={stats.height} "
        f"max_weight={stats.max_leaf_weight!r} min_weight={stats.min_leaf_weight!r}"
    )
    return EXIT_OK


def cmd_bounds(args) -> int:
    dims = sorted({d for spec in args.dimension for d in spec})
    print(",".join(["d", "epsilon", *BOUND_NAMES]))
    for d in dims:
        for eps in args.epsilon:
            row = bounds_row(d, eps)
            cells = [str(d), repr(eps)] + [_format_value(row.values.get(n)) for n in BOUND_NAMES]
            print(",".join(cells))
    return EXIT_OK


def cmd_height(args) -> int:
    d, eps = args.dimension, args.epsilon
    parts = [f"height={height(d, eps)}", f"bound={height_bound(d, eps)}"]
    if eps < 1.0:
        parts.append(f"improved_bound={improved_height_bound(d, eps)}")
    print(" ".join(parts))
    return EXIT_OK


def cmd_disc(args) -> int:
    try:
        points = read_points(args.input)
    except PointFileError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    b = disc_sandwich(points, args.epsilon)
    print(f"{b.lower!r},{b.upper!r},{b.epsilon!r},{b.n},{b.d},{b.cover_size}")
    return EXIT_OK


def cmd_verify(args) -> int:
    d, eps = args.dimension, args.epsilon
    kwargs = {"delta_fn": uncorrected_delta} if args.inject_fault else {}
    report = VerificationReport(seed=args.seed)
    report.extend(check_partition(iter_cover(d, eps, **kwargs), d, eps,
                                  n_samples=args.samples, seed=args.seed))
    report.extend(check_sibling_weights(d, eps, **kwargs))
    if not args.inject_fault:
        report.extend(check_delta_recursion(d, eps, seed=args.seed))
        if height(d, eps) >= 2:
            report.extend(check_monotonicity(d, eps, args.pairs, args.seed))
    print(f"# verify d={d} epsilon={eps!r} seed={args.seed}")
    print(report)
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bracketing", description="Epsilon-bracketing covers of anchored boxes."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cover", help="write the cover, one leaf per line")
    p.add_argument("-d", "--dimension", type=int, required=True)
    p.add_argument("-e", "--epsilon", type=epsilon_arg, required=True)
    p.add_argument("-o", "--output", help="leaf file (default: stdout)")
    p.add_argument("--format", choices=FORMATS, default="jsonl")
    p.add_argument("--max-leaves", type=int, default=DEFAULT_MAX_LEAVES)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("bounds", help="CSV table of closed-form bounds")
    p.add_argument("-d", "--dimension", type=parse_dims, action="append", required=True,
                   help="dimension or inclusive range such as 2..6 (repeatable)")
    p.add_argument("-e", "--epsilon", type=parse_epsilons, required=True,
                   help="comma-separated epsilons")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("height", help="partition height and its bounds")
    p.add_argument("-d", "--dimension", type=int, required=True)
    p.add_argument("-e", "--epsilon", type=epsilon_arg, required=True)
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("disc", help="star-discrepancy bounds for a point file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-e", "--epsilon", type=epsilon_arg, required=True)
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("verify", help="run the structural checks on a cover")
    p.add_argument("-d", "--dimension", type=int, required=True)
    p.add_argument("-e", "--epsilon", type=epsilon_arg, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if isinstance(getattr(args, "dimension", None), int) and args.dimension < 1:
        print("error: dimension must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
