"""Lossless text serialization of cover leaves (JSONL and CSV).

Floats are written with 17 significant digits, enough to reload every
double bit-for-bit.
"""
from __future__ import annotations

import json
from typing import IO, Iterable, Iterator, Optional

from .decomposer import CoverStats, LeafBudgetExceeded, build_cover
from .geometry import TypedBracket

FORMATS = ("jsonl", "csv")


def _num(x: float) -> str:
    return format(x, ".17g")


def leaf_to_jsonl(b: TypedBracket) -> str:
    a = ", ".join(_num(x) for x in b.alpha)
    bb = ", ".join(_num(x) for x in b.beta)
    return f'{{"a": [{a}], "b": [{bb}], "t": {b.type_index}, "w": {_num(b.weight)}}}'


def csv_header(d: int) -> str:
    cols = [f"a{i}" for i in range(1, d + 1)] + [f"b{i}" for i in range(1, d + 1)]
    return ",".join(cols + ["t", "w"])


def leaf_to_csv(b: TypedBracket) -> str:
    vals = [_num(x) for x in b.alpha + b.beta]
    return ",".join(vals + [str(b.type_index), _num(b.weight)])


def truncation_trailer(fmt: str, written: int) -> str:
    if fmt == "jsonl":
        return json.dumps({"truncated": True, "leaves_written": written})
    return f"# truncated after {written} leaves"


def write_cover(
    d: int, epsilon: float, out: IO[str], fmt: str = "jsonl", *, max_leaves: Optional[int] = None
) -> CoverStats:
    """Stream the cover to ``out``.

    On ``LeafBudgetExceeded`` the trailer is written and flushed before the
    exception propagates.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    encode = leaf_to_jsonl if fmt == "jsonl" else leaf_to_csv
    if fmt == "csv":
        out.write(csv_header(d) + "\n")

    def sink(b):
        out.write(encode(b) + "\n")

    try:
        return build_cover(d, epsilon, sink, max_leaves=max_leaves)
    except LeafBudgetExceeded as exc:
        out.write(truncation_trailer(fmt, exc.stats.leaf_count) + "\n")
        out.flush()
        raise


def read_cover(lines: Iterable[str], fmt: str = "jsonl") -> Iterator[TypedBracket]:
    """Parse leaves written by ``write_cover``; headers and trailers are skipped."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if fmt == "jsonl":
            rec = json.loads(line)
            if "a" not in rec:
                continue
            yield TypedBracket(tuple(map(float, rec["a"])), tuple(map(float, rec["b"])), int(rec["t"]))
        else:
            if line.startswith("a1"):
                continue
            fields = line.split(",")
            d = (len(fields) - 2) // 2
            vals = tuple(float(x) for x in fields[: 2 * d])
            yield TypedBracket(vals[:d], vals[d:], int(fields[2 * d]))
