"""Star-discrepancy bounds for point sets from an epsilon-bracketing cover.

For a leaf ``[alpha, beta)`` every corner ``x`` with ``alpha <= x <= beta``
satisfies ``vol(alpha) <= vol(x) <= vol(beta)`` and ``A(alpha) <= A(x) <= A(beta)``,
where ``A`` counts points strictly inside the anchored box.  Taking maxima
over the leaves gives ``lower <= D* <= upper <= D* + epsilon``.

Leaves are consumed in chunks and never stored, so memory stays bounded
while the cover streams past.  Point counting is a dense comparison per
chunk with no spatial index, which is the cost that dominates for large n.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from os import PathLike
from typing import Iterable, Sequence, Union

import numpy as np

from .decomposer import check_epsilon, iter_cover


class PointFileError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)
        self.lineno = lineno


def as_point_set(points) -> np.ndarray:
    """Validate an ``(n, d)`` array of points in ``[0, 1)^d``."""
    P = np.asarray(points, dtype=np.float64)
    if P.ndim == 1:
        P = P[:, None]
    if P.ndim != 2 or P.shape[0] == 0 or P.shape[1] == 0:
        raise ValueError("need a nonempty (n, d) array of points")
    if not np.all((P >= 0.0) & (P < 1.0)):
        raise ValueError("all coordinates must lie in [0, 1)")
    return P


def read_points(source: Union[str, PathLike, Iterable[str]]) -> np.ndarray:
    """Parse whitespace-separated coordinates, one point per line; '#' starts a comment line."""
    if isinstance(source, (str, PathLike)):
        with open(source, encoding="utf-8") as fh:
            return read_points(fh.readlines())
    rows, d = [], None
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError:
            raise PointFileError(f"cannot parse {line!r}", lineno) from None
        if d is None:
            d = len(row)
        elif len(row) != d:
            raise PointFileError(f"expected {d} coordinates, got {len(row)}", lineno)
        bad = [c for c in row if not 0.0 <= c < 1.0]
        if bad:
            raise PointFileError(f"coordinate {bad[0]!r} outside [0, 1)", lineno)
        rows.append(row)
    if not rows:
        raise PointFileError("no points found")
    return np.array(rows, dtype=np.float64)


def count_below(points, x: Sequence[float]) -> int:
    """Number of points strictly inside ``[0, x)``."""
    P = np.asarray(points, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != x.shape[0]:
        raise ValueError("dimension mismatch between points and corner")
    return int(np.all(P < x, axis=1).sum())


def _volumes(corners: np.ndarray) -> np.ndarray:
    v = corners[:, 0].copy()
    for i in range(1, corners.shape[1]):
        v *= corners[:, i]
    return v


def _counts(P: np.ndarray, corners: np.ndarray) -> np.ndarray:
    return np.all(P[None, :, :] < corners[:, None, :], axis=2).sum(axis=1)


@dataclass(frozen=True)
class DiscrepancyBound:
    lower: float
    upper: float
    epsilon: float
    n: int
    d: int
    cover_size: int


def disc_sandwich(points, epsilon: float, *, chunk: int = 4096) -> DiscrepancyBound:
    P = as_point_set(points)
    epsilon = check_epsilon(epsilon)
    n, d = P.shape
    lower = upper = 0.0
    size = 0
    leaves = iter_cover(d, epsilon)
    while True:
        batch = list(islice(leaves, chunk))
        if not batch:
            break
        size += len(batch)
        A = np.array([b.alpha for b in batch])
        B = np.array([b.beta for b in batch])
        va, vb = _volumes(A), _volumes(B)
        fa, fb = _counts(P, A) / n, _counts(P, B) / n
        upper = max(upper, float(np.max(vb - fa)), float(np.max(fb - va)))
        lower = max(lower, float(np.max(np.abs(va - fa))), float(np.max(np.abs(vb - fb))))
    return DiscrepancyBound(lower, upper, epsilon, n, d, size)
