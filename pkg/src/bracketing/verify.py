"""Independent checks of generated covers.

Every check returns a ``VerificationReport`` instead of raising, and a
failed check carries the offending bracket, point or path as its witness.
"""
from __future__ import annotations

import math
from math import prod
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import numpy as np

from .bounds import height_bound, improved_height_bound
from .decomposer import (
    DeltaFn,
    DepthLimitExceeded,
    NumericalDomainError,
    build_cover,
    delta_of,
    delta_recursion,
    height,
    iter_nodes,
    split,
)
from .discrepancy import as_point_set
from .geometry import TypedBracket, cell_volume

WEIGHT_TOL = 1e-12
TERMINAL_WEIGHT_TOL = 1e-9
VOLUME_TOL = 1e-9
DELTA_REL_TOL = 1e-10
EQUALITY_TOL = 1e-12
EXHAUSTIVE_DISJOINT_LIMIT = 10_000


@dataclass
class Check:
    name: str
    passed: bool
    deviation: float
    witness: Any = None

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name} deviation={self.deviation:.3e}"
        if not self.passed and self.witness is not None:
            line += f" witness={self.witness}"
        return line


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, deviation, witness=None):
        self.checks.append(Check(name, bool(passed), float(deviation), None if passed else witness))

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        self.checks.extend(other.checks)
        return self

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


# -- partition ---------------------------------------------------------------


def _disjointness(A: np.ndarray, B: np.ndarray):
    """First pair of cells with overlapping interiors, or None."""
    for start in range(len(A)):
        lo = np.maximum(A[start], A[start + 1 :])
        hi = np.minimum(B[start], B[start + 1 :])
        hit = np.nonzero(np.all(lo < hi, axis=1))[0]
        if hit.size:
            return start, start + 1 + int(hit[0])
    return None


def check_partition(
    leaves: Iterable[TypedBracket],
    d: int,
    epsilon: float,
    *,
    n_samples: int = 100_000,
    seed: int = 0,
    chunk: int = 4096,
) -> VerificationReport:
    """Volumes sum to one, leaves are epsilon-brackets, sampled points hit one cell each."""
    rng = np.random.default_rng(seed)
    X = rng.random((n_samples, d))
    hits = np.zeros(n_samples, dtype=np.int64)
    order = [np.argsort(X[:, i], kind="stable") for i in range(d)]
    ranked = [X[order[i], i] for i in range(d)]
    volumes = []
    worst_w, worst_leaf = -math.inf, None
    keep = []
    count = 0

    def flush(batch):
        A = np.array([b.alpha for b in batch])
        B = np.array([b.beta for b in batch])
        # scan only the samples inside each cell's narrowest slab
        for lo, hi, ax in zip(A, B, np.argmin(B - A, axis=1)):
            s = np.searchsorted(ranked[ax], lo[ax], side="left")
            e = np.searchsorted(ranked[ax], hi[ax], side="left")
            idx = order[ax][s:e]
            Y = X[idx]
            hits[idx[np.all((Y >= lo) & (Y < hi), axis=1)]] += 1

    report = VerificationReport(seed=seed)
    batch = []
    try:
        for leaf in leaves:
            count += 1
            volumes.append(cell_volume(leaf))
            w = leaf.weight
            if w > worst_w:
                worst_w, worst_leaf = w, leaf
            if count <= EXHAUSTIVE_DISJOINT_LIMIT:
                keep.append(leaf)
            batch.append(leaf)
            if len(batch) == chunk:
                flush(batch)
                batch = []
    except (DepthLimitExceeded, NumericalDomainError) as exc:
        report.add("construction", False, math.inf, str(exc))
    if batch:
        flush(batch)

    total = math.fsum(volumes)
    report.add("volume_sum", abs(total - 1.0) <= VOLUME_TOL, abs(total - 1.0), {"sum": total})
    excess = worst_w - epsilon
    report.add("leaf_weight", excess <= WEIGHT_TOL, max(excess, 0.0), worst_leaf)
    bad = np.nonzero(hits != 1)[0]
    witness = None
    if bad.size:
        i = int(bad[0])
        witness = {"point": X[i].tolist(), "cells": int(hits[i])}
    report.add("unique_cell", bad.size == 0, bad.size / n_samples, witness)
    if count <= EXHAUSTIVE_DISJOINT_LIMIT and count > 1:
        pair = _disjointness(
            np.array([b.alpha for b in keep]), np.array([b.beta for b in keep])
        )
        report.add("disjoint", pair is None, 0.0 if pair is None else 1.0,
                   pair and (keep[pair[0]], keep[pair[1]]))
    return report


# -- per-node structure -------------------------------------------------------


def uncorrected_delta(P: TypedBracket, j: int, epsilon: float) -> float:
    """Shrink factor with the root taken to the fixed power 1/d.

    Agrees with ``delta_of`` only for type-1 boxes; used as a fault to show
    the structural checks detect a wrong exponent.
    """
    d = len(P.beta)
    num = prod(P.beta) - epsilon
    den = prod(P.alpha[: j - 1] + P.beta[j - 1 :])
    return (num / den) ** (1.0 / d)


def check_sibling_weights(
    d: int, epsilon: float, *, delta_fn: DeltaFn = delta_of, max_depth: Optional[int] = None
) -> VerificationReport:
    """Child counts, equal sibling weights, epsilon-weight terminal child, alpha_d == 0."""
    report = VerificationReport()
    spread = dev_delta_w = dev_term = 0.0
    w_spread = w_delta_w = w_term = w_struct = None
    structural_ok = True
    try:
        for node in iter_nodes(d, epsilon, delta_fn=delta_fn, max_depth=max_depth):
            P = node.bracket
            if P.type_index <= d and P.alpha[-1] != 0.0:
                structural_ok, w_struct = False, P
            if node.delta is None:
                continue
            j = P.type_index
            if not 0.0 < node.delta < 1.0:
                structural_ok, w_struct = False, (P, node.delta)
            children = split(P, j, node.delta)
            if len(children) != d - j + 2:
                structural_ok, w_struct = False, (P, len(children))
            typed = [c.weight for c in children[:-1]]
            s = max(typed) - min(typed)
            if s > spread:
                spread, w_spread = s, node.path
            target = node.delta * node.weight
            e = max(abs(t - target) for t in typed)
            if e > dev_delta_w:
                dev_delta_w, w_delta_w = e, node.path
            t = abs(children[-1].weight - epsilon)
            if t > dev_term:
                dev_term, w_term = t, node.path
    except (DepthLimitExceeded, NumericalDomainError) as exc:
        report.add("construction", False, math.inf, str(exc))
    report.add("sibling_weights_equal", spread <= WEIGHT_TOL, spread, w_spread)
    report.add("child_weight_is_delta_times_parent", dev_delta_w <= WEIGHT_TOL, dev_delta_w, w_delta_w)
    report.add("terminal_child_weight_is_epsilon", dev_term <= TERMINAL_WEIGHT_TOL, dev_term, w_term)
    report.add("structure", structural_ok, 0.0 if structural_ok else 1.0, w_struct)
    return report


def check_height(d: int, epsilon: float, *, stats=None) -> VerificationReport:
    """Measured height against the scalar recursion and both closed-form bounds."""
    if stats is None:
        stats = build_cover(d, epsilon)
    h = height(d, epsilon)
    report = VerificationReport()
    report.add("height_matches_recursion", stats.height == h, abs(stats.height - h),
               {"measured": stats.height, "recursion": h})
    hb = height_bound(d, epsilon)
    report.add("height_le_bound", stats.height <= hb, max(stats.height - hb, 0),
               {"measured": stats.height, "bound": hb})
    if epsilon < 1.0:
        ib = improved_height_bound(d, epsilon)
        report.add("height_le_improved_bound", stats.height <= ib, max(stats.height - ib, 0),
                   {"measured": stats.height, "bound": ib})
    return report


def check_delta_recursion(
    d: int, epsilon: float, paths: Optional[int] = None, seed: int = 0
) -> VerificationReport:
    """Compare each decomposed child's delta with the value predicted from its parent.

    ``paths=None`` checks every decomposed edge; otherwise a seeded sample
    of that many edges.
    """
    edges = []
    for node in iter_nodes(d, epsilon):
        if node.delta is None or node.parent is None:
            continue
        edges.append(node)
    if paths is not None and paths < len(edges):
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(len(edges), size=paths, replace=False))
        edges = [edges[i] for i in idx]
    worst, witness = 0.0, None
    for node in edges:
        parent = node.parent
        predicted = delta_recursion(parent.delta, parent.weight, node.bracket.type_index, d, epsilon)
        rel = abs(node.delta - predicted) / node.delta
        if rel > worst:
            worst, witness = rel, {"path": node.path, "delta": node.delta, "recursion": predicted}
    report = VerificationReport(seed=seed)
    report.add("delta_recursion", worst <= DELTA_REL_TOL, worst, witness)
    report.add("edges_checked", len(edges) > 0, float(len(edges)))
    return report


# -- monotonicity along paths -----------------------------------------------


def realized_paths(d: int, epsilon: float) -> dict:
    """``path -> (weight, delta)`` for every box of type <= d below the root."""
    out = {}
    for node in iter_nodes(d, epsilon):
        if node.path and node.bracket.type_index <= d:
            out[node.path] = (node.weight, node.delta)
    return out


def compare_paths(i: tuple, j: tuple, table: dict, epsilon: float) -> list:
    """``(ok, kind, margin)`` for each ordering expected between realized paths ``i <= j``."""
    r = len(j)
    wi, di = table[i]
    wj, dj = table[j]
    out = []
    strict_w = any(a < b for a, b in zip(i[: r - 1], j[: r - 1]))
    diff = wi - wj
    if strict_w:
        out.append((diff > EQUALITY_TOL, "weight_strict", diff))
    else:
        out.append((abs(diff) <= EQUALITY_TOL, "weight_equal", abs(diff)))
    if wj > epsilon:
        strict_d = any(a < b for a, b in zip(i, j))
        diff = di - dj
        if strict_d:
            out.append((diff > EQUALITY_TOL, "delta_strict", diff))
        else:
            out.append((abs(diff) <= EQUALITY_TOL, "delta_equal", abs(diff)))
    return out


def check_monotonicity(
    d: int, epsilon: float, sample_pairs: int = 1000, seed: int = 0, *, table: dict | None = None
) -> VerificationReport:
    """Sample realized paths ``j`` and dominated paths ``i <= j`` and test the ordering.

    A dominated path that was never realized is itself a failure: its
    prefixes are at least as heavy as those of ``j``.
    """
    if table is None:
        table = realized_paths(d, epsilon)
    keys = list(table)
    rng = np.random.default_rng(seed)
    report = VerificationReport(seed=seed)
    if not keys:
        report.add("paths_available", False, 0.0, "tree has no nodes below the root")
        return report
    min_strict = {"weight_strict": math.inf, "delta_strict": math.inf}
    max_equal = {"weight_equal": 0.0, "delta_equal": 0.0}
    counts = dict.fromkeys(list(min_strict) + list(max_equal), 0)
    failures = []
    missing = None
    for _ in range(sample_pairs):
        j = keys[rng.integers(len(keys))]
        i, lo = [], 1
        for jv in j:
            lo = int(rng.integers(lo, jv + 1))
            i.append(lo)
        i = tuple(i)
        if i not in table:
            missing = missing or (i, j)
            continue
        for ok, kind, margin in compare_paths(i, j, table, epsilon):
            counts[kind] += 1
            if kind in min_strict:
                min_strict[kind] = min(min_strict[kind], margin)
            else:
                max_equal[kind] = max(max_equal[kind], margin)
            if not ok:
                failures.append((kind, i, j, margin))
    report.add("dominated_paths_realized", missing is None, 0.0 if missing is None else 1.0, missing)
    for kind in ("weight_strict", "delta_strict"):
        bad = [f for f in failures if f[0] == kind]
        margin = min_strict[kind] if counts[kind] else 0.0
        report.add(f"{kind} (n={counts[kind]}, min margin)", not bad, margin, bad[:1])
    for kind in ("weight_equal", "delta_equal"):
        bad = [f for f in failures if f[0] == kind]
        report.add(f"{kind} (n={counts[kind]})", not bad, max_equal[kind], bad[:1])
    return report


# -- brute-force discrepancy -------------------------------------------------

MAX_GRID = 10**6


def _grid(axes):
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def exact_star_discrepancy(points) -> float:
    """``sup_x |vol([0,x)) - A(x)/n|`` over ``x in [0,1]^d`` by grid enumeration.

    ``vol - A/n`` peaks at grid corners built from point coordinates and 1,
    with the open count; ``A/n - vol`` is approached from above corners
    built from 0 and the point coordinates, with the closed count.
    """
    P = as_point_set(points)
    n, d = P.shape
    if (n + 1) ** d > MAX_GRID:
        raise ValueError(f"grid of {(n + 1) ** d} corners is too large for brute force")
    upper_axes = [np.unique(np.append(P[:, i], 1.0)) for i in range(d)]
    lower_axes = [np.unique(np.append(P[:, i], 0.0)) for i in range(d)]
    best = 0.0
    for axes, closed in ((upper_axes, False), (lower_axes, True)):
        X = _grid(axes)
        for s in range(0, len(X), 4096):
            C = X[s : s + 4096]
            vol = np.prod(C, axis=1)
            if closed:
                frac = np.all(P[None] <= C[:, None], axis=2).sum(axis=1) / n
                best = max(best, float(np.max(frac - vol)))
            else:
                frac = np.all(P[None] < C[:, None], axis=2).sum(axis=1) / n
                best = max(best, float(np.max(vol - frac)))
    return best
