"""Thiémard's recursive partition of the unit cube into epsilon-brackets.

A box ``P = [alpha, beta)`` of type ``j <= d`` whose weight exceeds epsilon
is split by ``decompose_step`` into the children of types ``j, ..., d``
(each of weight ``delta * W(P)``) and one terminal child ``[gamma, beta)``
of type ``d + 1`` and weight epsilon.  Leaves are streamed depth first,
children visited in increasing type order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import prod
from typing import Callable, Iterator, NamedTuple, Optional

from .geometry import TypedBracket, unit_cube

DeltaFn = Callable[[TypedBracket, int, float], float]


class NumericalDomainError(ArithmeticError):
    """A shrink factor left (0, 1) or a formula was evaluated outside its domain."""


class DepthLimitExceeded(RuntimeError):
    pass


class LeafBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, stats: "CoverStats"):
        super().__init__(f"cover has more than {budget} leaves")
        self.budget = budget
        self.stats = stats


# A weight within GATE_TOL of epsilon counts as an epsilon-bracket.  Exact
# ties (e.g. d = 1, 1/epsilon integral) otherwise split on rounding noise.
GATE_TOL = 1e-13


def exceeds(w: float, epsilon: float) -> bool:
    """Decomposition gate: does a box of weight ``w`` still need splitting?"""
    return w > epsilon + GATE_TOL


def check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    return epsilon


def check_dimension(d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def depth_limit(d: int, epsilon: float) -> int:
    """Termination guard: one more than any legal depth plus slack."""
    return math.ceil(d * (1.0 / epsilon - 1.0)) + 2


def delta_of(P: TypedBracket, j: int, epsilon: float) -> float:
    """Shrink factor of ``decompose(P, j)``.

    ``((prod(beta) - eps) / (prod(alpha[:j-1]) * prod(beta[j-1:]))) ** (1/(d-j+1))``
    """
    alpha, beta = P.alpha, P.beta
    d = len(beta)
    if not 1 <= j <= d:
        raise ValueError(f"type {j} cannot be decomposed in dimension {d}")
    num = prod(beta) - epsilon
    den = prod(alpha[: j - 1] + beta[j - 1 :])
    if num <= 0.0 or den <= 0.0:
        raise NumericalDomainError(f"weight of {P} does not exceed epsilon={epsilon}")
    delta = (num / den) ** (1.0 / (d - j + 1))
    if not 0.0 < delta < 1.0:
        raise NumericalDomainError(f"delta={delta!r} outside (0, 1) for {P}")
    return delta


def gamma_of(P: TypedBracket, j: int, delta: float) -> tuple:
    """Split corner: alpha copied below index j, beta scaled by delta from j on."""
    return P.alpha[: j - 1] + tuple(delta * b for b in P.beta[j - 1 :])


def split(P: TypedBracket, j: int, delta: float) -> list[TypedBracket]:
    """Children of ``P`` for a given shrink factor, in type order j..d+1."""
    alpha, beta = P.alpha, P.beta
    d = len(beta)
    g = gamma_of(P, j, delta)
    children = [
        TypedBracket(g[: k - 1] + alpha[k - 1 :], beta[: k - 1] + (g[k - 1],) + beta[k:], k)
        for k in range(j, d + 1)
    ]
    children.append(TypedBracket(g, beta, d + 1))
    return children


def decompose_step(
    P: TypedBracket, j: int, epsilon: float, delta_fn: DeltaFn = delta_of
) -> list[TypedBracket]:
    """Partition ``P`` (type ``j``, weight > epsilon) into its d - j + 2 children."""
    if j > len(P.beta):
        raise ValueError("type d + 1 brackets are never decomposed")
    if not exceeds(P.weight, epsilon):
        raise ValueError(f"weight {P.weight!r} does not exceed epsilon={epsilon}")
    return split(P, j, delta_fn(P, j, epsilon))


def delta_recursion(delta_P: float, W_P: float, i: int, d: int, epsilon: float) -> float:
    """Shrink factor of the type-i child computed from its parent's data alone.

    ``((W - eps/delta) / (W - eps)) ** (1/(d-i+1)) * delta``; independent of
    the child's coordinates, so it cross-checks ``delta_of``.
    """
    if not W_P > epsilon or not delta_P * W_P > epsilon:
        raise NumericalDomainError("child is a leaf; no shrink factor is defined")
    if not 1 <= i <= d:
        raise ValueError(f"type {i} outside 1..{d}")
    return ((W_P - epsilon / delta_P) / (W_P - epsilon)) ** (1.0 / (d - i + 1)) * delta_P


def height(d: int, epsilon: float) -> int:
    """Depth of the partition, from the weights along the all-ones path."""
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    w, r = 1.0, 0
    while exceeds(w, epsilon):
        w *= ((w - epsilon) / w) ** (1.0 / d)
        r += 1
    return r


def ones_path_weights(d: int, epsilon: float) -> list[float]:
    """``[w_0, w_1, ..., w_h]`` from the scalar recursion used by ``height``."""
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    ws = [1.0]
    while exceeds(ws[-1], epsilon):
        w = ws[-1]
        ws.append(((w - epsilon) / w) ** (1.0 / d) * w)
    return ws


class DecompositionNode(NamedTuple):
    """A box met during the decomposition.

    ``path`` lists the child types taken from the root; its last entry is
    the node's own type.  ``delta`` is None exactly for leaves.  ``parent``
    links back to the root, so only the current branch is kept alive.
    """

    bracket: TypedBracket
    weight: float
    delta: Optional[float]
    path: tuple
    parent: Optional["DecompositionNode"]

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def is_leaf(self) -> bool:
        return self.delta is None


def iter_nodes(
    d: int,
    epsilon: float,
    *,
    delta_fn: DeltaFn = delta_of,
    max_depth: Optional[int] = None,
) -> Iterator[DecompositionNode]:
    """Every node of the decomposition tree in depth-first preorder."""
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    if max_depth is None:
        max_depth = depth_limit(d, epsilon)
    root = unit_cube(d)
    stack = [(root, (), None)]
    while stack:
        P, path, parent = stack.pop()
        if len(path) > max_depth:
            raise DepthLimitExceeded(f"depth {len(path)} exceeds {max_depth} at {P}")
        w = P.weight
        j = P.type_index
        if j > d or not exceeds(w, epsilon):
            yield DecompositionNode(P, w, None, path, parent)
            continue
        delta = delta_fn(P, j, epsilon)
        node = DecompositionNode(P, w, delta, path, parent)
        yield node
        for child in reversed(split(P, j, delta)):
            stack.append((child, path + (child.type_index,), node))


def iter_cover(d: int, epsilon: float, **kwargs) -> Iterator[TypedBracket]:
    """Leaves of the cover, streamed in deterministic order."""
    for node in iter_nodes(d, epsilon, **kwargs):
        if node.delta is None:
            yield node.bracket


@dataclass(frozen=True)
class CoverStats:
    leaf_count: int
    height: int
    max_leaf_weight: float
    min_leaf_weight: float
    epsilon: float
    dimension: int


def build_cover(
    d: int,
    epsilon: float,
    sink: Optional[Callable[[TypedBracket], object]] = None,
    *,
    max_leaves: Optional[int] = None,
    delta_fn: DeltaFn = delta_of,
) -> CoverStats:
    """Generate the epsilon-bracketing cover, feeding each leaf to ``sink``.

    Raises ``LeafBudgetExceeded`` once more than ``max_leaves`` leaves appear;
    the first ``max_leaves`` have already been delivered by then.
    """
    count, h = 0, 0
    wmax, wmin = -math.inf, math.inf
    for node in iter_nodes(d, epsilon, delta_fn=delta_fn):
        if node.delta is not None:
            continue
        if max_leaves is not None and count >= max_leaves:
            raise LeafBudgetExceeded(
                max_leaves, CoverStats(count, h, wmax, wmin, float(epsilon), d)
            )
        if sink is not None:
            sink(node.bracket)
        count += 1
        h = max(h, len(node.path))
        wmax = max(wmax, node.weight)
        wmin = min(wmin, node.weight)
    return CoverStats(count, h, wmax, wmin, float(epsilon), d)


def fast_cover_stats(d: int, epsilon: float) -> CoverStats:
    """Same result as ``build_cover(d, epsilon)`` from a compiled kernel.

    Intended for covers with tens of millions of leaves where nothing but
    the summary is needed.
    """
    from ._kernel import cover_stats_kernel

    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    count, h, wmax, wmin = cover_stats_kernel(d, epsilon, depth_limit(d, epsilon), GATE_TOL)
    if count < 0:
        raise DepthLimitExceeded(f"depth limit {depth_limit(d, epsilon)} exceeded")
    return CoverStats(int(count), int(h), float(wmax), float(wmin), epsilon, d)
