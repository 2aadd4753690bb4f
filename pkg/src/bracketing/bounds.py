"""Closed-form cardinality, height and packing bounds for anchored-box covers.

Binomials are exact Python integers; everything else is a float evaluated
exactly as the closed form reads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb, factorial

from .decomposer import check_dimension, check_epsilon, height

F_SERIES_MAX_TERMS = 200


def _open_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    return epsilon


def dd_over_dfact(d: int) -> float:
    """``d**d / d!`` evaluated exactly, then rounded once."""
    return d**d / factorial(d)


def leaf_count_triangular(w: int, h: int) -> int:
    """Leaves of the triangular tree of width ``w`` and height ``h``."""
    if w < 1 or h < 0:
        raise ValueError("need w >= 1 and h >= 0")
    return comb(h + w - 1, w - 1)


def tree_cardinality_bound(d: int, h: int) -> int:
    """``C(h + d, d)``: leaves of the width-(d+1) triangular tree of height h."""
    return leaf_count_triangular(check_dimension(d) + 1, h)


def height_bound(d: int, epsilon: float) -> int:
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    return math.ceil(d * (1.0 / epsilon - 1.0))


def thiemard_bound(d: int, epsilon: float) -> float:
    """Thiémard's original estimate ``(d^d/d!) (ln(1/eps)/eps + 1)^d``, d >= 3."""
    if check_dimension(d) < 3:
        raise ValueError("Thiémard's estimate is stated for d >= 3")
    epsilon = _open_epsilon(epsilon)
    return dd_over_dfact(d) * (math.log(1.0 / epsilon) / epsilon + 1.0) ** d


def new_bound(d: int, epsilon: float, *, envelope: bool = False) -> float:
    """Improved cardinality bound for Thiémard's cover.

    d = 2: ``2 (1/eps + 1/2) / eps``.
    d >= 3: ``(d^d/d!) (1/eps - (1 - 3/d)/2)^d``, or with ``envelope=True``
    the simpler ``(d^d/d!) eps^-d`` it is dominated by.
    """
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    if d == 1:
        raise ValueError("no closed-form cardinality bound for d = 1")
    inv = 1.0 / epsilon
    if d == 2:
        return 2.0 * (inv + 0.5) * inv
    if envelope:
        return dd_over_dfact(d) * inv**d
    return dd_over_dfact(d) * (inv - 0.5 * (1.0 - 3.0 / d)) ** d


def intermediate_bound(d: int, epsilon: float) -> float:
    """``(d^d/d!) (1/eps + 1/d)(1/eps)(1/eps - 1/d)...(1/eps - (d-2)/d)``."""
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    if d < 2:
        raise ValueError("need d >= 2")
    inv = 1.0 / epsilon
    factors = [inv - k / d for k in range(-1, d - 1)]
    if min(factors) <= 0.0:
        raise ValueError(f"nonpositive factor for d={d}, epsilon={epsilon}")
    return dd_over_dfact(d) * math.prod(factors)


def f_series(d: int, x: float, rel_tol: float = 1e-12) -> float:
    """``1 + sum_k (k-1/d)(k-1-1/d)...(1-1/d)/(k+1)! x^k`` on ``[0, 1)``.

    Summation stops once the next term drops below ``rel_tol`` times the
    running sum.  Satisfies ``1 - (1-x)^(1/d) = (x/d) f(x)``.
    """
    d = check_dimension(d)
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    # term_k = coef_k x^k with coef_k = prod_{m<=k}(m - 1/d) / (k+1)!
    # the first-order term is always kept so f(x) >= 1 + (d-1)x/(2d) holds exactly
    first = (1.0 - 1.0 / d) / 2.0 * x
    total = 1.0 + first
    term = first * (2 - 1.0 / d) / 3 * x
    for k in range(2, F_SERIES_MAX_TERMS + 1):
        if term < rel_tol * total:
            return total
        total += term
        term *= (k + 1 - 1.0 / d) / (k + 2) * x
    raise ArithmeticError(f"f_series did not converge in {F_SERIES_MAX_TERMS} terms at x={x}")


def improved_height_bound(d: int, epsilon: float) -> int:
    d = check_dimension(d)
    epsilon = _open_epsilon(epsilon)
    return math.ceil(d * (1.0 / epsilon - 1.0) / f_series(d, epsilon))


def improved_card_bound(d: int, epsilon: float, *, f_value: float | None = None) -> float:
    """Cardinality bound refined by the series ``f``.

    ``f_value=1.0`` gives the plain form the refinement is compared against.
    """
    d = check_dimension(d)
    epsilon = _open_epsilon(epsilon)
    if d < 2:
        raise ValueError("need d >= 2")
    f = f_series(d, epsilon) if f_value is None else f_value
    q = (1.0 / epsilon - 1.0) / f
    if d == 2:
        return 2.0 * (q + 1.5) * (q + 1.0)
    return dd_over_dfact(d) * (q + 0.5 * (1.0 + 3.0 / d)) ** d


def prior_explicit_bound(d: int, epsilon: float) -> float:
    """Previous best explicit bound ``max(1, 1.1^(d-101)) (d^d/d!) (1/eps + 1)^d``."""
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    return max(1.0, 1.1 ** (d - 101)) * dd_over_dfact(d) * (1.0 / epsilon + 1.0) ** d


def rectangle_bound(corner_bound_at_half_epsilon: float) -> float:
    """Bracketing bound for arbitrary boxes from one for corners at eps/2."""
    if corner_bound_at_half_epsilon < 1:
        raise ValueError("a bracketing count is at least 1")
    return corner_bound_at_half_epsilon**2


def delta_cover_bound(bracketing_count: float) -> float:
    if bracketing_count < 1:
        raise ValueError("a bracketing count is at least 1")
    return 2 * bracketing_count


def haussler_bound(d: int, epsilon: float) -> float:
    d = check_dimension(d)
    epsilon = _open_epsilon(epsilon)
    return (d + 1) * 2.0**d * math.e ** (d + 1) * epsilon**-d


def stirling_envelope(d: int) -> float:
    """``e^d / sqrt(2 pi d)``, an upper bound for ``d^d / d!``."""
    return math.e**d / math.sqrt(2.0 * math.pi * d)


def packing_bounds(d: int, epsilon: float) -> tuple[float, float]:
    """``(haussler, via_bracketing)`` upper bounds on the L1 packing number."""
    if check_dimension(d) < 3:
        raise ValueError("the bracketing-derived packing bound needs d >= 3")
    epsilon = _open_epsilon(epsilon)
    return haussler_bound(d, epsilon), new_bound(d, epsilon, envelope=True)


def d2_explicit_bound(epsilon: float) -> float:
    """Explicit-constant bound for d = 2 from a different construction."""
    epsilon = _open_epsilon(epsilon)
    ln2 = math.log(2.0)
    return 2 * ln2 / epsilon**2 + 3 * (ln2 + 1) / epsilon - (13 / 9 * ln2 - 1)


BOUND_NAMES = (
    "height_bound",
    "improved_height",
    "tree_binomial",
    "intermediate",
    "new_d2",
    "new_dge3",
    "improved_card",
    "thiemard",
    "prior_explicit",
    "d2_explicit",
    "rectangle",
    "haussler",
    "stirling_packing",
)


@dataclass
class BoundsRow:
    dimension: int
    epsilon: float
    values: dict = field(default_factory=dict)


def bounds_row(d: int, epsilon: float) -> BoundsRow:
    """Every bound that applies at ``(d, epsilon)``; inapplicable ones are omitted.

    ``tree_binomial`` uses the true height of the partition.
    """
    d = check_dimension(d)
    epsilon = check_epsilon(epsilon)
    h = height(d, epsilon)
    candidates = {
        "height_bound": lambda: height_bound(d, epsilon),
        "improved_height": lambda: improved_height_bound(d, epsilon),
        "tree_binomial": lambda: tree_cardinality_bound(d, h),
    }
    if d >= 2:
        candidates.update(
            {
                "intermediate": lambda: intermediate_bound(d, epsilon),
                "improved_card": lambda: improved_card_bound(d, epsilon),
                "prior_explicit": lambda: prior_explicit_bound(d, epsilon),
                "rectangle": lambda: rectangle_bound(new_bound(d, epsilon / 2)),
            }
        )
    if d == 2:
        candidates["new_d2"] = lambda: new_bound(2, epsilon)
        candidates["d2_explicit"] = lambda: d2_explicit_bound(epsilon)
    if d >= 3:
        candidates["new_dge3"] = lambda: new_bound(d, epsilon)
        candidates["thiemard"] = lambda: thiemard_bound(d, epsilon)
        candidates["haussler"] = lambda: haussler_bound(d, epsilon)
        candidates["stirling_packing"] = lambda: stirling_envelope(d) * epsilon**-d

    row = BoundsRow(d, epsilon)
    for name in BOUND_NAMES:
        if name not in candidates:
            continue
        try:
            row.values[name] = candidates[name]()
        except (ValueError, ArithmeticError):
            pass
    return row
