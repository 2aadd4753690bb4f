"""Half-open axis-parallel boxes and anchored corners in the unit cube.

Coordinates are plain tuples of floats so that brackets are immutable,
hashable and compare bit-for-bit.  All products run left to right in
coordinate order.
"""
from math import prod
from typing import NamedTuple, Sequence

Point = tuple  # tuple[float, ...], every coordinate in [0, 1]


def as_point(coords: Sequence[float]) -> Point:
    """Validate ``coords`` and return them as a tuple of floats."""
    p = tuple(float(c) for c in coords)
    if not p:
        raise ValueError("a point needs at least one coordinate")
    for i, c in enumerate(p):
        if not 0.0 <= c <= 1.0:
            raise ValueError(f"coordinate {i} = {c!r} is outside [0, 1]")
    return p


class CornerBox(NamedTuple):
    """The anchored box ``[0, upper)``."""

    upper: Point

    @property
    def volume(self) -> float:
        return anchored_volume(self.upper)


class TypedBracket(NamedTuple):
    """Half-open box ``[alpha, beta)`` tagged with its decomposition type.

    Types run from 1 to d + 1; a type d + 1 box is always a terminal
    bracket of the cover.
    """

    alpha: Point
    beta: Point
    type_index: int

    @property
    def dim(self) -> int:
        return len(self.beta)

    @property
    def weight(self) -> float:
        return weight(self)

    def validate(self) -> "TypedBracket":
        d = len(self.beta)
        if len(self.alpha) != d or d == 0:
            raise ValueError("alpha and beta must have the same nonzero length")
        as_point(self.alpha)
        as_point(self.beta)
        if any(a > b for a, b in zip(self.alpha, self.beta)):
            raise ValueError("alpha must be <= beta componentwise")
        if not 1 <= self.type_index <= d + 1:
            raise ValueError(f"type_index {self.type_index} outside 1..{d + 1}")
        if self.type_index <= d and self.alpha[-1] != 0.0:
            raise ValueError("brackets of type <= d must have alpha_d == 0")
        return self


def unit_cube(d: int) -> TypedBracket:
    """``[0, 1)^d`` as a type-1 bracket, the root of every decomposition."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return TypedBracket((0.0,) * d, (1.0,) * d, 1)


def anchored_volume(x: Sequence[float]) -> float:
    """Lebesgue measure of ``[0, x)``, i.e. the product of the coordinates."""
    if len(x) == 0:
        raise ValueError("dimension-zero input")
    return prod(x)


def weight(b: TypedBracket) -> float:
    return anchored_volume(b.beta) - anchored_volume(b.alpha)


def cell_volume(b: TypedBracket) -> float:
    """Lebesgue measure of the cell ``[alpha, beta)`` itself (not its weight)."""
    return prod(hi - lo for lo, hi in zip(b.alpha, b.beta))


def _check_dims(b: TypedBracket, x: Sequence[float]) -> None:
    if len(x) != len(b.beta):
        raise ValueError(f"point has dimension {len(x)}, bracket has {len(b.beta)}")


def contains_corner(b: TypedBracket, x: Sequence[float]) -> bool:
    """True iff the corner ``[0, x)`` lies in the bracket, i.e. alpha <= x <= beta."""
    _check_dims(b, x)
    return all(lo <= c <= hi for lo, c, hi in zip(b.alpha, x, b.beta))


def cell_contains(b: TypedBracket, x: Sequence[float]) -> bool:
    """Half-open membership ``alpha <= x < beta`` used for partition checks."""
    _check_dims(b, x)
    return all(lo <= c < hi for lo, c, hi in zip(b.alpha, x, b.beta))
