"""Exact bigraded index arithmetic: bigrades, the componentwise partial order, grids.

All coordinates are `fractions.Fraction`; nothing in the engine ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import InputError

Rat = Fraction


class Bigrade(NamedTuple):
    """A point of the two-parameter index poset."""

    x: Fraction
    y: Fraction

    def leq(self, other: "Bigrade") -> bool:
        """Componentwise partial order (not Python's tuple order)."""
        return self.x <= other.x and self.y <= other.y

    def dominates(self, other: "Bigrade") -> bool:
        return other.leq(self)

    @staticmethod
    def join(*points: "Bigrade") -> "Bigrade":
        """Least upper bound (componentwise maximum) of a nonempty set."""
        if not points:
            raise ValueError("lub of an empty set")
        return Bigrade(max(p.x for p in points), max(p.y for p in points))

    @staticmethod
    def meet(*points: "Bigrade") -> "Bigrade":
        if not points:
            raise ValueError("glb of an empty set")
        return Bigrade(min(p.x for p in points), min(p.y for p in points))


def bigrade(x, y) -> Bigrade:
    """Build a Bigrade from anything Fraction accepts (ints, strings, Fractions)."""
    return Bigrade(Fraction(x), Fraction(y))


def colex_key(g: Bigrade):
    """Colexicographic sort key: y first, then x; extends the partial order."""
    return (g.y, g.x)


def incomparable(a: Bigrade, b: Bigrade) -> bool:
    return not a.leq(b) and not b.leq(a)


def weakly_incomparable(a: Bigrade, b: Bigrade) -> bool:
    """Incomparable, or distinct while sharing an x or y coordinate."""
    if a == b:
        return False
    return incomparable(a, b) or a.x == b.x or a.y == b.y


@dataclass(frozen=True)
class Grid2:
    """A finite rectangular grid: strictly increasing rational axis values.

    Grid indices are 1-based, matching the index sets [n] used throughout.
    """

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        for axis in (self.xs, self.ys):
            if not axis:
                raise InputError("grid axes must be nonempty")
            if any(a >= b for a, b in zip(axis, axis[1:])):
                raise InputError("grid axis values must be strictly increasing")

    @property
    def nx(self) -> int:
        return len(self.xs)

    @property
    def ny(self) -> int:
        return len(self.ys)

    def value(self, i: int, j: int) -> Bigrade:
        """Rational bigrade at 1-based grid index (i, j)."""
        return Bigrade(self.xs[i - 1], self.ys[j - 1])

    def ceil_index(self, g: Bigrade) -> tuple[int, int]:
        """1-based index of the minimal grid point dominating g."""
        i = _ceil_pos(self.xs, g.x)
        j = _ceil_pos(self.ys, g.y)
        if i is None or j is None:
            raise InputError(f"grade {g} exceeds grid extent")
        return (i, j)

    def ceil(self, g: Bigrade) -> Bigrade:
        i, j = self.ceil_index(g)
        return self.value(i, j)

    def index_of(self, g: Bigrade) -> tuple[int, int]:
        """Exact 1-based index of a grade that lies on the grid."""
        i, j = self.ceil_index(g)
        if self.value(i, j) != g:
            raise InputError(f"grade {g} is not a grid point")
        return (i, j)


def _ceil_pos(axis: tuple[Fraction, ...], v: Fraction) -> int | None:
    """1-based position of the smallest axis value >= v, or None."""
    lo, hi = 0, len(axis)
    while lo < hi:
        mid = (lo + hi) // 2
        if axis[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo + 1 if lo < len(axis) else None


def unique_sorted(values: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sorted(set(values)))


def parse_rational(token: str) -> Fraction:
    """Exact rational from an integer, decimal, or p/q literal."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {token!r}") from exc


def rational_sqrt(q: Fraction, bits: int = 48) -> Fraction:
    """Non-negative square root of q, exact for perfect squares.

    Non-square inputs get a deterministic rational approximation with
    2**-bits relative precision; callers treat the result as the true
    value thereafter, so all downstream arithmetic stays exact.
    """
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return Fraction(0)
    import math

    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    scale = 1 << bits
    return Fraction(math.isqrt(num * den * scale * scale), den * scale)
