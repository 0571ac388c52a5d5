"""Exact integer-lattice geometry: squared distances, lattice circles, collinearity.

Every operation here is pure integer arithmetic. No floating point is used
anywhere, so distance equalities and strict inequalities are exact.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import Iterable, NamedTuple, Sequence

# Coordinates are capped so that any squared distance between two in-range
# points stays below 2**63: 2 * (2 * COORD_LIMIT)**2 < 2**63 - 1.
COORD_LIMIT = 10**9


class Point(NamedTuple):
    """A lattice point with exact integer coordinates."""

    x: int
    y: int


def check_point(p: Sequence[int]) -> Point:
    """Validate a coordinate pair (integer type, supported range) and return a Point."""
    x, y = p
    if isinstance(x, bool) or isinstance(y, bool) or not isinstance(x, int) or not isinstance(y, int):
        raise TypeError(f"lattice coordinates must be integers, got {tuple(p)!r}")
    if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
        raise ValueError(f"coordinate outside supported range |c| <= {COORD_LIMIT}: {tuple(p)!r}")
    return Point(x, y)


def dist2(a: Sequence[int], b: Sequence[int]) -> int:
    """Squared Euclidean distance between two lattice points, exactly."""
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


@lru_cache(maxsize=None)
def circle_offsets(s: int) -> tuple[Point, ...]:
    """All integer offsets (dx, dy) with dx^2 + dy^2 == s, sorted by (dx, dy).

    Scans dx over [-isqrt(s), isqrt(s)] and keeps dx where the remainder
    s - dx^2 is a perfect square (integer square root test).
    """
    if s < 0:
        raise ValueError(f"squared radius must be non-negative, got {s}")
    root = isqrt(s)
    offsets = []
    for dx in range(-root, root + 1):
        rem = s - dx * dx
        dy = isqrt(rem)
        if dy * dy == rem:
            offsets.append(Point(dx, dy))
            if dy:
                offsets.append(Point(dx, -dy))
    offsets.sort()
    return tuple(offsets)


def circle_size(s: int) -> int:
    """Number of lattice points on a circle of squared radius s.

    This is the branching bound of one search expansion over an edge of
    squared length s.
    """
    return len(circle_offsets(s))


def lattice_circle(center: Sequence[int], s: int) -> list[Point]:
    """All lattice points at squared distance s from center, sorted by (x, y).

    Translation by the center preserves the lexicographic order of the
    cached offsets, so the result is canonically ordered without re-sorting.
    """
    cx, cy = center
    return [Point(cx + dx, cy + dy) for dx, dy in circle_offsets(s)]


def collinear(points: Iterable[Sequence[int]]) -> bool:
    """True iff all points lie on one straight line (exact cross products).

    Any set of at most two distinct points is collinear.
    """
    pts = list(points)
    if not pts:
        raise ValueError("collinear requires at least one point")
    base = pts[0]
    ref = next((p for p in pts[1:] if (p[0], p[1]) != (base[0], base[1])), None)
    if ref is None:
        return True
    rx = ref[0] - base[0]
    ry = ref[1] - base[1]
    for p in pts[1:]:
        if rx * (p[1] - base[1]) != ry * (p[0] - base[0]):
            return False
    return True
