"""Independent brute-force enumeration of all valid realizations.

This module certifies the search: it enumerates unknown placements over a
finite box by plain domain filtering (vectorized with numpy), with no circle
pivoting and no realization ordering, and re-checks every surviving tuple
with its own constraint loop. It shares only the geometry primitives with
the solver.
"""

from __future__ import annotations

from math import isqrt
from typing import NamedTuple

import numpy as np

from .geometry import Point, collinear, dist2, lattice_circle
from .model import Instance, Problem, strip_instance
from .solver import RuleSet


class CapExceededError(Exception):
    """The requested enumeration exceeds the configured work limit."""


class FixtureNotFoundError(Exception):
    """No flip-ambiguous fixture exists within the requested grid range."""


class SearchBox(NamedTuple):
    """Inclusive rectangle of lattice points."""

    xmin: int
    ymin: int
    xmax: int
    ymax: int

    @property
    def n_points(self) -> int:
        return max(0, self.xmax - self.xmin + 1) * max(0, self.ymax - self.ymin + 1)

    def contains(self, p: Point) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax


def _ceil_sqrt(s: int) -> int:
    r = isqrt(s)
    return r if r * r == s else r + 1


def _hop_counts(problem: Problem) -> dict[int, int]:
    """Minimum edge count from each unknown to the anchor set (multi-source BFS)."""
    adj = problem.adjacency
    hops = {i: 0 for i in problem.anchors}
    frontier = list(problem.anchors)
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in hops:
                    hops[v] = hops[u] + 1
                    nxt.append(v)
        frontier = nxt
    unreachable = [i for i in range(problem.n_nodes) if i not in hops]
    if unreachable:
        raise ValueError(f"nodes {unreachable} have no edge path to the anchors")
    return hops


def reach_box(problem: Problem, unknown: int, hops: dict[int, int] | None = None) -> SearchBox:
    """Box certain to contain the unknown in any valid realization.

    Along a shortest edge path of h hops from an anchor, every hop spans at
    most the radius, so the node lies within h * ceil(sqrt(radius_sq)) of the
    anchor bounding box. This holds under both rule sets.
    """
    if hops is None:
        hops = _hop_counts(problem)
    pad = hops[unknown] * _ceil_sqrt(problem.radius_sq)
    xs = [p.x for p in problem.anchors.values()]
    ys = [p.y for p in problem.anchors.values()]
    return SearchBox(min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def _satisfies(problem: Problem, assignment: dict[int, Point], rules: RuleSet) -> bool:
    """Full constraint check over all node pairs, written independently of solver.verify."""
    n = problem.n_nodes
    r2 = problem.radius_sq
    edge_d2 = {(e.i, e.j): e.d2 for e in problem.edges}
    ud = rules is RuleSet.UNIT_DISK
    for i in range(n):
        xi = assignment[i]
        for j in range(i + 1, n):
            xj = assignment[j]
            dx = xi[0] - xj[0]
            dy = xi[1] - xj[1]
            s = dx * dx + dy * dy
            d2 = edge_d2.get((i, j))
            if d2 is not None:
                if s != d2:
                    return False
            elif s == 0 or (ud and s <= r2):
                return False
    return True


def satisfies(problem: Problem, assignment: dict[int, Point], rules: RuleSet) -> bool:
    """Public alias of the oracle's own constraint loop (cross-checks solver.verify)."""
    return _satisfies(problem, assignment, rules)


def brute_force_solutions(
    problem: Problem,
    rules: RuleSet,
    search_box: SearchBox | None = None,
    max_unknowns: int = 4,
    work_limit: int = 10**9,
) -> list[dict[int, Point]]:
    """Every complete valid assignment, by exhaustive placement over a box.

    With no explicit search_box, each unknown gets its hop-bounded reach box,
    which provably contains it in any valid realization; an explicit box is
    applied to every unknown as-is. Candidate domains are pre-filtered by the
    anchor constraints, the remaining product is enumerated with incremental
    pairwise filtering, and each complete tuple is confirmed by the
    independent full-pair check. Results are in canonical order (sorted by
    the unknown coordinates in id order).

    Raises CapExceededError when the product of raw domain sizes exceeds
    work_limit, and ValueError beyond max_unknowns unknowns.
    """
    unknowns = [i for i in range(problem.n_nodes) if i not in problem.anchors]
    if len(unknowns) > max_unknowns:
        raise ValueError(f"{len(unknowns)} unknowns exceed the cap of {max_unknowns}")

    base = dict(problem.anchors)
    if not unknowns:
        return [base] if _satisfies(problem, base, rules) else []

    if search_box is None:
        hops = _hop_counts(problem)
        boxes = {u: reach_box(problem, u, hops) for u in unknowns}
    else:
        boxes = {u: search_box for u in unknowns}
    total = 1
    for u in unknowns:
        if boxes[u].n_points == 0:
            return []
        if boxes[u].n_points > 50_000_000:
            raise CapExceededError(f"search box for node {u} spans {boxes[u].n_points} points")
        total *= boxes[u].n_points
    if total > work_limit:
        raise CapExceededError(f"{total} placement tuples exceed the work limit of {work_limit}")

    adj = problem.adjacency
    r2 = problem.radius_sq
    ud = rules is RuleSet.UNIT_DISK

    # Per-unknown domains filtered by every anchor constraint.
    domains: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for u in unknowns:
        box = boxes[u]
        gx, gy = np.meshgrid(
            np.arange(box.xmin, box.xmax + 1, dtype=np.int64),
            np.arange(box.ymin, box.ymax + 1, dtype=np.int64),
            indexing="ij",
        )
        px = gx.ravel()
        py = gy.ravel()
        mask = np.ones(px.shape, dtype=bool)
        for a, (ax, ay) in problem.anchors.items():
            s = (px - ax) ** 2 + (py - ay) ** 2
            e = adj[u].get(a)
            if e is not None:
                mask &= s == e
            else:
                mask &= s != 0
                if ud:
                    mask &= s > r2
        domains[u] = (px[mask], py[mask])

    order = sorted(unknowns, key=lambda u: (len(domains[u][0]), u))
    found: list[dict[int, Point]] = []
    chosen: dict[int, Point] = {}

    def extend(idx: int) -> None:
        u = order[idx]
        dx, dy = domains[u]
        mask = np.ones(dx.shape, dtype=bool)
        for v, (vx, vy) in chosen.items():
            s = (dx - vx) ** 2 + (dy - vy) ** 2
            e = adj[u].get(v)
            if e is not None:
                mask &= s == e
            else:
                mask &= s != 0
                if ud:
                    mask &= s > r2
        last = idx + 1 == len(order)
        for x, y in zip(dx[mask].tolist(), dy[mask].tolist()):
            chosen[u] = Point(x, y)
            if last:
                assignment = dict(base)
                assignment.update(chosen)
                if _satisfies(problem, assignment, rules):
                    found.append(assignment)
            else:
                extend(idx + 1)
        chosen.pop(u, None)

    extend(0)
    found.sort(key=lambda a: tuple(a[u] for u in unknowns))
    return found


# ---------------------------------------------------------------------------
# Flip-ambiguity fixture search
# ---------------------------------------------------------------------------


def find_fixture_f1(max_grid: int) -> Instance:
    """Smallest instance whose unknown is flip-ambiguous on edges alone.

    Searches 3-anchor, 1-unknown instances where the unknown sees exactly two
    anchors, its two-circle intersection has a second (mirror) placement, and
    the third anchor sits within range of the mirror but out of range of the
    truth. The candidate is certified by the brute-force oracle: exactly 2
    solutions under CONVENTIONAL rules and exactly 1 (the ground truth) under
    UNIT_DISK rules. Deterministic, so repeated runs return the same fixture.
    """
    for g in range(3, max_grid + 1):
        cells = [Point(x, y) for x in range(g) for y in range(g)]
        for r2 in range(1, 2 * (g - 1) ** 2 + 1):
            for a1 in cells:
                for a2 in cells:
                    if a2 <= a1:
                        continue
                    for u in cells:
                        if u == a1 or u == a2:
                            continue
                        d1 = dist2(u, a1)
                        d2 = dist2(u, a2)
                        if d1 > r2 or d2 > r2:
                            continue
                        twins = [p for p in lattice_circle(a1, d1) if dist2(p, a2) == d2]
                        if len(twins) != 2:
                            continue
                        mirror = twins[0] if twins[1] == u else twins[1]
                        inst = _place_third_anchor(g, r2, a1, a2, u, mirror)
                        if inst is not None:
                            return inst
    raise FixtureNotFoundError(f"no flip-ambiguous fixture on grids up to {max_grid}x{max_grid}")


def _place_third_anchor(
    g: int, r2: int, a1: Point, a2: Point, u: Point, mirror: Point
) -> Instance | None:
    """Try every third anchor that invalidates the mirror; certify via the oracle."""
    for a3 in (Point(x, y) for x in range(g) for y in range(g)):
        if a3 in (a1, a2, u, mirror):
            continue
        if collinear([a1, a2, a3]):
            continue
        if dist2(a3, u) <= r2:  # would give the unknown a third anchor edge
            continue
        if dist2(a3, mirror) > r2:  # mirror must land inside the third anchor's range
            continue
        if dist2(a3, a1) > r2 and dist2(a3, a2) > r2:  # keep the graph connected
            continue
        inst = Instance(
            grid_side=g,
            radius_sq=r2,
            positions=(a1, a2, a3, u),
            anchor_flags=(True, True, True, False),
        )
        problem = strip_instance(inst)
        conventional = brute_force_solutions(problem, RuleSet.CONVENTIONAL)
        if len(conventional) != 2:
            continue
        unit_disk = brute_force_solutions(problem, RuleSet.UNIT_DISK)
        if len(unit_disk) != 1 or unit_disk[0] != inst.assignment():
            continue
        return inst
    return None
