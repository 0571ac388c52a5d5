"""Depth-first localization search over integer lattice placements.

The search realizes one unknown node per tree level, enumerating the lattice
circle around a realized neighbour and pruning candidates against the active
rule set. CONVENTIONAL prunes with edge-length equalities and distinctness
only; UNIT_DISK additionally requires every non-adjacent realized pair to be
strictly farther apart than the radius, which is what collapses the tree.

A single solve call is sequential; Problem and SolverConfig are immutable, so
independent solve calls may run in parallel threads.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from .geometry import Point, circle_offsets, circle_size, dist2
from .model import Problem


class RuleSet(Enum):
    """Constraint families: edge equalities only, or edge plus no-edge pruning."""

    CONVENTIONAL = "conventional"
    UNIT_DISK = "unit-disk"


class Ordering(Enum):
    """How the next unknown to realize is picked when building the static order."""

    RANDOM = "random"
    MOST_CONNECTED = "most-connected"


class NoEligibleNodeError(Exception):
    """Some unknown can never become adjacent to the realized set (disconnected problem)."""


class MissingNodeError(Exception):
    """An assignment handed to verify() does not cover every node."""


class AnchorMismatchError(Exception):
    """An assignment handed to verify() moves an anchor."""


class Violation(NamedTuple):
    """First violated constraint: kind is 'edge', 'no_edge' or 'distinct'."""

    kind: str
    i: int
    j: int


@dataclass(frozen=True)
class SolverConfig:
    rules: RuleSet = RuleSet.UNIT_DISK
    ordering: Ordering = Ordering.MOST_CONNECTED
    seed: int = 0
    find_all: bool = True
    budget: int = 10**8
    enforce_bounds: bool = False

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")


@dataclass
class SearchStats:
    """Traversal counters; instances_visited is the tree-node count, root excluded."""

    instances_visited: int = 0
    candidates_checked: int = 0
    max_depth_reached: int = 0
    solutions_found: int = 0
    budget_exhausted: bool = False


@dataclass
class PartialRealization:
    """Mutable search state: anchors plus the non-anchors realized so far.

    One shared value is mutated along the active depth-first path, so memory
    stays O(N) regardless of tree size.
    """

    assigned: dict[int, Point]
    n_anchors: int
    position_set: set[Point] = field(init=False)

    def __post_init__(self):
        self.position_set = set(self.assigned.values())

    @classmethod
    def from_problem(cls, problem: Problem) -> "PartialRealization":
        return cls(assigned=dict(problem.anchors), n_anchors=len(problem.anchors))

    @property
    def depth(self) -> int:
        return len(self.assigned) - self.n_anchors

    def place(self, node: int, point: Point) -> None:
        self.assigned[node] = point
        self.position_set.add(point)

    def remove(self, node: int) -> None:
        point = self.assigned.pop(node)
        self.position_set.discard(point)


@dataclass
class SolutionSet:
    """Complete assignments found by one solve call, with its traversal stats."""

    solutions: list[dict[int, Point]]
    stats: SearchStats


# ---------------------------------------------------------------------------
# Node ordering
# ---------------------------------------------------------------------------


def realization_order(problem: Problem, ordering: Ordering, seed: int = 0) -> list[int]:
    """Static order in which unknowns are realized, shared by every branch.

    Each node in the order has at least one edge into the anchors plus the
    nodes before it. MOST_CONNECTED greedily maximizes that edge count
    (lowest id on ties); RANDOM picks uniformly among currently eligible
    nodes with the given seed.
    """
    adj = problem.adjacency
    realized = set(problem.anchors)
    pending = {i for i in range(problem.n_nodes) if i not in realized}
    counts = {u: sum(1 for v in adj[u] if v in realized) for u in pending}
    rng = random.Random(seed)
    order: list[int] = []
    while pending:
        eligible = [u for u in sorted(pending) if counts[u] > 0]
        if not eligible:
            raise NoEligibleNodeError(
                f"nodes {sorted(pending)} have no path of edges to the anchors"
            )
        if ordering is Ordering.MOST_CONNECTED:
            pick = max(eligible, key=counts.__getitem__)
        else:
            pick = eligible[rng.randrange(len(eligible))]
        order.append(pick)
        pending.remove(pick)
        for v in adj[pick]:
            if v in pending:
                counts[v] += 1
    return order


# ---------------------------------------------------------------------------
# Candidate enumeration
# ---------------------------------------------------------------------------


def sub_locations(
    n: int,
    partial: PartialRealization,
    problem: Problem,
    config: SolverConfig,
    stats: SearchStats,
) -> list[Point]:
    """All placements of node n consistent with the realized set, in (x, y) order.

    The pivot is the realized neighbour whose edge spans the fewest lattice
    circle points (lowest id on ties); every enumerated circle point counts
    toward stats.candidates_checked whether or not it survives validation.
    """
    assigned = partial.assigned
    if n in assigned:
        raise ValueError(f"node {n} is already realized")
    if config.enforce_bounds and problem.grid_side is None:
        raise ValueError("enforce_bounds requires a problem that kept its grid bounds")
    adj_n = problem.adjacency[n]
    pivot = -1
    pivot_d2 = 0
    pivot_size = -1
    for m, d2 in adj_n.items():  # keys ascending, so strict < keeps the lowest id
        if m in assigned:
            size = circle_size(d2)
            if pivot < 0 or size < pivot_size:
                pivot, pivot_d2, pivot_size = m, d2, size
    if pivot < 0:
        raise ValueError(f"node {n} has no realized neighbour")

    cx, cy = assigned[pivot]
    offsets = circle_offsets(pivot_d2)
    stats.candidates_checked += len(offsets)
    r2 = problem.radius_sq
    bound = problem.grid_side if config.enforce_bounds else None
    out: list[Point] = []

    if config.rules is RuleSet.UNIT_DISK:
        # Every realized node constrains the candidate: exact length on edges,
        # strictly out of range otherwise (distinctness is implied by both).
        items = assigned.items()
        get_edge = adj_n.get
        for dx, dy in offsets:
            x = cx + dx
            y = cy + dy
            if bound is not None and not (0 <= x < bound and 0 <= y < bound):
                continue
            ok = True
            for p, pos in items:
                ddx = x - pos[0]
                ddy = y - pos[1]
                s = ddx * ddx + ddy * ddy
                e = get_edge(p)
                if e is not None:
                    if s != e:
                        ok = False
                        break
                elif s <= r2:
                    ok = False
                    break
            if ok:
                out.append(Point(x, y))
    else:
        # Only realized neighbours constrain the candidate, plus distinctness
        # against every realized position.
        taken = partial.position_set
        realized_nbrs = [(assigned[p], e) for p, e in adj_n.items() if p in assigned]
        for dx, dy in offsets:
            x = cx + dx
            y = cy + dy
            if bound is not None and not (0 <= x < bound and 0 <= y < bound):
                continue
            if (x, y) in taken:
                continue
            ok = True
            for pos, e in realized_nbrs:
                ddx = x - pos[0]
                ddy = y - pos[1]
                if ddx * ddx + ddy * ddy != e:
                    ok = False
                    break
            if ok:
                out.append(Point(x, y))
    return out


# ---------------------------------------------------------------------------
# Search driver
# ---------------------------------------------------------------------------


def _anchors_consistent(problem: Problem) -> bool:
    """Unit-disk sanity of the anchor set itself: non-adjacent pairs must be out of range."""
    ids = list(problem.anchors)
    adj = problem.adjacency
    r2 = problem.radius_sq
    for a in range(len(ids)):
        i = ids[a]
        for b in range(a + 1, len(ids)):
            j = ids[b]
            if j not in adj[i] and dist2(problem.anchors[i], problem.anchors[j]) <= r2:
                return False
    return True


def solve(problem: Problem, config: SolverConfig) -> SolutionSet:
    """Depth-first search for all (or the first) complete realizations.

    Level l of the tree places the l-th node of the static realization order;
    a leaf at depth N - M is a solution. The search stops early when find_all
    is false and a solution was recorded, or when instances_visited hits the
    budget, in which case budget_exhausted is flagged and the partial result
    returned.
    """
    if config.enforce_bounds and problem.grid_side is None:
        raise ValueError("enforce_bounds requires a problem that kept its grid bounds")
    stats = SearchStats()
    if config.rules is RuleSet.UNIT_DISK and not _anchors_consistent(problem):
        return SolutionSet([], stats)
    order = realization_order(problem, config.ordering, config.seed)
    if not order:
        stats.solutions_found = 1
        return SolutionSet([dict(problem.anchors)], stats)

    n_levels = len(order)
    partial = PartialRealization.from_problem(problem)
    solutions: list[dict[int, Point]] = []
    budget = config.budget
    find_all = config.find_all
    if n_levels + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(n_levels + 200)

    def expand(level: int) -> bool:
        """Expand one tree node; returns True to unwind the whole search."""
        node = order[level]
        next_level = level + 1
        for point in sub_locations(node, partial, problem, config, stats):
            if stats.instances_visited >= budget:
                stats.budget_exhausted = True
                return True
            stats.instances_visited += 1
            partial.place(node, point)
            if next_level > stats.max_depth_reached:
                stats.max_depth_reached = next_level
            if next_level == n_levels:
                solutions.append(dict(partial.assigned))
                stats.solutions_found += 1
                partial.remove(node)
                if not find_all:
                    return True
            else:
                stop = expand(next_level)
                partial.remove(node)
                if stop:
                    return True
        return False

    expand(0)
    return SolutionSet(solutions, stats)


# ---------------------------------------------------------------------------
# Assignment verification
# ---------------------------------------------------------------------------


def verify(problem: Problem, assignment: dict[int, Point], rules: RuleSet) -> Violation | None:
    """Check a complete assignment against the rule set; None means valid.

    Pairs are scanned in ascending (i, j) order and the first violated
    constraint is reported. Raises MissingNodeError / AnchorMismatchError when
    the assignment does not cover all nodes or moves an anchor.
    """
    n = problem.n_nodes
    missing = [i for i in range(n) if i not in assignment]
    if missing:
        raise MissingNodeError(f"assignment missing node(s) {missing}")
    bogus = [k for k in assignment if not 0 <= k < n]
    if bogus:
        raise ValueError(f"assignment contains unknown node id(s) {sorted(bogus)}")
    for a, p in problem.anchors.items():
        q = assignment[a]
        if q[0] != p.x or q[1] != p.y:
            raise AnchorMismatchError(f"anchor {a} moved from {tuple(p)} to {(q[0], q[1])}")

    adj = problem.adjacency
    r2 = problem.radius_sq
    ud = rules is RuleSet.UNIT_DISK
    for i in range(n):
        xi = assignment[i]
        adj_i = adj[i]
        for j in range(i + 1, n):
            xj = assignment[j]
            dx = xi[0] - xj[0]
            dy = xi[1] - xj[1]
            s = dx * dx + dy * dy
            e = adj_i.get(j)
            if e is not None:
                if s != e:
                    return Violation("edge", i, j)
            elif s == 0:
                return Violation("distinct", i, j)
            elif ud and s <= r2:
                return Violation("no_edge", i, j)
    return None


# ---------------------------------------------------------------------------
# Solution text format
# ---------------------------------------------------------------------------
#
#   solutions <k>
#   sol <index>
#   node <id> <x> <y>     (N lines per solution)
#   ...
#   stat instances_visited <v>
#   stat candidates_checked <v>
#   stat max_depth <v>
#   stat budget_exhausted <0|1>


def format_solution_set(result: SolutionSet, n_nodes: int) -> bytes:
    """Serialize a SolutionSet to canonical text (UTF-8, LF, byte-deterministic)."""
    lines = [f"solutions {len(result.solutions)}"]
    for k, sol in enumerate(result.solutions):
        lines.append(f"sol {k}")
        for i in range(n_nodes):
            x, y = sol[i]
            lines.append(f"node {i} {x} {y}")
    s = result.stats
    lines.append(f"stat instances_visited {s.instances_visited}")
    lines.append(f"stat candidates_checked {s.candidates_checked}")
    lines.append(f"stat max_depth {s.max_depth_reached}")
    lines.append(f"stat budget_exhausted {1 if s.budget_exhausted else 0}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_solutions(data: bytes | str) -> list[dict[int, Point]]:
    """Parse the solution text format back into assignments (stat lines are checked, not returned)."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows or rows[0][0] != "solutions" or len(rows[0]) != 2:
        raise ValueError("solution file must start with a 'solutions <k>' line")
    count = int(rows[0][1])
    out: list[dict[int, Point]] = []
    current: dict[int, Point] | None = None
    for toks in rows[1:]:
        if toks[0] == "sol":
            if len(toks) != 2 or int(toks[1]) != len(out):
                raise ValueError(f"unexpected solution index in {' '.join(toks)!r}")
            current = {}
            out.append(current)
        elif toks[0] == "node":
            if current is None or len(toks) != 4:
                raise ValueError(f"malformed node line {' '.join(toks)!r}")
            node_id = int(toks[1])
            if node_id in current:
                raise ValueError(f"duplicate node {node_id} in solution {len(out) - 1}")
            current[node_id] = Point(int(toks[2]), int(toks[3]))
        elif toks[0] == "stat":
            if len(toks) != 3:
                raise ValueError(f"malformed stat line {' '.join(toks)!r}")
        else:
            raise ValueError(f"unexpected line {' '.join(toks)!r}")
    if len(out) != count:
        raise ValueError(f"file declares {count} solutions but contains {len(out)}")
    return out
