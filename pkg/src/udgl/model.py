"""Network instances and solver-facing problems: generation, validation, text format.

An Instance is the ground truth (all node positions known); a Problem is what
the solver receives (non-anchor positions withheld). Both serialize to the
same line-based ``udgl 1`` text format. Values are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .geometry import Point, check_point, collinear, dist2


class Edge(NamedTuple):
    """Undirected edge with exact squared length; canonical orientation i < j."""

    i: int
    j: int
    d2: int


class GenerationError(Exception):
    """No valid instance was found within the resampling attempt budget."""


class ParseError(Exception):
    """A udgl file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# ---------------------------------------------------------------------------
# Core types
# ---------------------------------------------------------------------------


def _derive_edges(positions: tuple[Point, ...], radius_sq: int) -> tuple[Edge, ...]:
    """Every pair within the radius, ascending lexicographic (i, j)."""
    edges = []
    n = len(positions)
    for i in range(n):
        xi = positions[i]
        for j in range(i + 1, n):
            s = dist2(xi, positions[j])
            if s <= radius_sq:
                edges.append(Edge(i, j, s))
    return tuple(edges)


def _is_connected(n: int, edges: Iterable[Edge]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        adj[e.i].append(e.j)
        adj[e.j].append(e.i)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 0
    while stack:
        u = stack.pop()
        count += 1
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return count == n


@dataclass(frozen=True)
class Instance:
    """Ground-truth network on a square grid; the edge set is always derived.

    Invariants enforced at construction: positions distinct and inside the
    grid, 3 <= anchors < nodes, anchors not collinear, derived edge graph
    connected.
    """

    grid_side: int
    radius_sq: int
    positions: tuple[Point, ...]
    anchor_flags: tuple[bool, ...]
    edges: tuple[Edge, ...] = field(init=False)

    def __post_init__(self):
        if self.grid_side < 1:
            raise ValueError(f"grid_side must be positive, got {self.grid_side}")
        if self.radius_sq < 1:
            raise ValueError(f"radius_sq must be positive, got {self.radius_sq}")
        positions = tuple(check_point(p) for p in self.positions)
        flags = tuple(bool(f) for f in self.anchor_flags)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "anchor_flags", flags)
        n = len(positions)
        if len(flags) != n:
            raise ValueError("anchor_flags length does not match positions")
        for p in positions:
            if not (0 <= p.x < self.grid_side and 0 <= p.y < self.grid_side):
                raise ValueError(f"position {tuple(p)} outside [0, {self.grid_side})^2")
        if len(set(positions)) != n:
            raise ValueError("node positions must be pairwise distinct")
        object.__setattr__(self, "edges", _derive_edges(positions, self.radius_sq))
        m = sum(flags)
        if not 3 <= m < n:
            raise ValueError(f"anchor count must satisfy 3 <= M < N, got M={m}, N={n}")
        if collinear([positions[i] for i in range(n) if flags[i]]):
            raise ValueError("anchor positions must not be collinear")
        if not _is_connected(n, self.edges):
            raise ValueError("derived edge graph is not connected")

    @property
    def n_nodes(self) -> int:
        return len(self.positions)

    @property
    def n_anchors(self) -> int:
        return sum(self.anchor_flags)

    @property
    def anchor_ids(self) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.anchor_flags) if f)

    def assignment(self) -> dict[int, Point]:
        """Ground-truth assignment of every node id to its position."""
        return dict(enumerate(self.positions))


@dataclass(frozen=True)
class Problem:
    """Solver input: anchor positions, the edge list, and the node count.

    grid_side is present only when bounds were kept at strip time. Anchor
    count may equal n_nodes (degenerate zero-unknown problems are legal
    solver inputs even though the generator never produces them).
    """

    n_nodes: int
    radius_sq: int
    anchors: dict[int, Point]
    edges: tuple[Edge, ...]
    grid_side: int | None = None

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be positive")
        if self.radius_sq < 1:
            raise ValueError(f"radius_sq must be positive, got {self.radius_sq}")
        if self.grid_side is not None and self.grid_side < 1:
            raise ValueError("grid_side must be positive when present")
        anchors = {i: check_point(p) for i, p in sorted(self.anchors.items())}
        object.__setattr__(self, "anchors", anchors)
        if not 3 <= len(anchors) <= self.n_nodes:
            raise ValueError(f"anchor count must satisfy 3 <= M <= N, got M={len(anchors)}, N={self.n_nodes}")
        for i, p in anchors.items():
            if not 0 <= i < self.n_nodes:
                raise ValueError(f"anchor id {i} out of range [0, {self.n_nodes})")
            if self.grid_side is not None and not (0 <= p.x < self.grid_side and 0 <= p.y < self.grid_side):
                raise ValueError(f"anchor {i} at {tuple(p)} outside [0, {self.grid_side})^2")
        if len(set(anchors.values())) != len(anchors):
            raise ValueError("anchor positions must be pairwise distinct")
        if collinear(list(anchors.values())):
            raise ValueError("anchor positions must not be collinear")
        edges = tuple(sorted(Edge(*e) for e in self.edges))
        object.__setattr__(self, "edges", edges)
        seen: set[tuple[int, int]] = set()
        for e in edges:
            if not (0 <= e.i < e.j < self.n_nodes):
                raise ValueError(f"edge ({e.i}, {e.j}) is not canonical (need 0 <= i < j < N)")
            if (e.i, e.j) in seen:
                raise ValueError(f"duplicate edge ({e.i}, {e.j})")
            seen.add((e.i, e.j))
            if not 1 <= e.d2 <= self.radius_sq:
                raise ValueError(f"edge ({e.i}, {e.j}) has d2={e.d2} outside [1, {self.radius_sq}]")
            if e.i in anchors and e.j in anchors and dist2(anchors[e.i], anchors[e.j]) != e.d2:
                raise ValueError(
                    f"edge ({e.i}, {e.j}) d2={e.d2} contradicts anchor positions "
                    f"(true d2={dist2(anchors[e.i], anchors[e.j])})"
                )

    @cached_property
    def adjacency(self) -> dict[int, dict[int, int]]:
        """node id -> {neighbour id -> squared edge length}, neighbour keys ascending."""
        adj: dict[int, dict[int, int]] = {i: {} for i in range(self.n_nodes)}
        for e in self.edges:
            adj[e.i][e.j] = e.d2
            adj[e.j][e.i] = e.d2
        return {i: dict(sorted(nbrs.items())) for i, nbrs in adj.items()}

    @property
    def unknown_ids(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_nodes) if i not in self.anchors)


# ---------------------------------------------------------------------------
# Random instance generation
# ---------------------------------------------------------------------------


def generate_instance(
    grid_side: int,
    radius_sq: int,
    n_nodes: int,
    n_anchors: int,
    seed: int,
    max_attempts: int = 1000,
) -> Instance:
    """Generate a connected random instance, deterministic for a fixed seed.

    Nodes are sampled uniformly without replacement over grid cells and the
    anchors uniformly among nodes; attempts failing connectivity or anchor
    non-collinearity are rejected and resampled. Raises GenerationError after
    max_attempts failures.
    """
    if n_nodes < 4:
        raise ValueError(f"n_nodes must be >= 4, got {n_nodes}")
    if not 3 <= n_anchors < n_nodes:
        raise ValueError(f"need 3 <= n_anchors < n_nodes, got {n_anchors} of {n_nodes}")
    if grid_side * grid_side < n_nodes:
        raise ValueError(f"grid {grid_side}x{grid_side} cannot hold {n_nodes} distinct nodes")
    if radius_sq < 1:
        raise ValueError(f"radius_sq must be positive, got {radius_sq}")

    rng = random.Random(seed)
    n_cells = grid_side * grid_side
    for _ in range(max_attempts):
        cells = rng.sample(range(n_cells), n_nodes)
        positions = tuple(Point(c % grid_side, c // grid_side) for c in cells)
        anchor_set = set(rng.sample(range(n_nodes), n_anchors))
        if collinear([positions[i] for i in sorted(anchor_set)]):
            continue
        if not _is_connected(n_nodes, _derive_edges(positions, radius_sq)):
            continue
        flags = tuple(i in anchor_set for i in range(n_nodes))
        return Instance(grid_side, radius_sq, positions, flags)
    raise GenerationError(
        f"no connected instance with non-collinear anchors in {max_attempts} attempts "
        f"(grid={grid_side}, radius_sq={radius_sq}, nodes={n_nodes}, anchors={n_anchors})"
    )


def strip_instance(inst: Instance, keep_bounds: bool = False) -> Problem:
    """Project an Instance to the Problem the solver sees (unknown positions withheld)."""
    anchors = {i: inst.positions[i] for i in inst.anchor_ids}
    return Problem(
        n_nodes=inst.n_nodes,
        radius_sq=inst.radius_sq,
        anchors=anchors,
        edges=inst.edges,
        grid_side=inst.grid_side if keep_bounds else None,
    )


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------
#
#   udgl 1
#   grid <C>               (omitted for a Problem saved without bounds)
#   radius_sq <r2>
#   nodes <N>
#   node <id> anchor <x> <y>
#   node <id> unknown <x> <y>      (ground-truth files)
#   node <id> unknown              (problem files)
#   edges <E>
#   edge <i> <j> <d2>              (i < j, ascending lexicographic)
#
# Comment lines starting with '#' are ignored on parse and never written.


def write_file(obj: Instance | Problem) -> bytes:
    """Serialize to canonical text: UTF-8, LF endings, byte-deterministic."""
    lines = ["udgl 1"]
    if isinstance(obj, Instance):
        lines.append(f"grid {obj.grid_side}")
        lines.append(f"radius_sq {obj.radius_sq}")
        lines.append(f"nodes {obj.n_nodes}")
        for i, p in enumerate(obj.positions):
            kind = "anchor" if obj.anchor_flags[i] else "unknown"
            lines.append(f"node {i} {kind} {p.x} {p.y}")
    else:
        if obj.grid_side is not None:
            lines.append(f"grid {obj.grid_side}")
        lines.append(f"radius_sq {obj.radius_sq}")
        lines.append(f"nodes {obj.n_nodes}")
        for i in range(obj.n_nodes):
            p = obj.anchors.get(i)
            if p is not None:
                lines.append(f"node {i} anchor {p.x} {p.y}")
            else:
                lines.append(f"node {i} unknown")
    lines.append(f"edges {len(obj.edges)}")
    for e in obj.edges:
        lines.append(f"edge {e.i} {e.j} {e.d2}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_file(data: bytes | str) -> Instance | Problem:
    """Parse the udgl text format; returns an Instance when all positions are present.

    Violations are rejected with the offending line number: malformed rows,
    duplicate positions, duplicate or non-canonical edges, d2 outside
    [1, radius_sq], and edge lengths inconsistent with two given positions.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    rows: list[tuple[int, list[str]]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append((no, stripped.split()))

    pos = 0

    def take(keyword: str, n_args: int | tuple[int, ...]) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(rows):
            raise ParseError(f"unexpected end of file, expected '{keyword}' line")
        no, toks = rows[pos]
        pos += 1
        if toks[0] != keyword:
            raise ParseError(f"expected '{keyword}', got '{toks[0]}'", no)
        allowed = (n_args,) if isinstance(n_args, int) else n_args
        if len(toks) - 1 not in allowed:
            raise ParseError(f"'{keyword}' line has {len(toks) - 1} fields, expected {allowed}", no)
        return no, toks

    def intval(tok: str, no: int, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"invalid {what}: {tok!r}", no) from None

    no, toks = take("udgl", 1)
    if toks[1] != "1":
        raise ParseError(f"unsupported format version {toks[1]!r}", no)

    grid: int | None = None
    if pos < len(rows) and rows[pos][1][0] == "grid":
        no, toks = take("grid", 1)
        grid = intval(toks[1], no, "grid side")
        if grid < 1:
            raise ParseError("grid side must be positive", no)

    no, toks = take("radius_sq", 1)
    radius_sq = intval(toks[1], no, "squared radius")
    if radius_sq < 1:
        raise ParseError("radius_sq must be positive", no)

    no, toks = take("nodes", 1)
    n = intval(toks[1], no, "node count")
    if n < 1:
        raise ParseError("node count must be positive", no)

    kinds: dict[int, str] = {}
    coords: dict[int, Point] = {}
    first_at: dict[Point, int] = {}
    for _ in range(n):
        no, toks = take("node", (2, 4))
        node_id = intval(toks[1], no, "node id")
        if not 0 <= node_id < n:
            raise ParseError(f"node id {node_id} out of range [0, {n})", no)
        if node_id in kinds:
            raise ParseError(f"duplicate node id {node_id}", no)
        kind = toks[2]
        if kind not in ("anchor", "unknown"):
            raise ParseError(f"node kind must be 'anchor' or 'unknown', got {kind!r}", no)
        kinds[node_id] = kind
        if len(toks) == 5:
            x = intval(toks[3], no, "x coordinate")
            y = intval(toks[4], no, "y coordinate")
            try:
                p = check_point((x, y))
            except ValueError as exc:
                raise ParseError(str(exc), no) from None
            if grid is not None and not (0 <= x < grid and 0 <= y < grid):
                raise ParseError(f"position ({x}, {y}) outside [0, {grid})^2", no)
            if p in first_at:
                raise ParseError(f"position ({x}, {y}) duplicates node {first_at[p]}", no)
            first_at[p] = node_id
            coords[node_id] = p
        elif kind == "anchor":
            raise ParseError("anchor line requires coordinates", no)

    anchors = {i for i, k in kinds.items() if k == "anchor"}
    located_unknowns = [i for i in kinds if kinds[i] == "unknown" and i in coords]
    bare_unknowns = [i for i in kinds if kinds[i] == "unknown" and i not in coords]
    if located_unknowns and bare_unknowns:
        raise ParseError(
            f"unknown nodes mix located ({located_unknowns[0]}) and unlocated ({bare_unknowns[0]}) forms"
        )

    no, toks = take("edges", 1)
    n_edges = intval(toks[1], no, "edge count")
    if n_edges < 0:
        raise ParseError("edge count must be non-negative", no)

    edges: list[Edge] = []
    seen_pairs: set[tuple[int, int]] = set()
    for _ in range(n_edges):
        no, toks = take("edge", 3)
        i = intval(toks[1], no, "edge endpoint")
        j = intval(toks[2], no, "edge endpoint")
        d2 = intval(toks[3], no, "squared edge length")
        if not (0 <= i < j < n):
            raise ParseError(f"edge ({i}, {j}) is not canonical (need 0 <= i < j < N)", no)
        if (i, j) in seen_pairs:
            raise ParseError(f"duplicate edge ({i}, {j})", no)
        seen_pairs.add((i, j))
        if d2 < 1:
            raise ParseError(f"edge ({i}, {j}) has non-positive d2={d2}", no)
        if d2 > radius_sq:
            raise ParseError(f"edge ({i}, {j}) has d2={d2} exceeding radius_sq={radius_sq}", no)
        if i in coords and j in coords and dist2(coords[i], coords[j]) != d2:
            raise ParseError(
                f"edge ({i}, {j}) d2={d2} inconsistent with positions (true d2={dist2(coords[i], coords[j])})", no
            )
        edges.append(Edge(i, j, d2))

    if pos < len(rows):
        raise ParseError(f"unexpected trailing line '{rows[pos][1][0]}'", rows[pos][0])

    if not bare_unknowns:
        # Every node carries coordinates: ground-truth instance.
        if grid is None:
            raise ParseError("ground-truth file requires a 'grid' line")
        positions = tuple(coords[i] for i in range(n))
        flags = tuple(i in anchors for i in range(n))
        try:
            inst = Instance(grid, radius_sq, positions, flags)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        declared = tuple(sorted(edges))
        if declared != inst.edges:
            missing = set(inst.edges) - set(declared)
            extra = set(declared) - set(inst.edges)
            detail = []
            if missing:
                detail.append(f"missing {sorted(missing)[0]}")
            if extra:
                detail.append(f"spurious {sorted(extra)[0]}")
            raise ParseError(f"edge list does not match node geometry: {', '.join(detail)}")
        return inst

    anchor_points = {i: coords[i] for i in sorted(anchors)}
    try:
        return Problem(n_nodes=n, radius_sq=radius_sq, anchors=anchor_points, edges=tuple(edges), grid_side=grid)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
