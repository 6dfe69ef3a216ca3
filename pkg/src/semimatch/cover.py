"""Balanced edge covers of general graphs, by reduction to semi-matching.

An edge cover must touch every vertex; a *balanced* one additionally
spreads degrees as evenly as the graph allows.  Any minimal edge cover is
a star forest, so the whole question is where to put the star centers.
The pipeline implemented here:

1. ``minimum_edge_cover``: a maximum matching (augmenting paths with
   blossom contraction) plus one edge per still-uncovered vertex.  The
   Gallai identity ``|F| = n - matching size`` holds by construction.
2. ``levelling``: a breadth-first labelling that starts from the cover's
   centers and alternates cover / non-cover edges, leaving some vertices
   unleveled.
3. ``find_center``: one unweighted semi-matching from the even-level
   vertices to the odd-level vertices, plus the cover's edges inside the
   unleveled region, is an optimal balanced edge cover.

Degrees are scored with the strictly convex ``k*(k+1)/2`` — the same
schedule cost the semi-matching solvers minimise per machine, which is
what makes the reduction exact and the oracle in ``oracle`` comparable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import BipartiteInstance, InfeasibleInstanceError
from .unweighted import solve_unweighted


class GeneralGraph:
    """A simple undirected graph with dense 0-based vertex ids.

    Edges may arrive in either orientation; they are stored
    canonically with the smaller endpoint first.  Self-loops and
    duplicates are rejected.
    """

    __slots__ = ("num_vertices", "edges", "adj")

    def __init__(self, num_vertices: int, edges: Iterable[Sequence[int]]) -> None:
        if num_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[tuple[int, int]] = set()
        norm: list[tuple[int, int]] = []
        for edge in edges:
            a, b = edge
            if not (0 <= a < num_vertices and 0 <= b < num_vertices):
                raise ValueError(f"edge ({a}, {b}) out of range [0, {num_vertices})")
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if a > b:
                a, b = b, a
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
            norm.append((a, b))
        adj: list[list[int]] = [[] for _ in range(num_vertices)]
        for a, b in norm:
            adj[a].append(b)
            adj[b].append(a)
        self.num_vertices = num_vertices
        self.edges = tuple(norm)
        self.adj = tuple(tuple(ns) for ns in adj)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"GeneralGraph({self.num_vertices} vertices, {self.num_edges} edges)"


class EdgeCover:
    """An edge subset touching every vertex, with its degree profile.

    Construction validates the covering property, so holding an
    ``EdgeCover`` is proof of ``deg >= 1`` everywhere.
    """

    __slots__ = ("num_vertices", "edges", "degrees")

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]]) -> None:
        canon = frozenset((a, b) if a < b else (b, a) for a, b in edges)
        deg = [0] * num_vertices
        for a, b in canon:
            if a == b or not (0 <= a < num_vertices and 0 <= b < num_vertices):
                raise ValueError(f"bad edge ({a}, {b})")
            deg[a] += 1
            deg[b] += 1
        for v, d in enumerate(deg):
            if d == 0:
                raise ValueError(f"vertex {v} is uncovered")
        self.num_vertices = num_vertices
        self.edges = canon
        self.degrees = tuple(deg)

    def __len__(self) -> int:
        return len(self.edges)

    def balanced_cost(self) -> int:
        """Sum of ``d*(d+1)/2`` over the per-vertex cover degrees."""
        return sum(d * (d + 1) // 2 for d in self.degrees)

    def centers(self) -> frozenset[int]:
        """Vertices of cover degree greater than one."""
        return frozenset(v for v, d in enumerate(self.degrees) if d > 1)

    def __repr__(self) -> str:
        return (
            f"EdgeCover({len(self.edges)} edges on {self.num_vertices} vertices, "
            f"cost {self.balanced_cost()})"
        )


@dataclass(frozen=True)
class Levelling:
    """Partial vertex labelling produced by :func:`levelling`.

    ``level`` maps a vertex to its level (1-based); vertices the process
    never reaches are collected in ``unleveled``.
    """

    level: dict[int, int]
    unleveled: frozenset[int]

    def on_even_levels(self) -> list[int]:
        return sorted(v for v, l in self.level.items() if l % 2 == 0)

    def on_odd_levels(self) -> list[int]:
        return sorted(v for v, l in self.level.items() if l % 2 == 1)


def _blossom_mate(graph: GeneralGraph) -> list[int]:
    """Maximum matching as a mate array (-1 for exposed vertices).

    Augmenting-path search with blossom contraction: the BFS tree keeps,
    for every even vertex, the edge it was discovered through; odd
    cycles collapse onto the base vertex found by walking both cycle
    ends to their lowest common tree ancestor.  No attempt at
    Micali-Vazirani sophistication — quadratic-ish and fine for the
    sizes covers are computed at.
    """
    n = graph.num_vertices
    adj = graph.adj
    mate = [-1] * n
    for u in range(n):  # cheap greedy seed saves most searches
        if mate[u] == -1:
            for v in adj[u]:
                if mate[v] == -1:
                    mate[u] = v
                    mate[v] = u
                    break

    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n

    def lowest_common_base(a: int, b: int) -> int:
        marked = [False] * n
        while True:
            a = base[a]
            marked[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if marked[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, stop: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != stop:
            in_blossom[base[v]] = True
            in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def augment_from(root: int) -> bool:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_tree[i] = False
        in_tree[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    # Even-even edge: contract the blossom onto the common base.
                    stop = lowest_common_base(v, to)
                    in_blossom = [False] * n
                    mark_path(v, stop, to, in_blossom)
                    mark_path(to, stop, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = stop
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        # Exposed vertex: flip the alternating path to the root.
                        while to != -1:
                            v = parent[to]
                            nxt = mate[v]
                            mate[v] = to
                            mate[to] = v
                            to = nxt
                        return True
                    in_tree[mate[to]] = True
                    queue.append(mate[to])
        return False

    for u in range(n):
        if mate[u] == -1:
            augment_from(u)
    return mate


def maximum_matching_general(graph: GeneralGraph) -> frozenset[tuple[int, int]]:
    """Maximum cardinality matching of a simple graph, as canonical edges."""
    mate = _blossom_mate(graph)
    return frozenset((u, v) for u, v in enumerate(mate) if v != -1 and u < v)


def minimum_edge_cover(graph: GeneralGraph) -> EdgeCover:
    """Minimum cardinality edge cover: a maximum matching, then one edge
    per vertex the matching left exposed.

    Raises :class:`InfeasibleInstanceError` when some vertex is isolated
    (no cover can exist).
    """
    for v in range(graph.num_vertices):
        if not graph.adj[v]:
            raise InfeasibleInstanceError(
                f"vertex {v} has no incident edges; no edge cover exists"
            )
    mate = _blossom_mate(graph)
    edges = {(u, v) for u, v in enumerate(mate) if v != -1 and u < v}
    for u, partner in enumerate(mate):
        if partner == -1:
            v = graph.adj[u][0]
            edges.add((u, v) if u < v else (v, u))
    return EdgeCover(graph.num_vertices, edges)


def levelling(graph: GeneralGraph, cover: EdgeCover) -> Levelling:
    """Alternating breadth-first levels of a (minimal) edge cover.

    Level 1 holds the cover's centers.  From an odd level the cover's
    own edges lead to the next (even) level; from an even level the
    non-cover edges lead to the next (odd) level, except that a vertex
    is held back while a cover-partner of it already sits on that odd
    level — it then joins one level later through the cover edge, which
    is exactly what keeps the two endpoints of a cover edge on levels of
    opposite parity.
    """
    cover_adj: list[list[int]] = [[] for _ in range(graph.num_vertices)]
    for a, b in cover.edges:
        cover_adj[a].append(b)
        cover_adj[b].append(a)

    level: dict[int, int] = {
        v: 1 for v, d in enumerate(cover.degrees) if d > 1
    }
    current = sorted(level)
    depth = 1
    while current:
        nxt: list[int] = []
        if depth % 2 == 1:
            for v in current:
                for u in cover_adj[v]:
                    if u not in level:
                        level[u] = depth + 1
                        nxt.append(u)
        else:
            for v in current:
                for u in graph.adj[v]:
                    e = (v, u) if v < u else (u, v)
                    if u in level or e in cover.edges:
                        continue
                    if any(level.get(x) == depth + 1 for x in cover_adj[u]):
                        continue  # its cover partner got there first
                    level[u] = depth + 1
                    nxt.append(u)
        current = nxt
        depth += 1
    unleveled = frozenset(v for v in range(graph.num_vertices) if v not in level)
    return Levelling(level=level, unleveled=unleveled)


def find_center(graph: GeneralGraph) -> EdgeCover:
    """Optimal balanced edge cover of a simple graph.

    Builds a minimum edge cover, levels it, and re-centers the leveled
    region with one unweighted semi-matching: even-level vertices each
    pick one odd-level neighbour (odd-level vertices take any number).
    Cover edges between unleveled vertices pass through untouched.  The
    result minimises ``sum d*(d+1)/2`` over all edge covers.
    """
    cover = minimum_edge_cover(graph)
    lv = levelling(graph, cover)
    evens = lv.on_even_levels()
    odds = lv.on_odd_levels()

    chosen: set[tuple[int, int]] = set()
    if evens:
        job_of = {v: i for i, v in enumerate(evens)}
        machine_of = {v: i for i, v in enumerate(odds)}
        cross: list[tuple[int, int]] = []
        for a, b in graph.edges:
            if a in job_of and b in machine_of:
                cross.append((job_of[a], machine_of[b]))
            elif b in job_of and a in machine_of:
                cross.append((job_of[b], machine_of[a]))
        instance = BipartiteInstance(len(evens), len(odds), cross)
        assignment = solve_unweighted(instance)
        for i, j in enumerate(assignment.machine_of):
            a, b = evens[i], odds[j]
            chosen.add((a, b) if a < b else (b, a))

    for a, b in cover.edges:
        if a in lv.unleveled and b in lv.unleveled:
            chosen.add((a, b))
    return EdgeCover(graph.num_vertices, chosen)
