"""Seeded random instance generators.

Callers pass their own ``random.Random`` so runs are reproducible; the
generators never touch global RNG state.
"""

from __future__ import annotations

from random import Random
from typing import Optional

from .core import BipartiteInstance

__all__ = ["gen_random", "gen_random_graph"]


def gen_random(
    rng: Random,
    num_jobs: int,
    num_machines: int,
    *,
    edge_prob: Optional[float] = None,
    num_edges: Optional[int] = None,
    min_weight: int = 1,
    max_weight: int = 1,
) -> BipartiteInstance:
    """Random bipartite instance with no isolated jobs.

    Edges are drawn either pairwise with probability ``edge_prob`` or as
    a uniform sample of ``num_edges`` distinct pairs (pick exactly one).
    Any job left without an edge gets one to a uniformly random machine,
    so the result is always feasible.  Weights are uniform in
    ``[min_weight, max_weight]``; the defaults give a unit instance.
    """
    if num_jobs < 0 or num_machines <= 0:
        raise ValueError("need at least one machine and a non-negative job count")
    if (edge_prob is None) == (num_edges is None):
        raise ValueError("pass exactly one of edge_prob / num_edges")

    pairs: set[tuple[int, int]] = set()
    if edge_prob is not None:
        if not 0.0 <= edge_prob <= 1.0:
            raise ValueError(f"edge_prob {edge_prob} outside [0, 1]")
        for u in range(num_jobs):
            for v in range(num_machines):
                if rng.random() < edge_prob:
                    pairs.add((u, v))
    else:
        total = num_jobs * num_machines
        k = min(num_edges, total)
        for idx in rng.sample(range(total), k):
            pairs.add(divmod(idx, num_machines))
    jobs_hit = {u for u, _ in pairs}
    for u in range(num_jobs):
        if u not in jobs_hit:
            pairs.add((u, rng.randrange(num_machines)))

    def weight() -> int:
        if min_weight == max_weight:
            return min_weight
        return rng.randint(min_weight, max_weight)

    edges = [(u, v, weight()) for u, v in sorted(pairs)]
    return BipartiteInstance(num_jobs, num_machines, edges)


def gen_random_graph(
    rng: Random, num_vertices: int, edge_prob: float
) -> tuple[int, list[tuple[int, int]]]:
    """Random simple graph with no isolated vertices.

    Each of the C(n,2) pairs appears with probability ``edge_prob``;
    isolated vertices are then attached to a random other vertex, so an
    edge cover always exists.  Needs at least two vertices.
    """
    if num_vertices < 2:
        raise ValueError("need at least two vertices to cover them all")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob {edge_prob} outside [0, 1]")
    pairs: set[tuple[int, int]] = set()
    for a in range(num_vertices):
        for b in range(a + 1, num_vertices):
            if rng.random() < edge_prob:
                pairs.add((a, b))
    deg = [0] * num_vertices
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    for x in range(num_vertices):
        if deg[x] == 0:
            y = rng.choice([z for z in range(num_vertices) if z != x])
            pairs.add((min(x, y), max(x, y)))
            deg[x] += 1
            deg[y] += 1
    return num_vertices, sorted(pairs)
