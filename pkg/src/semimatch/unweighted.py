"""Optimal unweighted and convex-cost semi-matching.

The load-based problem is solved through a flow reduction.  Every job
contributes one unit of flow through its machine into a shared pool of
*cost centers*, one center per distinct marginal cost value, ordered by
value.  A machine carrying ``k`` jobs must route its ``k`` units through
its ``k`` cheapest marginals, so the cost of the flow (sum of center
values used) equals the cost of the assignment.

An assignment is optimal exactly when the residual graph contains no
*cost-reducing path*: a path that frees a unit from an expensive center
and re-routes it into a cheaper one.  ``cancel_all`` eliminates every
such path by divide and conquer on the ordered center list: cancel all
paths from the upper half of the centers into the lower half with a
multi-source/multi-sink Dinitz max-flow pass (``cancel``), then split
the graph along residual reachability from the upper half
(``reachable_partition``) and recurse independently on the two sides.
Edges crossing the split are frozen and never touched again.

The unit-weight objective is the convex objective with
``f(k) = k*(k+1)/2`` (marginals ``1, 2, 3, ...``), and both share all
machinery here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterable, Optional, Sequence

from .core import (
    BipartiteInstance,
    ConvexMachineCost,
    SemiMatching,
    validate_semi_matching,
)

__all__ = [
    "CancelCounters",
    "CostCenterNetwork",
    "build_cost_center_network",
    "seed_flow",
    "cancel",
    "reachable_partition",
    "cancel_all",
    "extract_semi_matching",
    "solve_unweighted",
    "solve_convex",
]


@dataclass
class CancelCounters:
    """Observability for one cancellation run.

    ``rounds_per_cancel[i]`` counts the blocking-flow rounds of the i-th
    ``cancel`` call, including the final round whose search finds no
    augmenting path.  ``distances_per_cancel[i]`` lists the layer-graph
    source-to-sink distances of the successful rounds, which must be
    strictly increasing.  ``units_cancelled`` is the total flow moved
    between centers.
    """

    rounds_per_cancel: list[int] = field(default_factory=list)
    distances_per_cancel: list[list[int]] = field(default_factory=list)
    max_depth: int = 0
    edges_scanned: int = 0
    units_cancelled: int = 0


class CostCenterNetwork:
    """Flow network for load-based semi-matching, with its current flow.

    Nodes are jobs, machines, and cost centers, packed into one id
    space: job ``u`` is node ``u``, machine ``v`` is node
    ``num_jobs + v``, and center ``k`` (0-based position in the sorted
    distinct-marginal list) is node ``num_jobs + num_machines + k``.
    The source and sink of the underlying max-flow formulation are
    implicit: job edges have a permanent supply of one unit each and
    centers drain freely, so neither endpoint ever appears in a residual
    search.

    Edges are stored as paired forward/reverse entries (``eid ^ 1`` is
    the reverse of ``eid``) with remaining-capacity bookkeeping, the
    usual residual-graph representation.  ``comp`` assigns every node to
    a subproblem during the divide-and-conquer; an edge is alive for a
    search only when both endpoints share the search's component.
    """

    def __init__(
        self,
        instance: BipartiteInstance,
        costs: Optional[ConvexMachineCost] = None,
    ) -> None:
        nU, nV = instance.num_jobs, instance.num_machines
        self.instance = instance
        self.costs = costs
        self.num_jobs = nU
        self.num_machines = nV

        # Effective marginal list per machine (unit case: 1, 2, ..., deg).
        marginals: list[Sequence[int]] = []
        for v in range(nV):
            deg = instance.machine_degree(v)
            if costs is None:
                marginals.append(range(1, deg + 1))
            else:
                seq = costs.marginals[v]
                if len(seq) < deg:
                    raise ValueError(
                        f"machine {v}: {len(seq)} marginals but degree {deg}"
                    )
                marginals.append(seq[:deg])
        self._marginals = marginals

        self.center_values: tuple[int, ...] = tuple(
            sorted({m for seq in marginals for m in seq})
        )
        pos_of_value = {val: k for k, val in enumerate(self.center_values)}
        self.num_centers = len(self.center_values)

        n_nodes = nU + nV + self.num_centers
        self.num_nodes = n_nodes
        to: list[int] = []
        cap: list[int] = []
        adj: list[list[int]] = [[] for _ in range(n_nodes)]

        def add_edge(x: int, y: int, c: int) -> int:
            eid = len(to)
            to.append(y)
            cap.append(c)
            to.append(x)
            cap.append(0)
            adj[x].append(eid)
            adj[y].append(eid + 1)
            return eid

        self._job_edge: dict[tuple[int, int], int] = {}
        for u in range(nU):
            for v, _w in instance.job_adj[u]:
                self._job_edge[(u, v)] = add_edge(u, nU + v, 1)

        # Per machine: center edges in ascending value order, equal
        # marginals merged into one capacitated edge.
        self._machine_center_edges: list[list[tuple[int, int]]] = []
        for v in range(nV):
            lst = []
            for val, grp in groupby(marginals[v]):
                mult = sum(1 for _ in grp)
                eid = add_edge(nU + v, nU + nV + pos_of_value[val], mult)
                lst.append((eid, val))
            self._machine_center_edges.append(lst)

        self._to = to
        self._cap = cap
        self._rem = list(cap)
        self._adj = adj
        self.comp = [0] * n_nodes
        self._next_comp = 1
        # Reusable stamped scratch arrays for searches.
        self._dist = [0] * n_nodes
        self._seen = [0] * n_nodes
        self._arc = [0] * n_nodes
        self._stamp = 0

    # -- node id helpers ------------------------------------------------

    def job_node(self, u: int) -> int:
        return u

    def machine_node(self, v: int) -> int:
        return self.num_jobs + v

    def center_node(self, k: int) -> int:
        return self.num_jobs + self.num_machines + k

    def describe_node(self, x: int) -> tuple[str, int]:
        """Classify a node id as ("job"|"machine"|"center", local index)."""
        if x < self.num_jobs:
            return ("job", x)
        if x < self.num_jobs + self.num_machines:
            return ("machine", x - self.num_jobs)
        return ("center", x - self.num_jobs - self.num_machines)

    def center_value(self, k: int) -> int:
        return self.center_values[k]

    # -- flow accounting -------------------------------------------------

    def edge_flow(self, eid: int) -> int:
        return self._cap[eid] - self._rem[eid]

    def flow_value(self) -> int:
        return sum(self.edge_flow(e) for e in self._job_edge.values())

    def flow_cost(self) -> int:
        return sum(
            val * self.edge_flow(eid)
            for per_v in self._machine_center_edges
            for eid, val in per_v
        )

    def machine_load(self, v: int) -> int:
        return sum(self.edge_flow(eid) for eid, _ in self._machine_center_edges[v])

    def assigned_machine(self, u: int) -> Optional[int]:
        """Machine whose edge currently carries job u's unit, if any."""
        found = None
        for v, _w in self.instance.job_adj[u]:
            if self.edge_flow(self._job_edge[(u, v)]):
                if found is not None:
                    raise AssertionError(f"job {u} carried by two machines")
                found = v
        return found

    def residual_successors(self, x: int) -> list[int]:
        """Residual out-neighbours of x, ignoring components (test hook)."""
        return [self._to[e] for e in self._adj[x] if self._rem[e] > 0]


def build_cost_center_network(
    instance: BipartiteInstance, costs: Optional[ConvexMachineCost] = None
) -> CostCenterNetwork:
    """Construct the (zero-flow) cost-center network for an instance."""
    return CostCenterNetwork(instance, costs)


def seed_flow(network: CostCenterNetwork, matching: SemiMatching) -> CostCenterNetwork:
    """Load an assignment into the network as a saturating flow.

    Each machine's units enter its cheapest center slots, so the flow
    cost equals the assignment cost from the start.  The network must
    hold no flow yet.  Returns the network for chaining.
    """
    bad = validate_semi_matching(network.instance, matching)
    if bad is not None:
        raise ValueError(f"invalid matching: {bad.kind}: {bad.detail}")
    if network._rem != network._cap:
        raise ValueError("network already carries flow")
    rem = network._rem
    loads = matching.degrees(network.num_machines)
    for u, v in enumerate(matching.machine_of):
        eid = network._job_edge[(u, v)]
        rem[eid] -= 1
        rem[eid ^ 1] += 1
    for v, load in enumerate(loads):
        for eid, _val in network._machine_center_edges[v]:
            if load == 0:
                break
            take = min(load, rem[eid])
            rem[eid] -= take
            rem[eid ^ 1] += take
            load -= take
        assert load == 0, "machine degree exceeded by its own load"
    return network


def _component_nodes(network: CostCenterNetwork, comp: int) -> list[int]:
    return [x for x in range(network.num_nodes) if network.comp[x] == comp]


def _cancel(
    network: CostCenterNetwork,
    comp: int,
    sources: Sequence[int],
    sinks: Sequence[int],
    counters: CancelCounters,
) -> list[int]:
    """Max-flow from source centers to sink centers inside one component.

    Dinitz: breadth-first layering from all sources at once, stopping at
    the first layer that contains a sink, then a depth-first blocking
    flow with current-arc bookkeeping.  Returns the list of nodes
    reachable from the sources in the final (failed) layering, which is
    exactly the residual reachability set used for the partition step.
    """
    to, rem, adj = network._to, network._rem, network._adj
    comp_of = network.comp
    dist, seen, arc = network._dist, network._seen, network._arc

    src_nodes = [network.center_node(k) for k in sources]
    sink_set = {network.center_node(k) for k in sinks}
    rounds = 0
    distances: list[int] = []
    scanned = 0
    reachable: list[int] = []

    while True:
        rounds += 1
        # --- BFS layering, complete levels, stop once a sink level is done.
        network._stamp += 1
        stamp = network._stamp
        frontier = []
        for x in src_nodes:
            if seen[x] != stamp:
                seen[x] = stamp
                dist[x] = 0
                frontier.append(x)
        level = 0
        found = False
        marked = list(frontier)
        while frontier and not found:
            level += 1
            nxt = []
            for x in frontier:
                for e in adj[x]:
                    scanned += 1
                    if rem[e] <= 0:
                        continue
                    y = to[e]
                    if comp_of[y] != comp or seen[y] == stamp:
                        continue
                    seen[y] = stamp
                    dist[y] = level
                    nxt.append(y)
                    if y in sink_set:
                        found = True
            frontier = nxt
            marked.extend(nxt)
        if not found:
            reachable = marked
            break
        D = level
        assert not distances or D > distances[-1], "layer distance not increasing"
        distances.append(D)

        # --- DFS blocking flow over the layered graph.
        for x in marked:
            arc[x] = 0
        for src in src_nodes:
            stack = [src]
            path: list[int] = []
            while stack:
                x = stack[-1]
                if x in sink_set and dist[x] == D and path:
                    delta = min(rem[e] for e in path)
                    for e in path:
                        rem[e] -= delta
                        rem[e ^ 1] += delta
                    counters.units_cancelled += delta
                    cut = next(i for i, e in enumerate(path) if rem[e] == 0)
                    del path[cut:]
                    del stack[cut + 1 :]
                    continue
                advanced = False
                while arc[x] < len(adj[x]):
                    e = adj[x][arc[x]]
                    scanned += 1
                    y = to[e]
                    if (
                        rem[e] > 0
                        and seen[y] == stamp
                        and dist[y] == dist[x] + 1
                        and comp_of[y] == comp
                        and (dist[y] < D or y in sink_set)
                    ):
                        stack.append(y)
                        path.append(e)
                        advanced = True
                        break
                    arc[x] += 1
                if advanced:
                    continue
                stack.pop()
                if path:
                    path.pop()
                if stack:
                    arc[stack[-1]] += 1

    counters.rounds_per_cancel.append(rounds)
    counters.distances_per_cancel.append(distances)
    counters.edges_scanned += scanned
    return reachable


def cancel(
    network: CostCenterNetwork,
    sources: Iterable[int],
    sinks: Iterable[int],
    *,
    counters: Optional[CancelCounters] = None,
) -> CostCenterNetwork:
    """Cancel every residual path from ``sources`` centers to ``sinks``.

    Center arguments are 0-based positions into ``center_values``.
    Every source must be strictly more expensive than every sink, so
    each unit moved lowers the flow cost by the value difference of its
    endpoint centers.  The job-side flow value is untouched.
    """
    sources = sorted(set(sources))
    sinks = sorted(set(sinks))
    for k in sources + sinks:
        if not 0 <= k < network.num_centers:
            raise ValueError(f"no such center: {k}")
    if not sources or not sinks:
        return network
    if sources[0] <= sinks[-1]:
        raise ValueError(
            f"center {sources[0]} may not be cancelled into center {sinks[-1]}: "
            "every source must be strictly costlier than every sink"
        )
    comps = {network.comp[network.center_node(k)] for k in sources + sinks}
    if len(comps) != 1:
        raise ValueError("sources and sinks span different subproblems")
    counters = counters if counters is not None else CancelCounters()
    _cancel(network, comps.pop(), sources, sinks, counters)
    return network


def _reach(network: CostCenterNetwork, comp: int, seed_nodes: list[int]) -> list[int]:
    """Residual reachability inside one component (plain BFS)."""
    to, rem, adj = network._to, network._rem, network._adj
    comp_of = network.comp
    network._stamp += 1
    stamp = network._stamp
    seen = network._seen
    out = []
    frontier = []
    for x in seed_nodes:
        if seen[x] != stamp:
            seen[x] = stamp
            frontier.append(x)
            out.append(x)
    while frontier:
        nxt = []
        for x in frontier:
            for e in adj[x]:
                y = to[e]
                if rem[e] > 0 and comp_of[y] == comp and seen[y] != stamp:
                    seen[y] = stamp
                    nxt.append(y)
                    out.append(y)
        frontier = nxt
    return out


def reachable_partition(
    network: CostCenterNetwork, seed: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]]:
    """Split a component into (reachable-from-seed, rest), as node ids.

    ``seed`` holds center positions; the search runs in their component
    and follows residual edges only.  With an empty seed the reachable
    side is empty and the complement is the whole node set.
    """
    seed = sorted(set(seed))
    if not seed:
        return frozenset(), frozenset(range(network.num_nodes))
    comps = {network.comp[network.center_node(k)] for k in seed}
    if len(comps) != 1:
        raise ValueError("seed centers span different subproblems")
    comp = comps.pop()
    S = frozenset(_reach(network, comp, [network.center_node(k) for k in seed]))
    rest = frozenset(x for x in _component_nodes(network, comp) if x not in S)
    return S, rest


def _cancel_all(
    network: CostCenterNetwork,
    comp: int,
    centers: list[int],
    depth: int,
    counters: CancelCounters,
) -> None:
    counters.max_depth = max(counters.max_depth, depth)
    if len(centers) <= 1:
        return
    half = (len(centers) + 1) // 2
    lower, upper = centers[:half], centers[half:]
    reachable = _cancel(network, comp, upper, lower, counters)
    cheap_centers = {network.center_node(k) for k in lower}
    assert not cheap_centers.intersection(reachable), (
        "a cheap center stayed reachable after cancellation"
    )
    new_comp = network._next_comp
    network._next_comp += 1
    comp_of = network.comp
    for x in reachable:
        comp_of[x] = new_comp
    _cancel_all(network, new_comp, upper, depth + 1, counters)
    _cancel_all(network, comp, lower, depth + 1, counters)


def cancel_all(
    network: CostCenterNetwork, *, counters: Optional[CancelCounters] = None
) -> CostCenterNetwork:
    """Eliminate every cost-reducing residual path; the flow becomes optimal.

    Consumes the network's component labelling: call it once per seeded
    network.  ``counters``, when given, is filled with round counts,
    layer distances, recursion depth, and scan totals.
    """
    if network.flow_value() != network.num_jobs:
        raise ValueError("cancel_all needs a saturating seeded flow")
    counters = counters if counters is not None else CancelCounters()
    _cancel_all(network, 0, list(range(network.num_centers)), 1, counters)
    return network


def extract_semi_matching(network: CostCenterNetwork) -> SemiMatching:
    """Read the assignment back out of a saturating flow.

    Checks that each machine's units occupy its cheapest marginals (true
    for seeded flows by construction and for optimal flows because any
    gap would admit a cost-reducing two-edge path) and that the flow
    cost equals the assignment's cost.
    """
    assignment = []
    for u in range(network.num_jobs):
        v = network.assigned_machine(u)
        if v is None:
            raise ValueError(f"flow is not saturating: job {u} unassigned")
        assignment.append(v)
    matching = SemiMatching(tuple(assignment))

    expected_cost = 0
    for v, load in enumerate(matching.degrees(network.num_machines)):
        marg = network._marginals[v]
        expected_cost += sum(marg[:load])
        filled = load
        for eid, _val in network._machine_center_edges[v]:
            f = network.edge_flow(eid)
            want = min(filled, network._cap[eid])
            assert f == want, f"machine {v}: center usage is not a cheapest prefix"
            filled -= want
    assert network.flow_cost() == expected_cost, "flow cost drifted from assignment cost"
    return matching


def _greedy_seed(instance: BipartiteInstance) -> SemiMatching:
    """Assign each job to its currently least-loaded neighbour."""
    loads = [0] * instance.num_machines
    out = []
    for u in range(instance.num_jobs):
        v = min((vv for vv, _w in instance.job_adj[u]), key=lambda vv: (loads[vv], vv))
        loads[v] += 1
        out.append(v)
    return SemiMatching(tuple(out))


def solve_unweighted(
    instance: BipartiteInstance, *, stats: Optional[CancelCounters] = None
) -> SemiMatching:
    """Minimum total completion time when every job takes unit time.

    Edge weights play no role in the load-based objective and are
    ignored.  Pass a :class:`CancelCounters` as ``stats`` to observe the
    run.
    """
    network = build_cost_center_network(instance)
    seed_flow(network, _greedy_seed(instance))
    cancel_all(network, counters=stats)
    return extract_semi_matching(network)


def solve_convex(
    instance: BipartiteInstance,
    costs: ConvexMachineCost,
    *,
    stats: Optional[CancelCounters] = None,
) -> SemiMatching:
    """Minimize the sum of per-machine convex load costs f_v(load)."""
    network = build_cost_center_network(instance, costs)
    seed_flow(network, _greedy_seed(instance))
    cancel_all(network, counters=stats)
    return extract_semi_matching(network)
