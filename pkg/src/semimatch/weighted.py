"""Optimal weighted semi-matching by successive shortest paths.

A machine that runs jobs shortest-first charges its i-th largest weight
exactly i times, so assigning job u as the i-th heaviest on machine v
costs ``i * w(u, v)``.  Conceptually each machine explodes into slots
``v^1, v^2, ...`` with edge weights ``i * w``, and an optimal assignment
is a minimum-cost perfect-on-jobs matching in that exploded graph.  The
exploded graph is never materialized here: a machine's matched slots
always form a prefix ``1..alpha_v`` holding its matched jobs in
non-increasing weight order, and only the first unmatched slot
``alpha_v + 1`` can ever extend the matching.

Each phase runs Dijkstra in reduced costs from the unmatched jobs and
augments along the shortest path to an unmatched slot.  The twist that
keeps phases near-linear: when a job u is finalized, all of its exploded
edges into machine v are relaxed *at once* by inserting the single line
``g(i) = d(u) + p(u) + i*w`` into a per-machine envelope heap, whose
minimum over live slot indices is the machine's best candidate.  The
slot sequence ``f(i) = g(i) - p(v^i)`` is unimodal with valley
``gamma_uv`` (the first index where consecutive slot potentials differ
by at most w), which is exactly what the envelope heap needs.

Potentials are cumulative across phases, with unmatched jobs and
unmatched slots pinned at zero; they are stored as offsets against a
single running total so a phase only touches the nodes it finalized.
``baseline_exploded_solver``
is a deliberately independent implementation — pruned explicit exploded
graph, ordinary Dijkstra, whole-graph potential updates — kept as an
oracle for the fast path.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .core import (
    BipartiteInstance,
    SemiMatching,
    cost_of_semi_matching,
    machine_cost,
)
from .envelope import AccessMin, EnvelopeFunction, EnvelopeHeap

__all__ = [
    "EktState",
    "WeightedStats",
    "DijkstraRun",
    "GroupedDijkstra",
    "compute_gammas",
    "dijkstra_grouped",
    "relax_group",
    "update_potentials",
    "augment",
    "solve_weighted",
    "baseline_exploded_solver",
]


@dataclass
class WeightedStats:
    """Per-run counters for the fast weighted solver."""

    iterations: int = 0
    group_relaxations: list[int] = field(default_factory=list)
    envelope_inserts: int = 0
    envelope_delete_mins: int = 0
    heap_pushes: int = 0


class EktState:
    """Matching, slot assignment, and potentials between phases.

    ``slots[v]`` lists machine v's matched jobs, heaviest first, so the
    job at list index ``i - 1`` occupies exploded slot ``v^i``.  Slot
    and job potentials are reconstructed from offset arrays against
    ``total_potential`` (the sum of all phase bounds so far); unmatched
    jobs and unmatched slots always have potential zero.
    """

    def __init__(self, instance: BipartiteInstance) -> None:
        self.instance = instance
        nU, nV = instance.num_jobs, instance.num_machines
        self.slots: list[list[int]] = [[] for _ in range(nV)]
        self.slot_weights: list[list[int]] = [[] for _ in range(nV)]
        self.job_slot: list[Optional[tuple[int, int]]] = [None] * nU
        self.total_potential = 0
        self._raw_job: list[int] = [0] * nU
        self._raw_slot: list[list[int]] = [[] for _ in range(nV)]
        self.iteration = 0
        # Machine adjacencies sorted once by descending weight (job id
        # breaks ties), and an ascending view with a skip pointer for
        # finding the lightest still-unmatched neighbour.
        self.adj_desc: list[list[tuple[int, int]]] = [
            sorted(((w, u) for u, w in instance.machine_adj[v]), key=lambda t: (-t[0], t[1]))
            for v in range(nV)
        ]
        self._adj_asc: list[list[tuple[int, int]]] = [
            list(reversed(a)) for a in self.adj_desc
        ]
        self._asc_ptr = [0] * nV

    # -- potentials -------------------------------------------------------

    def alpha(self, v: int) -> int:
        """Number of matched slots of machine v."""
        return len(self.slots[v])

    def job_potential(self, u: int) -> int:
        if self.job_slot[u] is None:
            return 0
        return self.total_potential - self._raw_job[u]

    def slot_potential(self, v: int, i: int) -> int:
        """Potential of slot v^i; every unmatched slot is pinned at zero.

        The pin is load-bearing: phases pick the terminal by reduced
        distance, and only a uniform potential across all unmatched
        slots makes that the same as picking the truly cheapest
        augmentation.
        """
        if i <= len(self._raw_slot[v]):
            return self.total_potential - self._raw_slot[v][i - 1]
        return 0

    def slot_potentials(self, v: int, n: int) -> list[int]:
        """Potentials of v^1..v^n as a list (zeros beyond the prefix)."""
        return [self.slot_potential(v, i) for i in range(1, n + 1)]

    def heap_domain(self, v: int) -> int:
        """Envelope domain size for machine v: min(alpha+1, deg)."""
        return min(self.alpha(v) + 1, self.instance.machine_degree(v))

    def cheapest_unmatched_neighbour(self, v: int) -> Optional[tuple[int, int]]:
        """(weight, job) of v's lightest unmatched neighbour, if any."""
        ptr, asc = self._asc_ptr[v], self._adj_asc[v]
        while ptr < len(asc) and self.job_slot[asc[ptr][1]] is not None:
            ptr += 1
        self._asc_ptr[v] = ptr
        return asc[ptr] if ptr < len(asc) else None

    def num_matched(self) -> int:
        return sum(1 for s in self.job_slot if s is not None)

    def matching(self) -> SemiMatching:
        if any(s is None for s in self.job_slot):
            raise ValueError("not every job is matched yet")
        return SemiMatching(tuple(s[0] for s in self.job_slot))  # type: ignore[index]

    def exploded_cost(self) -> int:
        """Sum of i * w over occupied slots."""
        return sum(
            i * w
            for ws in self.slot_weights
            for i, w in enumerate(ws, start=1)
        )


def _gamma_from_diffs(diffs: list[int], w: int, n: int) -> int:
    """First index i with diffs[i-1] <= w, else n (diffs non-increasing)."""
    lo, hi = 0, len(diffs)
    while lo < hi:
        mid = (lo + hi) // 2
        if diffs[mid] <= w:
            hi = mid
        else:
            lo = mid + 1
    return lo + 1 if lo < len(diffs) else n


def _potential_diffs(state: EktState, v: int, n: int) -> list[int]:
    """p(v^{i+1}) - p(v^i) for i = 1..n-1."""
    pots = state.slot_potentials(v, n)
    return [b - a for a, b in zip(pots, pots[1:])]


def compute_gammas(state: EktState) -> dict[tuple[int, int], int]:
    """Valley index of every edge's slot sequence, batch-computed.

    For edge (u, v), gamma is the first slot index i in [1, heap domain]
    where ``p(v^{i+1}) - p(v^i) <= w(u, v)``.  Potential differences are
    non-increasing across the slot prefix and valleys are monotone in
    the weight, so one two-pointer sweep over each machine's
    weight-descending adjacency does all edges in linear time.
    """
    out: dict[tuple[int, int], int] = {}
    for v in range(state.instance.num_machines):
        n = state.heap_domain(v)
        if n == 0:
            continue
        diffs = _potential_diffs(state, v, n)
        i = 1
        for w, u in state.adj_desc[v]:
            while i < n and diffs[i - 1] > w:
                i += 1
            out[(u, v)] = i
    return out


@dataclass
class DijkstraRun:
    """Everything one phase's shortest-path computation produced.

    Distances are reduced-cost distances from the set of unmatched jobs.
    ``bound`` is the distance of the unmatched slot that ended the
    search; nodes it never finalized are treated as being at ``bound``.
    The augmenting path is implicit: ``terminal`` names the unmatched
    slot, ``slot_owner[(v, i)]`` the job whose relaxation won slot v^i,
    and each matched job hands the walk back to its own slot.
    """

    dist_job: dict[int, int]
    dist_slot: dict[tuple[int, int], int]
    bound: int
    terminal: tuple[int, int]
    slot_owner: dict[tuple[int, int], int]

    def path(self, state: EktState) -> list[tuple[int, int, int]]:
        """(job, machine, slot) hops from the source job to the terminal."""
        hops = []
        v, i = self.terminal
        job = self.slot_owner[(v, i)]
        while True:
            hops.append((job, v, i))
            prev = state.job_slot[job]
            if prev is None:
                break
            v, i = prev
            job = self.slot_owner[(v, i)]
        hops.reverse()
        return hops


_INF = float("inf")


class GroupedDijkstra:
    """One phase's shortest-path search over the implicit exploded graph.

    The global frontier holds jobs and one candidate per touched
    machine.  Ties break on (value, node id), with machines assigned the
    low ids: at equal distance a machine pop — possibly the terminal —
    beats job pops, so a phase ends before relaxing a plateau of
    equal-distance jobs.

    Relaxations are two-stage.  A group relaxation only computes the
    line's valley value — its minimum over the whole slot range, hence a
    lower bound on its minimum over live slots — and parks the line in a
    per-machine pending heap, advertising the bound as the machine's
    candidate.  Pending lines are moved into the envelope heap only when
    the machine surfaces at the global front at a value they could tie
    or beat; everything else stays parked.  On top of that the search
    keeps a running upper bound on the phase's terminal distance (the
    cheapest first-unmatched-slot value seen on any line so far) and
    drops relaxations whose valley value exceeds it outright: they can
    influence neither a pop nor the terminal choice.  Most of a phase's
    relaxations die in one of those two filters, which is what keeps
    phases affordable even when they scan most of the graph.  With
    ``check`` instrumentation or a recorder attached every line is
    materialized eagerly and nothing is dropped, so those hooks see the
    full operation stream.
    """

    def __init__(
        self,
        state: EktState,
        *,
        stats: Optional[WeightedStats] = None,
        heap_factory: Optional[Callable[[int], EnvelopeHeap]] = None,
        recorder: Optional[list] = None,
    ) -> None:
        self.state = state
        self.stats = stats
        self._heap_factory = heap_factory or EnvelopeHeap
        self._recorder = recorder
        self._eager = heap_factory is not None or recorder is not None
        nV = state.instance.num_machines
        self._job_base = nV
        self._heaps: list[Optional[EnvelopeHeap]] = [None] * nV
        self._pots: list[Optional[list[int]]] = [None] * nV
        self._negdiffs: list[Optional[list[int]]] = [None] * nV
        self._domain: list[int] = [0] * nV
        self._pending: list[Optional[list[tuple]]] = [None] * nV
        self._last_pushed: list[float] = [_INF] * nV
        # _free_n[v] is the index of v's first unmatched slot, or 0 when v
        # is full; _base[v] lower-bounds any line's valley value into v up
        # to its intercept (it is the valley value of a zero-intercept line
        # with v's smallest edge weight).
        self._free_n: list[int] = [0] * nV
        self._base: list[int] = [0] * nV
        self._ub: float = _INF  # upper bound on this phase's terminal distance
        self._records: dict[int, dict] = {}
        self.dist_job: dict[int, int] = {}
        self.dist_slot: dict[tuple[int, int], int] = {}
        self.slot_owner: dict[tuple[int, int], int] = {}
        self.gammas_used: dict[tuple[int, int], int] = {}
        self.relaxations = 0
        self._pq: list[tuple[int, int]] = []
        for v in range(nV):
            if state.cheapest_unmatched_neighbour(v) is not None:
                self._touch(v)

    # -- per-machine phase tables -----------------------------------------

    def _touch(self, v: int) -> list[int]:
        """Build machine v's potential tables and seed its source line."""
        state = self.state
        alpha = len(state.slots[v])
        deg = state.instance.machine_degree(v)
        n = alpha + 1 if alpha < deg else deg
        total = state.total_potential
        pots = [total - r for r in state._raw_slot[v][:n]]
        if len(pots) < n:
            pots.append(0)  # the first unmatched slot
            self._free_n[v] = n
        negd = [pots[i] - pots[i + 1] for i in range(n - 1)]
        self._pots[v] = pots
        self._negdiffs[v] = negd
        self._domain[v] = n
        wmin = state.adj_desc[v][-1][0]
        g0 = bisect_left(negd, -wmin) + 1
        self._base[v] = wmin * g0 - pots[g0 - 1]
        pend: list[tuple] = []
        self._pending[v] = pend
        best = state.cheapest_unmatched_neighbour(v)
        if best is not None:
            w, u = best
            g = bisect_left(negd, -w) + 1
            fg = w * g - pots[g - 1]
            pend.append((fg, w, 0, g, u))
            if self._free_n[v]:
                t = w * n  # source line's value at the first unmatched slot
                if t < self._ub:
                    self._ub = t
            self._last_pushed[v] = fg
            if fg <= self._ub:
                heapq.heappush(self._pq, (fg, v))
            if self._eager:
                self._drain(v)
        return pots

    def _materialize(self, v: int, entry: tuple) -> EnvelopeHeap:
        fg, w, b, g, u = entry
        heap = self._heaps[v]
        pots = self._pots[v]
        if heap is None:
            if self._eager:
                heap = self._heap_factory(self._domain[v])
            else:
                heap = EnvelopeHeap(self._domain[v], shift=pots)
            self._heaps[v] = heap
            if self._recorder is not None:
                rec = {"n": self._domain[v], "pots": tuple(pots), "events": []}
                self._records[v] = rec
                self._recorder.append(rec)
        if not self._eager:
            heap.insert_line(w, b, g, payload=u)
        else:
            def values(i: int, w: int = w, b: int = b, pots: list[int] = pots) -> int:
                return w * i + b - pots[i - 1]

            if self._recorder is not None:
                self._records[v]["events"].append(("insert", w, b, g))
            heap.insert(
                EnvelopeFunction(slope=w, intercept=b, valley=g, values=values, payload=u)
            )
        if self.stats is not None:
            self.stats.envelope_inserts += 1
        return heap

    def _drain(self, v: int) -> None:
        pend = self._pending[v]
        while pend:
            self._materialize(v, heapq.heappop(pend))

    # -- the public knobs --------------------------------------------------

    def relax_group(self, u: int, d: int, v: int, w: int) -> None:
        """Account for all exploded edges u->v^1..v^n at once.

        ``d`` is u's finalized distance; the line's intercept is
        ``d + p(u)``.  This is the faithful, drop-nothing form; the main
        loop inlines a filtered copy of it.
        """
        pots = self._pots[v]
        if pots is None:
            pots = self._touch(v)
        g = bisect_left(self._negdiffs[v], -w) + 1
        b = d + self.state.job_potential(u)
        fg: float = w * g + b - pots[g - 1]
        self.gammas_used[(u, v)] = g
        heapq.heappush(self._pending[v], (fg, w, b, g, u))
        self.relaxations += 1
        if self._free_n[v]:
            t = w * self._free_n[v] + b
            if t < self._ub:
                self._ub = t
        if self._eager:
            self._drain(v)
            heap = self._heaps[v]
            assert heap is not None
            fg = heap.access_min().value if heap.live_count else _INF
        if fg < self._last_pushed[v]:
            self._last_pushed[v] = fg
            heapq.heappush(self._pq, (fg, v))
            if self.stats is not None:
                self.stats.heap_pushes += 1

    def machine_minimum(self, v: int) -> Optional[AccessMin]:
        """Current envelope minimum of machine v (None if exhausted).

        Exact over every line handed to :meth:`relax_group`; the main
        loop's filtered relaxations may drop lines that provably cannot
        surface this phase, so mid-``run`` the value is a lower bound.
        """
        if self._pots[v] is None:
            return None
        self._drain(v)
        heap = self._heaps[v]
        if heap is None or not heap.live_count:
            return None
        return heap.access_min()

    def run(self) -> DijkstraRun:
        state = self.state
        job_base = self._job_base
        job_adj = state.instance.job_adj
        raw_job = state._raw_job
        slots = state.slots
        total = state.total_potential
        pots_l, negdiffs_l = self._pots, self._negdiffs
        pending_l, last_l = self._pending, self._last_pushed
        free_l, base_l = self._free_n, self._base
        heaps = self._heaps
        dist_job = self.dist_job
        pq = self._pq
        eager = self._eager
        ub = self._ub
        push, pop, bis = heapq.heappush, heapq.heappop, bisect_left
        pushes = relaxed = inserts = 0
        while pq:
            value, node = pop(pq)
            if node >= job_base:
                u = node - job_base
                if u in dist_job:
                    continue
                dist_job[u] = value
                if eager:
                    for v, w in job_adj[u]:
                        self.relax_group(u, value, v, w)
                    continue
                b = value + total - raw_job[u]  # d(u) + p(u); popped jobs are matched
                for v, w in job_adj[u]:
                    pots = pots_l[v]
                    if pots is None:
                        pots = self._touch(v)
                        if self._ub < ub:
                            ub = self._ub
                    if b + base_l[v] > ub:
                        continue  # cheapest conceivable slot of v is beyond the terminal
                    g = bis(negdiffs_l[v], -w) + 1
                    fg = w * g + b - pots[g - 1]
                    if fg > ub:
                        continue
                    fn = free_l[v]
                    if fn:
                        t = w * fn + b  # this line's value at v's first unmatched slot
                        if t < ub:
                            ub = t
                    push(pending_l[v], (fg, w, b, g, u))
                    if fg < last_l[v]:
                        last_l[v] = fg
                        push(pq, (fg, v))
                        pushes += 1
                relaxed += len(job_adj[u])
                continue
            v = node
            heap = heaps[v]
            if heap is not None and not heap.live_count:
                continue  # every slot in v's domain already finalized
            pend = pending_l[v]
            env_min = heap.min_value() if heap is not None else _INF
            # Batch in every parked line below the envelope minimum: each
            # is a potential winner here or at a later surfacing, and
            # draining them together avoids one global-queue round trip
            # per line.  Lines beyond the terminal upper bound can win
            # nothing this phase and stay parked for good.
            while pend and pend[0][0] < env_min and pend[0][0] <= ub:
                e = pop(pend)
                if heap is None:
                    heap = self._materialize(v, e)
                    env_min = heap.min_value()
                    continue
                fg, w, b, g, owner = e
                heap.insert_line(w, b, g, payload=owner)
                inserts += 1
                if heap._live[g]:
                    # A live valley pins the line's minimum at exactly fg.
                    if fg < env_min:
                        env_min = fg
                else:
                    env_min = heap.min_value()
            cand = env_min
            if cand != value:
                if value < cand != _INF:
                    # Our entry was only a lower bound; re-advertise.
                    last_l[v] = cand
                    if cand <= ub:
                        push(pq, (cand, v))
                        pushes += 1
                continue
            am = heap.access_min()  # type: ignore[union-attr]  # cand == env_min here
            i = am.index
            self.slot_owner[(v, i)] = am.payload
            if i == len(slots[v]) + 1:
                self.relaxations += relaxed
                self._ub = ub
                if self.stats is not None:
                    self.stats.group_relaxations.append(self.relaxations)
                    self.stats.heap_pushes += pushes
                    self.stats.envelope_inserts += inserts
                if self._recorder is not None:
                    for rec in self._records.values():
                        rec["events"].append(("stop",))
                return DijkstraRun(
                    dist_job=self.dist_job,
                    dist_slot=self.dist_slot,
                    bound=value,
                    terminal=(v, i),
                    slot_owner=self.slot_owner,
                )
            self.dist_slot[(v, i)] = value
            heap.delete_min()
            if self.stats is not None:
                self.stats.envelope_delete_mins += 1
            if self._recorder is not None:
                self._records[v]["events"].append(("pop",))
            nxt = heap.min_value() if heap.live_count else _INF
            if pend and pend[0][0] < nxt:
                nxt = pend[0][0]
            if nxt != _INF:
                # The next candidate is never below the one just consumed,
                # so the improvement filter must not swallow it.
                last_l[v] = nxt
                if nxt <= ub:
                    push(pq, (nxt, v))
                    pushes += 1
            occupant = slots[v][i - 1]
            if occupant not in dist_job:
                push(pq, (value, job_base + occupant))  # matching edge is tight
                pushes += 1
        raise AssertionError("no unmatched slot reachable from the unmatched jobs")


def dijkstra_grouped(
    state: EktState,
    *,
    stats: Optional[WeightedStats] = None,
    heap_factory: Optional[Callable[[int], EnvelopeHeap]] = None,
    recorder: Optional[list] = None,
) -> DijkstraRun:
    """Run one phase's grouped-relaxation Dijkstra; see GroupedDijkstra."""
    return GroupedDijkstra(
        state, stats=stats, heap_factory=heap_factory, recorder=recorder
    ).run()


def relax_group(search: GroupedDijkstra, u: int, d: int, v: int, w: int) -> None:
    """Module-level alias for GroupedDijkstra.relax_group."""
    search.relax_group(u, d, v, w)


def update_potentials(state: EktState, run: DijkstraRun) -> None:
    """Fold a phase's distances into the cumulative potentials.

    Every matched job and matched slot conceptually gains
    ``min(d(x), bound)``; storing potentials as offsets against the
    running bound total makes that one bookkeeping write per node the
    phase actually finalized.  Unmatched slots stay pinned at zero, and
    unmatched jobs (the sources, d = 0) stay at zero by construction.
    """
    state.total_potential += run.bound
    for u, d in run.dist_job.items():
        state._raw_job[u] += run.bound - d
    for (v, i), d in run.dist_slot.items():
        state._raw_slot[v][i - 1] += run.bound - d


def augment(state: EktState, run: DijkstraRun) -> None:
    """Grow the matching by one along the phase's shortest path.

    Walk the winning-line owners backwards from the terminal slot: each
    slot on the path takes its owner, which frees the owner's previous
    slot for *its* owner, until an unmatched job starts the chain.  The
    terminal slot becomes matched with potential equal to the phase
    bound, which keeps its matching edge tight.
    """
    v, i = run.terminal
    if i != state.alpha(v) + 1:
        raise ValueError(f"terminal {run.terminal} is not the first unmatched slot")
    job = run.slot_owner[(v, i)]
    state.slots[v].append(job)
    state.slot_weights[v].append(0)  # placeholder; fixed below
    # Tightness of the new matching edge wants the terminal at bound.
    state._raw_slot[v].append(state.total_potential - run.bound)
    weight_of = state.instance.weight
    while True:
        w = weight_of(job, v)
        state.slots[v][i - 1] = job
        state.slot_weights[v][i - 1] = w
        ws = state.slot_weights[v]
        assert (i == 1 or ws[i - 2] >= w) and (i == len(ws) or w >= ws[i]), (
            f"slot weights of machine {v} lost their ordering at slot {i}"
        )
        prev = state.job_slot[job]
        state.job_slot[job] = (v, i)
        if prev is None:
            # The path's source was unmatched (potential pinned at zero);
            # anchor its offset so it keeps potential zero from here on.
            state._raw_job[job] = state.total_potential
            break
        v, i = prev
        job = run.slot_owner[(v, i)]
    state.iteration += 1


def solve_weighted(
    instance: BipartiteInstance,
    *,
    stats: Optional[WeightedStats] = None,
    check: bool = False,
    recorder: Optional[list] = None,
) -> SemiMatching:
    """Minimum total weighted completion time assignment.

    ``stats`` collects counters; ``check=True`` runs the full invariant
    suite after every phase (slow: meant for tests); ``recorder``, a
    list, harvests every envelope-heap operation sequence for replay.
    """
    state = EktState(instance)
    heap_factory = _CheckedEnvelopeHeap if check else None
    for _ in range(instance.num_jobs):
        run = dijkstra_grouped(
            state, stats=stats, heap_factory=heap_factory, recorder=recorder
        )
        update_potentials(state, run)
        augment(state, run)
        if check:
            check_invariants(state, run)
    if stats is not None:
        stats.iterations = state.iteration
    matching = state.matching()
    assert state.exploded_cost() == cost_of_semi_matching(instance, matching)
    return matching


# --------------------------------------------------------------------------
# Invariant suite (test instrumentation, exercised by the acceptance run)


class _CheckedEnvelopeHeap(EnvelopeHeap):
    """Envelope heap that re-derives every answer by brute scan."""

    def __init__(self, domain_size: int) -> None:
        super().__init__(domain_size, check=True)
        self._shadow_fns: list[EnvelopeFunction] = []
        self._shadow_live = set(range(1, domain_size + 1))

    def _naive(self) -> Optional[tuple[int, int]]:
        best = None
        for x in sorted(self._shadow_live):
            for fn in self._shadow_fns:
                val = fn.values(x)
                if best is None or val < best[0]:
                    best = (val, x)
        return best

    def insert(self, fn: EnvelopeFunction) -> int:
        self._shadow_fns.append(fn)
        uid = super().insert(fn)
        self._assert_agrees()
        return uid

    def delete_min(self) -> int:
        idx = super().delete_min()
        self._shadow_live.discard(idx)
        self._assert_agrees()
        return idx

    def _assert_agrees(self) -> None:
        naive = self._naive()
        if not self._shadow_live or not self._shadow_fns:
            return
        got = self.access_min()
        assert naive is not None and got.value == naive[0], (
            f"envelope minimum {got.value} disagrees with naive scan {naive}"
        )


def check_invariants(state: EktState, run: Optional[DijkstraRun] = None) -> None:
    """Assert the full between-phase invariant suite.

    Covers: slot prefixes with non-increasing weights and consistent
    back-pointers; non-negative reduced cost on every exploded edge up
    to the first unmatched slot, with matching edges exactly tight;
    potential differences sandwiched by consecutive occupant weights
    (hence non-increasing, hence unimodal slot sequences); valley
    monotonicity along each machine's weight-sorted adjacency; and,
    given the phase's distances, unimodality of the realized f-sequences
    of every finalized job.
    """
    inst = state.instance
    for u in range(inst.num_jobs):
        here = state.job_slot[u]
        if here is not None:
            v, i = here
            assert state.slots[v][i - 1] == u, f"job {u} back-pointer broken"
        else:
            assert state.job_potential(u) == 0

    for v in range(inst.num_machines):
        alpha = state.alpha(v)
        assert alpha <= inst.machine_degree(v)
        ws = state.slot_weights[v]
        assert ws == [inst.weight(u, v) for u in state.slots[v]]
        assert all(a >= b for a, b in zip(ws, ws[1:])), (
            f"machine {v}: slot weights {ws} not non-increasing"
        )
        # Sandwich: w_i >= p(v^{i+1}) - p(v^i) >= w_{i+1}.
        pots = state.slot_potentials(v, alpha + 1)
        for i in range(1, alpha + 1):
            diff = pots[i] - pots[i - 1] if i < alpha + 1 else None
            assert diff is not None
            assert ws[i - 1] >= diff, (v, i, ws, pots)
            if i < alpha:
                assert diff >= ws[i], (v, i, ws, pots)

    for u in range(inst.num_jobs):
        pu = state.job_potential(u)
        for v, w in inst.job_adj[u]:
            n = state.heap_domain(v)
            for i in range(1, n + 1):
                red = i * w + pu - state.slot_potential(v, i)
                assert red >= 0, (
                    f"negative reduced cost {red} on job {u} -> slot {v}^{i}"
                )
                if state.job_slot[u] == (v, i):
                    assert red == 0, f"matching edge {u} -> {v}^{i} not tight"

    gammas = compute_gammas(state)
    for v in range(inst.num_machines):
        prev = 0
        for w, u in state.adj_desc[v]:
            g = gammas[(u, v)]
            assert g >= prev, f"machine {v}: valleys not monotone in weight"
            prev = g

    if run is not None:
        for u, d in run.dist_job.items():
            for v, w in inst.job_adj[u]:
                n = state.heap_domain(v)
                # f over the *current* state is still unimodal; check shape.
                seq = [
                    d + i * w - state.slot_potential(v, i) for i in range(1, n + 1)
                ]
                valley = seq.index(min(seq))
                assert all(a >= b for a, b in zip(seq[:valley], seq[1 : valley + 1]))
                assert all(a <= b for a, b in zip(seq[valley:], seq[valley + 1 :]))


# --------------------------------------------------------------------------
# Independent baseline: explicit pruned exploded graph, ordinary Dijkstra.


def _pruned_exploded_edges(
    instance: BipartiteInstance,
) -> Iterator[tuple[int, int, int, int]]:
    """Yield (job, machine, slot index, cost) for each kept exploded edge.

    Per job, only its |U| cheapest exploded edges can ever be used (a
    matching occupies at most |U| slots overall), so a per-job heap
    merges the neighbour streams u->v^1, u->v^2, ... and keeps the |U|
    smallest i*w values.
    """
    nU = instance.num_jobs
    for u in range(nU):
        stream = [(w, v, 1, w) for v, w in instance.job_adj[u]]
        heapq.heapify(stream)
        taken = 0
        while stream and taken < nU:
            cost, v, i, w = heapq.heappop(stream)
            yield (u, v, i, cost)
            taken += 1
            if i < instance.machine_degree(v):
                heapq.heappush(stream, ((i + 1) * w, v, i + 1, w))


def baseline_exploded_solver(instance: BipartiteInstance) -> SemiMatching:
    """Textbook successive shortest paths on the explicit exploded graph.

    Shares no machinery with :func:`solve_weighted`: slots are real
    nodes, every incident edge is relaxed one at a time, and *all* node
    potentials (unmatched slots included) get the standard
    ``p += min(d, bound)`` update each phase.  Exists to cross-check the
    fast solver.
    """
    nU = instance.num_jobs
    # Node ids: jobs 0..nU-1, then one node per kept (v, i) slot.
    slot_id: dict[tuple[int, int], int] = {}
    out_edges: list[list[tuple[int, int]]] = [[] for _ in range(nU)]
    for u, v, i, cost in _pruned_exploded_edges(instance):
        sid = slot_id.get((v, i))
        if sid is None:
            sid = nU + len(slot_id)
            slot_id[(v, i)] = sid
        out_edges[u].append((sid, cost))
    n_nodes = nU + len(slot_id)
    slot_of_id = {sid: vi for vi, sid in slot_id.items()}

    INF = float("inf")
    potential = [0] * n_nodes
    matched_job_of_slot: dict[int, int] = {}
    slot_of_job: list[Optional[int]] = [None] * nU
    edge_cost: dict[tuple[int, int], int] = {}
    for u in range(nU):
        for sid, cost in out_edges[u]:
            edge_cost[(u, sid)] = cost

    for _phase in range(nU):
        dist = [INF] * n_nodes
        parent: list[Optional[int]] = [None] * n_nodes
        done = [False] * n_nodes
        pq: list[tuple[int, int]] = []
        for u in range(nU):
            if slot_of_job[u] is None:
                dist[u] = 0
                heapq.heappush(pq, (0, u))
        terminal = None
        bound = None
        while pq:
            d, x = heapq.heappop(pq)
            if done[x] or d > dist[x]:
                continue
            done[x] = True
            if x >= nU and x not in matched_job_of_slot:
                terminal = x
                bound = d
                break
            if x < nU:
                for sid, cost in out_edges[x]:
                    nd = d + cost + potential[x] - potential[sid]
                    if nd < dist[sid]:
                        dist[sid] = nd
                        parent[sid] = x
                        heapq.heappush(pq, (nd, sid))
            else:
                u = matched_job_of_slot[x]
                nd = d + -(edge_cost[(u, x)]) + potential[x] - potential[u]
                if nd < dist[u]:
                    dist[u] = nd
                    parent[u] = x
                    heapq.heappush(pq, (nd, u))
        assert terminal is not None and bound is not None, "no augmenting path"
        for x in range(n_nodes):
            potential[x] += min(dist[x], bound) if dist[x] < INF else bound
        # Flip the path: each slot on it takes the job that relaxed it,
        # freeing that job's old slot for the next step of the walk.
        x: Optional[int] = terminal
        while x is not None:
            u = parent[x]
            assert u is not None and u < nU
            slot_of_job[u], x = x, slot_of_job[u]
            matched_job_of_slot[slot_of_job[u]] = u  # type: ignore[index]

    assignment = []
    for u in range(nU):
        sid = slot_of_job[u]
        assert sid is not None
        assignment.append(slot_of_id[sid][0])
    return SemiMatching(tuple(assignment))
