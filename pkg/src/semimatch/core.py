"""Bipartite load-balancing instances and assignment cost accounting.

The central objects here are :class:`BipartiteInstance` (jobs on the left,
machines on the right, optional integer edge weights) and
:class:`SemiMatching` (an assignment of every job to one adjacent machine;
machines may receive any number of jobs).

The cost of loading one machine with jobs of weights ``w_1 <= ... <= w_d``
is the total completion time of running them shortest-first::

    cost = d*w_1 + (d-1)*w_2 + ... + 1*w_d

i.e. each job waits for everything scheduled before it.  With unit weights
this collapses to ``d*(d+1)/2``.  :func:`convex_cost` generalises the
per-machine cost to an arbitrary convex function of the machine degree.

All ids are dense and 0-based.  Instances are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

#: Edge weights must fit in an unsigned 31-bit integer.
MAX_WEIGHT = 2**31 - 1

#: Costs are accounted in a signed 64-bit accumulator.
MAX_COST = 2**63 - 1


class SemiMatchError(Exception):
    """Base class for errors raised by this package."""


class InfeasibleInstanceError(SemiMatchError):
    """The instance admits no semi-matching (some job has no edges)."""


class CostOverflowError(SemiMatchError):
    """A cost accumulator exceeded the signed 64-bit range."""


def _checked_cost(value: int) -> int:
    if value > MAX_COST:
        raise CostOverflowError(f"cost {value} exceeds the 64-bit accumulator")
    return value


class BipartiteInstance:
    """An immutable bipartite instance: jobs, machines and weighted edges.

    Edges are given as ``(job, machine)`` or ``(job, machine, weight)``
    tuples; missing weights default to 1.  Duplicate edges are rejected,
    as are out-of-range ids and weights outside ``[0, 2**31)``.  A job with
    no edge can never be assigned, so such instances are rejected up front
    with :class:`InfeasibleInstanceError`.  Machines with no edges are
    legal; they simply never receive work.
    """

    __slots__ = ("num_jobs", "num_machines", "edges", "job_adj", "machine_adj")

    def __init__(
        self,
        num_jobs: int,
        num_machines: int,
        edges: Iterable[Sequence[int]],
    ) -> None:
        if num_jobs < 0 or num_machines < 0:
            raise ValueError("vertex counts must be non-negative")
        norm = []
        seen = set()
        for edge in edges:
            if len(edge) == 2:
                u, v, w = edge[0], edge[1], 1
            elif len(edge) == 3:
                u, v, w = edge
            else:
                raise ValueError(f"edge {edge!r} is not a 2- or 3-tuple")
            if not 0 <= u < num_jobs:
                raise ValueError(f"job id {u} out of range [0, {num_jobs})")
            if not 0 <= v < num_machines:
                raise ValueError(f"machine id {v} out of range [0, {num_machines})")
            if not 0 <= w <= MAX_WEIGHT:
                raise ValueError(f"weight {w} outside [0, 2**31)")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            norm.append((u, v, w))

        job_adj: list[list[tuple[int, int]]] = [[] for _ in range(num_jobs)]
        machine_adj: list[list[tuple[int, int]]] = [[] for _ in range(num_machines)]
        for u, v, w in norm:
            job_adj[u].append((v, w))
            machine_adj[v].append((u, w))

        for u, adj in enumerate(job_adj):
            if not adj:
                raise InfeasibleInstanceError(
                    f"job {u} has no incident edges; no assignment exists"
                )

        self.num_jobs = num_jobs
        self.num_machines = num_machines
        self.edges = tuple(norm)
        self.job_adj = tuple(tuple(a) for a in job_adj)
        self.machine_adj = tuple(tuple(a) for a in machine_adj)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def machine_degree(self, v: int) -> int:
        return len(self.machine_adj[v])

    def max_machine_degree(self) -> int:
        return max((len(a) for a in self.machine_adj), default=0)

    def is_unit_weight(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def weight(self, u: int, v: int) -> int:
        """Weight of edge (u, v); raises KeyError if absent."""
        for vv, w in self.job_adj[u]:
            if vv == v:
                return w
        raise KeyError(f"no edge ({u}, {v})")

    def __repr__(self) -> str:
        return (
            f"BipartiteInstance(num_jobs={self.num_jobs}, "
            f"num_machines={self.num_machines}, num_edges={self.num_edges})"
        )


@dataclass(frozen=True)
class SemiMatching:
    """An assignment of every job to one machine.

    ``machine_of[u]`` is the machine that job ``u`` runs on.  Construction
    does not validate adjacency; use :func:`validate_semi_matching`.
    """

    machine_of: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "machine_of", tuple(self.machine_of))

    def machine_loads(self, instance: BipartiteInstance) -> list[list[int]]:
        """Per-machine lists of assigned job weights."""
        loads: list[list[int]] = [[] for _ in range(instance.num_machines)]
        for u, v in enumerate(self.machine_of):
            loads[v].append(instance.weight(u, v))
        return loads

    def degrees(self, num_machines: int) -> list[int]:
        degs = [0] * num_machines
        for v in self.machine_of:
            degs[v] += 1
        return degs


@dataclass(frozen=True)
class Violation:
    """First problem found while validating an assignment."""

    kind: str  # "size" | "unassigned" | "not-an-edge"
    detail: str


def machine_cost(weights: Iterable[int]) -> int:
    """Total completion time of one machine given its assigned weights.

    The multiset is sorted increasingly and weight ``w_i`` (1-based rank
    ``i`` out of ``d``) contributes ``(d - i + 1) * w_i``.  Equivalently:
    the sum of prefix sums, i.e. every job's completion time when the
    machine runs its jobs shortest-first.

    >>> machine_cost([3, 1, 2])
    10
    >>> machine_cost([1, 1, 1])
    6
    """
    total = 0
    elapsed = 0
    for w in sorted(weights):
        elapsed += w
        total += elapsed
        if total > MAX_COST:
            raise CostOverflowError(f"machine cost exceeds 64-bit range")
    return total


def cost_of_semi_matching(instance: BipartiteInstance, matching: SemiMatching) -> int:
    """Total cost of an assignment, summed over machines.

    The matching must be valid for the instance (every job assigned along
    an existing edge); cost of an invalid matching is undefined and this
    function may raise ``KeyError``.
    """
    return _checked_cost(
        sum(machine_cost(ws) for ws in matching.machine_loads(instance))
    )


def validate_semi_matching(
    instance: BipartiteInstance, matching: SemiMatching
) -> Optional[Violation]:
    """Check an assignment against an instance.

    Returns ``None`` when the assignment is a valid semi-matching, else a
    :class:`Violation` describing the first problem found: wrong number of
    assignments, a job without a machine, or a job assigned along a
    non-existent edge.
    """
    if len(matching.machine_of) != instance.num_jobs:
        return Violation(
            "size",
            f"expected {instance.num_jobs} assignments, got {len(matching.machine_of)}",
        )
    for u, v in enumerate(matching.machine_of):
        if v is None or not 0 <= v < instance.num_machines:
            return Violation("unassigned", f"job {u} has no machine (got {v!r})")
        if all(vv != v for vv, _ in instance.job_adj[u]):
            return Violation("not-an-edge", f"({u}, {v}) is not an edge")
    return None


class ConvexMachineCost:
    """Per-machine convex cost functions, stored as marginal sequences.

    For machine ``v`` the cost of carrying ``k`` jobs is
    ``f_v(k) = marginals[v][0] + ... + marginals[v][k-1]`` with
    ``f_v(0) = 0``.  Convexity means each marginal sequence is
    non-decreasing; this is validated at construction, as is
    non-negativity (the solvers require non-negative costs).

    Only the first ``deg(v)`` marginals of a machine can ever be used, so
    that is all that is stored.
    """

    __slots__ = ("marginals",)

    def __init__(self, marginals: Sequence[Sequence[int]]) -> None:
        checked = []
        for v, seq in enumerate(marginals):
            seq = tuple(int(x) for x in seq)
            if any(x < 0 for x in seq):
                raise ValueError(f"machine {v}: negative marginal in {seq}")
            if any(b < a for a, b in zip(seq, seq[1:])):
                raise ValueError(
                    f"machine {v}: marginals {seq} are not non-decreasing "
                    "(cost function is not convex)"
                )
            checked.append(seq)
        self.marginals = tuple(checked)

    @classmethod
    def from_callable(
        cls, instance: BipartiteInstance, f: Callable[[int], int]
    ) -> "ConvexMachineCost":
        """Build marginals ``f(i) - f(i-1)`` for every machine, ``f(0)`` must be 0."""
        if f(0) != 0:
            raise ValueError("cost function must satisfy f(0) == 0")
        margs = []
        for v in range(instance.num_machines):
            deg = instance.machine_degree(v)
            margs.append([f(i) - f(i - 1) for i in range(1, deg + 1)])
        return cls(margs)

    @classmethod
    def triangular(cls, instance: BipartiteInstance) -> "ConvexMachineCost":
        """f(k) = k*(k+1)/2 -- the unit-weight completion-time objective."""
        return cls.from_callable(instance, lambda k: k * (k + 1) // 2)

    @classmethod
    def quadratic(cls, instance: BipartiteInstance) -> "ConvexMachineCost":
        """f(k) = k**2."""
        return cls.from_callable(instance, lambda k: k * k)

    @classmethod
    def linear(cls, instance: BipartiteInstance) -> "ConvexMachineCost":
        """f(k) = k; every assignment then costs exactly num_jobs."""
        return cls.from_callable(instance, lambda k: k)

    def value(self, v: int, k: int) -> int:
        """f_v(k) = sum of the k cheapest marginals of machine v."""
        seq = self.marginals[v]
        if k > len(seq):
            raise ValueError(f"machine {v} has only {len(seq)} marginals, asked {k}")
        return sum(seq[:k])


def convex_cost(
    instance: BipartiteInstance, matching: SemiMatching, costs: ConvexMachineCost
) -> int:
    """Sum of f_v(deg_M(v)) over machines for a valid assignment."""
    degs = matching.degrees(instance.num_machines)
    return _checked_cost(sum(costs.value(v, d) for v, d in enumerate(degs)))
