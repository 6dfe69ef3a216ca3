"""Shared fixtures and the running example instance."""

from semimatch.core import BipartiteInstance


def fig2_instance(weights=None):
    """The 4-job/2-machine example used across the test suite.

    Jobs 0..3, machines 0..1, edges (0,0), (1,0), (1,1), (2,1), (3,1).
    Machine 0 sees two jobs, machine 1 three; job 1 is the only one with
    a choice, so exactly two assignments exist (costs 6 and 7).
    """
    edges = [(0, 0), (1, 0), (1, 1), (2, 1), (3, 1)]
    if weights is not None:
        edges = [(u, v, w) for (u, v), w in zip(edges, weights)]
    return BipartiteInstance(4, 2, edges)
