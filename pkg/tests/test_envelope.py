"""Lower-envelope heap against a naive full-scan reference.

The reference model keeps every inserted function as a plain value
table and answers access_min/delete_min by scanning all live indices of
all functions — O(|S|*N) per query, unarguable.  The heap must agree on
every returned *value* (returned indices may differ among exact ties).
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from semimatch.envelope import EnvelopeEmptyError, EnvelopeFunction, EnvelopeHeap
from semimatch.generate import gen_random
from semimatch.weighted import dijkstra_grouped, augment, update_potentials, EktState


class NaiveEnvelope:
    def __init__(self, domain_size):
        self.n = domain_size
        self.tables = []
        self.live = set(range(1, domain_size + 1))

    def insert(self, values):
        self.tables.append([values(x) for x in range(1, self.n + 1)])

    def min_value(self):
        return min(t[x - 1] for t in self.tables for x in self.live)

    def value_at(self, x):
        return min(t[x - 1] for t in self.tables)

    def delete(self, x):
        self.live.discard(x)


def pop_value(h):
    """access_min + delete_min; the heap returns the index from delete."""
    value = h.access_min().value
    h.delete_min()
    return value


def pop_both(heap, naive):
    """Pop the heap and mirror it into the naive scan.

    delete_min may remove any index achieving the minimum, so the naive
    side follows the heap's choice instead of imposing its own
    tie-break; it still checks that the choice really is an argmin.
    """
    value = heap.access_min().value
    assert value == naive.min_value()
    index = heap.delete_min()
    assert naive.value_at(index) == value
    naive.delete(index)
    return value


def line(slope, intercept, n, valley=None):
    """An EnvelopeFunction that *is* its certificate line (γ clamps to 1)."""
    fn = lambda x: slope * x + intercept
    return EnvelopeFunction(
        slope=slope, intercept=intercept, valley=valley or 1, values=fn
    )


def test_single_increasing_line():
    h = EnvelopeHeap(3)
    h.insert(line(2, 0, 3))
    got = h.access_min()
    assert (got.index, got.value) == (1, 2)


def test_two_lines_min_and_delete():
    h = EnvelopeHeap(3)
    h.insert(line(5, 0, 3))
    h.insert(line(1, 8, 3))
    assert h.access_min().value == 5  # min(5x, x+8) on {1,2,3} = {5,10,11}
    assert pop_value(h) == 5
    got = h.access_min()
    assert (got.index, got.value) == (2, 10)
    assert pop_value(h) == 10
    assert pop_value(h) == 11
    with pytest.raises(EnvelopeEmptyError):
        h.access_min()


def test_dominated_line_contributes_nothing():
    h = EnvelopeHeap(4)
    h.insert(line(2, 0, 4))
    before = [pop_value(h) for _ in range(2)]
    h2 = EnvelopeHeap(4)
    h2.insert(line(2, 0, 4))
    h2.insert(line(2, 100, 4))  # parallel and above: never on the envelope
    after = [pop_value(h2) for _ in range(2)]
    assert before == after == [2, 4]


def test_empty_heap_raises():
    h = EnvelopeHeap(5)
    with pytest.raises(EnvelopeEmptyError):
        h.access_min()
    with pytest.raises(EnvelopeEmptyError):
        h.delete_min()


def test_valley_out_of_domain_rejected():
    h = EnvelopeHeap(3)
    with pytest.raises(ValueError):
        h.insert(line(1, 0, 3, valley=4))


def test_values_required_without_shift():
    h = EnvelopeHeap(3)
    with pytest.raises(ValueError):
        h.insert(EnvelopeFunction(slope=1, intercept=0, valley=1, values=None))


# ---------------------------------------------------------------------------
# Synthetic families: shared concave-difference shift arrays make every
# line w*x + b - shift[x-1] unimodal with exact certificate linkage, the
# same shape the weighted solver feeds the heap.


def make_shift(rng, n):
    diffs = sorted(rng.randint(-30, 30) for _ in range(n - 1))
    shift = [0]
    for d in diffs:
        shift.append(shift[-1] - d)
    base = min(shift)
    return [s - base for s in shift]


def shifted_family(rng, n, k):
    shift = make_shift(rng, n)
    fns = []
    for _ in range(k):
        w = rng.randint(0, 40)
        b = rng.randint(0, 60)
        seq = [w * x + b - shift[x - 1] for x in range(1, n + 1)]
        valley = seq.index(min(seq)) + 1
        fns.append((w, b, valley, shift))
    return shift, fns


@pytest.mark.parametrize("seed", range(40))
def test_random_families_match_naive(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 12)
    shift, fns = shifted_family(rng, n, rng.randint(1, 10))
    h = EnvelopeHeap(n)
    naive = NaiveEnvelope(n)
    for w, b, valley, shift in fns:
        values = lambda x, w=w, b=b: w * x + b - shift[x - 1]
        h.insert(EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values))
        naive.insert(values)
        if naive.live:
            assert h.access_min().value == naive.min_value()
        if rng.random() < 0.5 and naive.live:
            pop_both(h, naive)
    while naive.live:
        pop_both(h, naive)


@pytest.mark.parametrize("seed", range(20))
def test_shift_fast_path_matches_values_path(seed):
    """insert_line + shared shift array == insert with a values callable."""
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 10)
    shift, fns = shifted_family(rng, n, rng.randint(1, 8))
    slow = EnvelopeHeap(n)
    fast = EnvelopeHeap(n, shift=shift)
    for w, b, valley, _ in fns:
        values = lambda x, w=w, b=b: w * x + b - shift[x - 1]
        slow.insert(EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values))
        fast.insert_line(w, b, valley)
        assert fast.min_value() == slow.access_min().value
    for _ in range(n):
        assert pop_value(fast) == pop_value(slow)
        assert fast.live_count == slow.live_count
        if fast.live_count:
            assert fast.valley_live(fast.access_min().index)


def test_checked_mode_accepts_valid_sequences():
    rng = random.Random(99)
    for _ in range(10):
        n = rng.randint(1, 8)
        shift, fns = shifted_family(rng, n, 6)
        h = EnvelopeHeap(n, check=True)
        for w, b, valley, _ in fns:
            values = lambda x, w=w, b=b: w * x + b - shift[x - 1]
            h.insert(
                EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values)
            )
        for _ in range(n):
            h.delete_min()


def test_candidate_heap_stays_small():
    rng = random.Random(5)
    n = 10
    shift, fns = shifted_family(rng, n, 25)
    h = EnvelopeHeap(n)
    for w, b, valley, _ in fns:
        values = lambda x, w=w, b=b: w * x + b - shift[x - 1]
        h.insert(EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values))
        assert h.candidate_count() <= 2 * len(h)


# ---------------------------------------------------------------------------
# Hypothesis: arbitrary interleavings over random shifted families.


@st.composite
def op_sequences(draw):
    n = draw(st.integers(1, 9))
    rng = random.Random(draw(st.integers(0, 2**20)))
    shift = make_shift(rng, n)
    k = draw(st.integers(1, 8))
    lines = []
    for _ in range(k):
        w = draw(st.integers(0, 30))
        b = draw(st.integers(0, 40))
        seq = [w * x + b - shift[x - 1] for x in range(1, n + 1)]
        lines.append((w, b, seq.index(min(seq)) + 1))
    deletes = draw(st.lists(st.booleans(), min_size=k, max_size=k))
    return n, shift, lines, deletes


@settings(max_examples=150, deadline=None)
@given(op_sequences())
def test_interleaved_ops_match_naive(ops):
    n, shift, lines, deletes = ops
    h = EnvelopeHeap(n)
    naive = NaiveEnvelope(n)
    for (w, b, valley), delete_after in zip(lines, deletes):
        values = lambda x, w=w, b=b: w * x + b - shift[x - 1]
        h.insert(EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values))
        naive.insert(values)
        if naive.live:
            assert h.access_min().value == naive.min_value()
        if delete_after and naive.live:
            pop_both(h, naive)
    while naive.live:
        pop_both(h, naive)


# ---------------------------------------------------------------------------
# Harvested sequences: real per-machine heap traffic from weighted solves.


def harvest_records(seed, num_jobs, num_machines, max_weight):
    rng = random.Random(seed)
    inst = gen_random(
        rng, num_jobs, num_machines, edge_prob=0.6, max_weight=max_weight
    )
    state = EktState(inst)
    records = []
    for _ in range(inst.num_jobs):
        run = dijkstra_grouped(state, recorder=records)
        update_potentials(state, run)
        augment(state, run)
    return records


@pytest.mark.parametrize("seed", range(8))
def test_harvested_heap_traffic_matches_naive(seed):
    records = harvest_records(seed, num_jobs=7, num_machines=3, max_weight=12)
    assert records, "expected at least one materialized machine heap"
    for rec in records:
        n, pots = rec["n"], rec["pots"]
        h = EnvelopeHeap(n)
        naive = NaiveEnvelope(n)
        for event in rec["events"]:
            if event[0] == "insert":
                _, w, b, valley = event
                values = lambda x, w=w, b=b: w * x + b - pots[x - 1]
                h.insert(
                    EnvelopeFunction(slope=w, intercept=b, valley=valley, values=values)
                )
                naive.insert(values)
            elif event[0] == "pop":
                pop_both(h, naive)
            else:  # stop — phase over, heap discarded mid-state
                assert event == ("stop",)
                break
            if naive.live:
                assert h.access_min().value == naive.min_value()
