"""A kinetic min-heap over unimodal functions sharing a lower envelope of lines.

The structure answers ``min f_i(x)`` over a shrinking index set ``L`` drawn
from the integer domain ``[1, N]``, where each inserted function ``f_i`` is

* unimodal on ``[1, N]`` with a known valley index ``gamma_i``, and
* certified by a line ``g_i(x) = slope_i * x + intercept_i`` such that
  ``f_i`` attains the pointwise minimum of the family exactly where ``g_i``
  attains the lower envelope of the certificate lines.

In the intended use the functions are tentative Dijkstra distances into the
slots of one machine: ``f(x) = g(x) - potential(slot x)``, so all functions
differ from their lines by one shared per-index shift, which is what makes
the certificate trick sound.  Two further properties are assumed and *not*
checked outside of :class:`EnvelopeHeap`'s optional ``check`` mode: valleys
are genuine (unimodality) and values at indices already deleted from ``L``
are frozen (later insertions do not undercut them).

The envelope is kept as a slope-descending list of lines owning consecutive
integer intervals that partition ``[1, N]``.  A line owns index ``x`` when
its certificate is minimal there, ties going to the steeper line.  Each
owning line carries at most two candidate indices: the live index closest
to its valley from the left and from the right, clamped to its interval.
A lazy binary heap over candidate values yields ``access_min`` /
``delete_min``; generation counters invalidate stale entries.

All arithmetic is exact integer arithmetic; interval breakpoints are floor
divisions of intercept differences by slope differences.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional


class EnvelopeEmptyError(Exception):
    """access_min/delete_min on a heap with no functions or no live indices."""


@dataclass(frozen=True, slots=True)
class EnvelopeFunction:
    """One unimodal function plus its linear certificate.

    ``values(x)`` must be defined for all ``x`` in ``[1, N]``; ``valley`` is
    its (left-most) minimiser.  ``payload`` is opaque and handed back by
    ``access_min`` so callers can recover, e.g., which graph edge produced
    the function.  ``values`` may be ``None`` when the heap was built with
    a ``shift`` array, meaning ``f(x) = slope*x + intercept - shift[x-1]``.
    """

    slope: int
    intercept: int
    valley: int
    values: Optional[Callable[[int], int]]
    payload: Any = None


class AccessMin(NamedTuple):
    index: int
    value: int
    payload: Any


class _Line:
    __slots__ = (
        "uid", "slope", "intercept", "valley", "values", "payload",
        "x", "y", "p", "q", "gen", "on_envelope",
    )

    def __init__(
        self,
        uid: int,
        slope: int,
        intercept: int,
        valley: int,
        values: Optional[Callable[[int], int]],
        payload: Any,
    ) -> None:
        self.uid = uid
        self.slope = slope
        self.intercept = intercept
        self.valley = valley
        self.values = values
        self.payload = payload
        self.x = 1          # envelope interval [x, y]; empty when x > y
        self.y = 0
        self.p: Optional[int] = None   # live candidate left of/at the valley
        self.q: Optional[int] = None   # live candidate right of/at the valley
        self.gen = 0
        self.on_envelope = False

    def g(self, x: int) -> int:
        return self.slope * x + self.intercept


class EnvelopeHeap:
    """Min-heap over a family of valley functions on the domain ``[1, N]``.

    ``check=True`` additionally verifies, on every insert, that the function
    is unimodal with the declared valley and that it differs from its
    certificate line by the same per-index shift as all earlier functions.
    That is quadratic work overall and meant for tests only.
    """

    def __init__(
        self,
        domain_size: int,
        check: bool = False,
        shift: Optional[list[int]] = None,
    ):
        if domain_size < 1:
            raise ValueError("domain must contain at least index 1")
        if shift is not None and len(shift) < domain_size:
            raise ValueError("shift array shorter than the domain")
        self.n = domain_size
        self.live_count = domain_size
        self._live = [True] * (domain_size + 2)
        # Union-find skip pointers: _left[i] / _right[i] chase to the nearest
        # live index <= i / >= i (0 and n+1 are dead sentinels).
        self._left = list(range(domain_size + 2))
        self._right = list(range(domain_size + 2))
        self._live[0] = self._live[domain_size + 1] = False
        self._env: list[_Line] = []        # envelope lines, slope descending
        self._env_keys: list[int] = []     # negated slopes, for bisect
        self._lines: list[_Line] = []      # every inserted line, by uid
        self._heap: list[tuple[int, int, int, int, int]] = []
        self._check = check
        # The shared per-index amount by which every function sits below its
        # certificate line; functions inserted without a ``values`` callable
        # are evaluated as g(x) - shift[x-1].
        self._shift_arr = shift
        self._shift: dict[int, int] = {}   # per-index f - g, check mode only

    # ------------------------------------------------------------------
    # live-index bookkeeping

    def _find_left(self, i: int) -> int:
        """Largest live index <= i, or 0 if none."""
        left = self._left
        while left[i] != i:
            left[i] = i = left[left[i]]
        return i

    def _find_right(self, i: int) -> int:
        """Smallest live index >= i, or n+1 if none."""
        right = self._right
        while right[i] != i:
            right[i] = i = right[right[i]]
        return i

    def _delete_index(self, x: int) -> None:
        self._live[x] = False
        self._left[x] = x - 1
        self._right[x] = x + 1
        self.live_count -= 1

    def is_live(self, x: int) -> bool:
        return 1 <= x <= self.n and self._live[x]

    # ------------------------------------------------------------------
    # candidate pointers and the lazy heap

    def _value(self, line: _Line, x: int) -> int:
        if line.values is not None:
            return line.values(x)
        shift = self._shift_arr
        base = line.slope * x + line.intercept
        return base - shift[x - 1] if shift is not None else base

    def _refresh(self, line: _Line) -> None:
        """Recompute a line's candidates from its interval and push them."""
        line.gen += 1
        if not line.on_envelope or line.x > line.y:
            line.p = line.q = None
            return
        p = self._find_left(min(line.valley, line.y))
        p = line.p = p if p >= line.x else None
        q = self._find_right(max(line.valley, line.x))
        q = line.q = q if q <= line.y else None
        heap = self._heap
        values, shift = line.values, self._shift_arr
        if p is not None:
            if values is not None:
                val = values(p)
            else:
                val = line.slope * p + line.intercept
                if shift is not None:
                    val -= shift[p - 1]
            heapq.heappush(heap, (val, line.uid, 0, line.gen, p))
        if q is not None and q != p:
            if values is not None:
                val = values(q)
            else:
                val = line.slope * q + line.intercept
                if shift is not None:
                    val -= shift[q - 1]
            heapq.heappush(heap, (val, line.uid, 1, line.gen, q))

    def _drop_from_envelope(self, line: _Line) -> None:
        line.on_envelope = False
        line.x, line.y = 1, 0
        line.gen += 1
        line.p = line.q = None

    def _top(self) -> tuple[int, _Line, int]:
        """(heap entry, owning line, index) of the current minimum."""
        heap = self._heap
        while heap:
            value, uid, side, gen, idx = heap[0]
            line = self._lines[uid]
            if gen != line.gen or (line.p if side == 0 else line.q) != idx:
                heapq.heappop(heap)
                continue
            return value, line, idx
        raise EnvelopeEmptyError("no live index is covered by any function")

    # ------------------------------------------------------------------
    # public operations

    def __len__(self) -> int:
        return len(self._lines)

    def insert(self, fn: EnvelopeFunction) -> int:
        """Add a function; returns its id.  O(log n) plus evictions."""
        if not 1 <= fn.valley <= self.n:
            raise ValueError(f"valley {fn.valley} outside domain [1, {self.n}]")
        if fn.values is None and self._shift_arr is None:
            raise ValueError("function without values needs a heap-level shift")
        if self._check:
            self._check_function(fn)
        return self.insert_line(
            fn.slope, fn.intercept, fn.valley, fn.values, fn.payload
        )

    def insert_line(
        self,
        slope: int,
        intercept: int,
        valley: int,
        values: Optional[Callable[[int], int]] = None,
        payload: Any = None,
    ) -> int:
        """Trusted fast path of :meth:`insert`: no wrapper object, no
        validation.  The caller vouches that ``valley`` is in the domain
        and, when ``values`` is omitted, that the heap carries a shift."""
        line = _Line(len(self._lines), slope, intercept, valley, values, payload)
        self._lines.append(line)

        env, keys = self._env, self._env_keys
        pos = bisect_left(keys, -line.slope)

        # A same-slope line survives only with the smaller intercept (equal
        # lines keep the earlier one); the loser never reaches the envelope.
        if pos < len(env) and env[pos].slope == line.slope:
            old = env[pos]
            if line.intercept >= old.intercept:
                return line.uid
            self._drop_from_envelope(old)
            env.pop(pos)
            keys.pop(pos)

        # Walk outward evicting neighbours whose interval the new line takes
        # over entirely.  Breakpoints put tie indices on the steeper line.
        while pos > 0:
            left = env[pos - 1]
            b = (line.intercept - left.intercept) // (left.slope - line.slope)
            if b < left.x:
                self._drop_from_envelope(left)
                env.pop(pos - 1)
                keys.pop(pos - 1)
                pos -= 1
            else:
                break
        lo = 1 if pos == 0 else b + 1

        while pos < len(env):
            right = env[pos]
            c = (right.intercept - line.intercept) // (line.slope - right.slope)
            if c >= right.y:
                self._drop_from_envelope(right)
                env.pop(pos)
                keys.pop(pos)
            else:
                break
        hi = self.n if pos == len(env) else c

        if lo > hi:
            # Dominated everywhere: stays off the envelope, contributes no
            # candidates.  (Cannot co-occur with evictions above.)
            return line.uid

        if pos > 0 and env[pos - 1].y != lo - 1:
            env[pos - 1].y = lo - 1
            self._refresh(env[pos - 1])
        if pos < len(env) and env[pos].x != hi + 1:
            env[pos].x = hi + 1
            self._refresh(env[pos])

        line.x, line.y = lo, hi
        line.on_envelope = True
        env.insert(pos, line)
        keys.insert(pos, -line.slope)
        self._refresh(line)
        return line.uid

    def access_min(self) -> AccessMin:
        """Current minimum of all functions over the live indices.  O(1) am."""
        if not self._lines:
            raise EnvelopeEmptyError("no functions inserted")
        if self.live_count == 0:
            raise EnvelopeEmptyError("all indices deleted")
        value, line, idx = self._top()
        return AccessMin(idx, value, line.payload)

    def min_value(self) -> int:
        """Just the value of :meth:`access_min`, without the wrapper."""
        return self._top()[0]

    def valley_live(self, x: int) -> bool:
        """True while index ``x`` has not been deleted (trusted, unchecked)."""
        return self._live[x]

    def delete_min(self) -> int:
        """Remove the minimising index from the live set and return it."""
        if not self._lines:
            raise EnvelopeEmptyError("no functions inserted")
        if self.live_count == 0:
            raise EnvelopeEmptyError("all indices deleted")
        _value, line, idx = self._top()
        heapq.heappop(self._heap)
        self._delete_index(idx)
        self._refresh(line)
        return idx

    def candidate_count(self) -> int:
        """Number of valid heap candidates; at most two per function."""
        total = 0
        for line in self._env:
            total += (line.p is not None) + (line.q is not None and line.q != line.p)
        return total

    # ------------------------------------------------------------------
    # optional validation (tests)

    def _check_function(self, fn: EnvelopeFunction) -> None:
        prev = None
        for x in range(1, self.n + 1):
            if fn.values is not None:
                v = fn.values(x)
            else:
                v = fn.slope * x + fn.intercept - self._shift_arr[x - 1]
            shift = v - (fn.slope * x + fn.intercept)
            if x in self._shift:
                if self._shift[x] != shift:
                    raise ValueError(
                        f"function breaks the shared line/function shift at {x}"
                    )
            else:
                self._shift[x] = shift
            if prev is not None:
                if x <= fn.valley and v > prev:
                    raise ValueError(f"not non-increasing before valley at {x}")
                if x > fn.valley and v < prev:
                    raise ValueError(f"not non-decreasing after valley at {x}")
            prev = v
