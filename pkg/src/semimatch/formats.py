"""Plain-text instance and solution files.

Instances are DIMACS-flavored line records.  A bipartite scheduling
instance::

    c any number of comment lines, anywhere
    p semimatch <jobs> <machines> <edges>
    e <job> <machine> <weight>

and a general graph for the cover problem::

    p cover <vertices> <edges>
    e <u> <v>

Ids are 1-based on disk, 0-based in memory.  ``semimatch`` edges always
carry a weight (write 1 for unit instances); ``cover`` edges never do.
Solutions are ``a`` records — ``a <job> <machine>`` for assignments,
``a <u> <v>`` for cover edges — followed by one ``cost <value>``
trailer.

Malformed text never escapes as a stray exception: every syntactic
failure is a :class:`ParseError` subclass carrying the offending line
number.  (A well-formed file describing an unsolvable instance, e.g. a
job with no edges, still raises the semantic
:class:`~semimatch.core.InfeasibleInstanceError` from the instance
constructor — that is a property of the instance, not of the text.)

Emission is canonical — edges sorted, no comments — so
``emit(parse(emit(x))) == emit(x)`` byte for byte.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

from .core import MAX_WEIGHT, BipartiteInstance, SemiMatchError
from .cover import GeneralGraph

__all__ = [
    "ParseError",
    "MalformedHeaderError",
    "CountMismatchError",
    "IdOutOfRangeError",
    "BadWeightError",
    "parse_instance",
    "emit_instance",
    "parse_assignment",
    "emit_assignment",
]


class ParseError(SemiMatchError):
    """Syntactically bad instance or solution text."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedHeaderError(ParseError):
    """Missing, unparsable, or wrong-kind ``p`` line."""


class CountMismatchError(ParseError):
    """Body has more or fewer edge records than the header declared."""


class IdOutOfRangeError(ParseError):
    """Endpoint id outside the range announced by the header."""


class BadWeightError(ParseError):
    """Edge weight missing, non-integer, negative, or over MAX_WEIGHT."""


def _records(text: str):
    """Yield ``(line_no, tokens)`` for every significant line."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        yield line_no, tokens


def _int_field(line_no: int, token: str, what: str, err=ParseError) -> int:
    try:
        return int(token)
    except ValueError:
        raise err(line_no, f"{what} {token!r} is not an integer") from None


def parse_instance(text: str) -> Union[BipartiteInstance, GeneralGraph]:
    """Parse instance text into the matching in-memory type.

    The header's kind decides the result: ``p semimatch`` gives a
    :class:`BipartiteInstance`, ``p cover`` a :class:`GeneralGraph`.
    """
    records = _records(text)
    try:
        line_no, tokens = next(records)
    except StopIteration:
        raise MalformedHeaderError(0, "empty input, expected a 'p' header") from None
    if tokens[0] != "p":
        raise MalformedHeaderError(line_no, f"expected 'p' header, got {tokens[0]!r}")
    kind = tokens[1] if len(tokens) > 1 else ""
    if kind == "semimatch":
        if len(tokens) != 5:
            raise MalformedHeaderError(
                line_no, "semimatch header needs 'p semimatch <jobs> <machines> <edges>'"
            )
        counts = [
            _int_field(line_no, t, "header count", MalformedHeaderError)
            for t in tokens[2:]
        ]
        num_jobs, num_machines, num_edges = counts
    elif kind == "cover":
        if len(tokens) != 4:
            raise MalformedHeaderError(
                line_no, "cover header needs 'p cover <vertices> <edges>'"
            )
        num_vertices, num_edges = (
            _int_field(line_no, t, "header count", MalformedHeaderError)
            for t in tokens[2:]
        )
    else:
        raise MalformedHeaderError(
            line_no, f"unknown problem kind {kind!r} (expected semimatch or cover)"
        )
    header_line = line_no
    if any(c < 0 for c in (counts if kind == "semimatch" else [num_vertices, num_edges])):
        raise MalformedHeaderError(header_line, "header counts must be non-negative")

    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, int]] = set()
    for line_no, tokens in records:
        if tokens[0] != "e":
            raise ParseError(line_no, f"unknown record {tokens[0]!r}, expected 'e'")
        if len(edges) == num_edges:
            raise CountMismatchError(
                line_no, f"header declared {num_edges} edges but the body has more"
            )
        if kind == "semimatch":
            if len(tokens) != 4:
                raise BadWeightError(
                    line_no, "semimatch edge needs 'e <job> <machine> <weight>'"
                )
            job = _int_field(line_no, tokens[1], "job id")
            machine = _int_field(line_no, tokens[2], "machine id")
            weight = _int_field(line_no, tokens[3], "weight", BadWeightError)
            if not 1 <= job <= num_jobs:
                raise IdOutOfRangeError(
                    line_no, f"job id {job} out of range [1, {num_jobs}]"
                )
            if not 1 <= machine <= num_machines:
                raise IdOutOfRangeError(
                    line_no, f"machine id {machine} out of range [1, {num_machines}]"
                )
            if weight < 0 or weight > MAX_WEIGHT:
                raise BadWeightError(
                    line_no, f"weight {weight} outside [0, {MAX_WEIGHT}]"
                )
            key = (job, machine)
            if key in seen:
                raise ParseError(line_no, f"duplicate edge ({job}, {machine})")
            seen.add(key)
            edges.append((job - 1, machine - 1, weight))
        else:
            if len(tokens) != 3:
                raise ParseError(line_no, "cover edge needs 'e <u> <v>' (no weight)")
            a = _int_field(line_no, tokens[1], "vertex id")
            b = _int_field(line_no, tokens[2], "vertex id")
            for vid in (a, b):
                if not 1 <= vid <= num_vertices:
                    raise IdOutOfRangeError(
                        line_no, f"vertex id {vid} out of range [1, {num_vertices}]"
                    )
            if a == b:
                raise ParseError(line_no, f"self-loop at vertex {a}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ParseError(line_no, f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            edges.append((a - 1, b - 1))

    if len(edges) != num_edges:
        raise CountMismatchError(
            header_line,
            f"header declared {num_edges} edges but the body has {len(edges)}",
        )
    if kind == "semimatch":
        return BipartiteInstance(num_jobs, num_machines, edges)
    return GeneralGraph(num_vertices, edges)


def emit_instance(
    instance: Union[BipartiteInstance, GeneralGraph],
    *,
    comments: Sequence[str] = (),
) -> str:
    """Render an instance in the canonical on-disk form (sorted edges)."""
    out = [f"c {c}" for c in comments]
    if isinstance(instance, BipartiteInstance):
        triples = sorted(
            (u, v, w)
            for u, machines in enumerate(instance.job_adj)
            for v, w in machines
        )
        out.append(
            f"p semimatch {instance.num_jobs} {instance.num_machines} {len(triples)}"
        )
        out.extend(f"e {u + 1} {v + 1} {w}" for u, v, w in triples)
    else:
        out.append(f"p cover {instance.num_vertices} {instance.num_edges}")
        out.extend(f"e {a + 1} {b + 1}" for a, b in sorted(instance.edges))
    return "\n".join(out) + "\n"


def emit_assignment(pairs: Iterable[tuple[int, int]], cost: int) -> str:
    """Render a solution: one ``a`` record per pair, then the cost trailer."""
    out = [f"a {x + 1} {y + 1}" for x, y in pairs]
    out.append(f"cost {cost}")
    return "\n".join(out) + "\n"


def parse_assignment(text: str) -> tuple[tuple[tuple[int, int], ...], int]:
    """Parse a solution file into 0-based pairs and the declared cost.

    Purely syntactic: pair meaning (job/machine vs. cover edge) and
    consistency with an instance are the caller's concern.
    """
    pairs: list[tuple[int, int]] = []
    cost: int | None = None
    for line_no, tokens in _records(text):
        if tokens[0] == "cost":
            if cost is not None:
                raise ParseError(line_no, "second 'cost' trailer")
            if len(tokens) != 2:
                raise ParseError(line_no, "cost trailer needs 'cost <value>'")
            cost = _int_field(line_no, tokens[1], "cost")
        elif tokens[0] == "a":
            if cost is not None:
                raise ParseError(line_no, "'a' record after the cost trailer")
            if len(tokens) != 3:
                raise ParseError(line_no, "assignment record needs 'a <x> <y>'")
            x = _int_field(line_no, tokens[1], "id")
            y = _int_field(line_no, tokens[2], "id")
            if x < 1 or y < 1:
                raise IdOutOfRangeError(line_no, f"ids must be 1-based, got {x}, {y}")
            pairs.append((x - 1, y - 1))
        else:
            raise ParseError(line_no, f"unknown record {tokens[0]!r}")
    if cost is None:
        raise ParseError(0, "missing 'cost' trailer")
    return tuple(pairs), cost
