"""Update-stream file format and workload generators.

Trace format::

    dvc-trace v1
    n <N> eps <p>/<q>
    # key=value        (optional metadata, written right after the header)
    + <u> <v>
    - <u> <v>

Lines starting with ``#`` are comments.  Comments of the form
``# key=value`` placed before the first event are kept as metadata, so a
generated trace records its model and seed and still round-trips
byte-for-byte.

All generators draw from :class:`random.Random` (MT19937) seeded with an
integer; the golden files under ``tests/golden`` pin their exact output.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .numerics import parse_eps

MAGIC = "dvc-trace v1"
INSERT, DELETE = "+", "-"


class TraceParseError(ValueError):
    """Malformed trace text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ReplayError(TraceParseError):
    """An event that cannot be replayed: insert of a present edge or delete of an absent one."""


@dataclass(frozen=True)
class UpdateEvent:
    op: str  # "+" or "-"
    u: int
    v: int

    @property
    def is_insert(self) -> bool:
        return self.op == INSERT

    def __str__(self):
        return f"{self.op} {self.u} {self.v}"


@dataclass
class Trace:
    n: int
    eps: Fraction
    events: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.events)

    def __iter__(self) -> Iterator[UpdateEvent]:
        return iter(self.events)

    def replay_errors(self) -> list:
        """``(index, event, reason)`` for each event that breaks replay validity."""
        present, bad = set(), []
        for i, ev in enumerate(self.events):
            key = (min(ev.u, ev.v), max(ev.u, ev.v))
            if ev.is_insert:
                if key in present:
                    bad.append((i, ev, "insert of a present edge"))
                present.add(key)
            else:
                if key not in present:
                    bad.append((i, ev, "delete of an absent edge"))
                present.discard(key)
        return bad


def serialize_trace(trace: Trace) -> str:
    eps = parse_eps(trace.eps)
    lines = [MAGIC, f"n {trace.n} eps {eps.numerator}/{eps.denominator}"]
    lines += [f"# {k}={v}" for k, v in trace.meta.items()]
    lines += [str(ev) for ev in trace.events]
    return "\n".join(lines) + "\n"


def parse_trace(text: str, *, strict: bool = False) -> Trace:
    """Parse trace text.  With ``strict`` the event sequence must also be replayable."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise TraceParseError(1, f"expected {MAGIC!r}")
    if len(lines) < 2:
        raise TraceParseError(2, "missing 'n <N> eps <p>/<q>' line")
    parts = lines[1].split()
    if len(parts) != 4 or parts[0] != "n" or parts[2] != "eps":
        raise TraceParseError(2, f"expected 'n <N> eps <p>/<q>', got {lines[1]!r}")
    try:
        n = int(parts[1])
        eps = parse_eps(parts[3])
    except (ValueError, ZeroDivisionError) as exc:
        raise TraceParseError(2, str(exc)) from exc
    if n < 1:
        raise TraceParseError(2, "n must be positive")

    trace = Trace(n, eps)
    present = set()
    for lineno, raw in enumerate(lines[2:], start=3):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if not trace.events and "=" in body and " " not in body.split("=", 1)[0]:
                key, value = body.split("=", 1)
                trace.meta[key] = value
            continue
        fields = line.split()
        if len(fields) != 3 or fields[0] not in (INSERT, DELETE):
            raise TraceParseError(lineno, f"malformed event {raw!r}")
        try:
            u, v = int(fields[1]), int(fields[2])
        except ValueError:
            raise TraceParseError(lineno, f"non-integer endpoint in {raw!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise TraceParseError(lineno, f"endpoint out of range [0, {n}) in {raw!r}")
        if u == v:
            raise TraceParseError(lineno, f"self-loop {raw!r}")
        ev = UpdateEvent(fields[0], u, v)
        if strict:
            key = (min(u, v), max(u, v))
            if ev.is_insert:
                if key in present:
                    raise ReplayError(lineno, f"insert of present edge {key}")
                present.add(key)
            else:
                if key not in present:
                    raise ReplayError(lineno, f"delete of absent edge {key}")
                present.discard(key)
        trace.events.append(ev)
    return trace


def read_trace(path, *, strict: bool = False) -> Trace:
    with open(path, encoding="utf-8") as fh:
        return parse_trace(fh.read(), strict=strict)


def write_trace(trace: Trace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_trace(trace))


# -- generators --------------------------------------------------------------

class _EdgeSet:
    """Set of edges with O(1) insert, remove and uniform sampling."""

    def __init__(self):
        self.items = []
        self.index = {}

    def __len__(self):
        return len(self.items)

    def __contains__(self, e):
        return e in self.index

    def add(self, e) -> None:
        self.index[e] = len(self.items)
        self.items.append(e)

    def remove(self, e) -> None:
        i = self.index.pop(e)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.index[last] = i

    def choice(self, rng: random.Random):
        return self.items[rng.randrange(len(self.items))]


def _random_absent_pair(n: int, edges: _EdgeSet, rng: random.Random):
    """Uniform absent pair; rejection sampling while the graph is sparse."""
    total = n * (n - 1) // 2
    if len(edges) >= total:
        return None
    if len(edges) <= total // 2:
        while True:
            u, v = rng.randrange(n), rng.randrange(n - 1)
            if v >= u:
                v += 1
            e = (min(u, v), max(u, v))
            if e not in edges:
                return e
    absent = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    return absent[rng.randrange(len(absent))]


def gen_random(n: int, tau: int, p_delete: float, seed: int, eps="1/10") -> Trace:
    """Each step deletes a uniform present edge with probability ``p_delete``
    (when one exists), otherwise inserts a uniform absent pair."""
    if not 0 <= p_delete <= 1:
        raise ValueError("p_delete must lie in [0, 1]")
    if n < 2 and tau > 0:
        raise ValueError("need n >= 2 to generate updates")
    rng = random.Random(seed)
    edges = _EdgeSet()
    events = []
    for _ in range(tau):
        delete = len(edges) > 0 and rng.random() < p_delete
        if not delete:
            e = _random_absent_pair(n, edges, rng)
            delete = e is None  # complete graph: must delete
        if delete:
            e = edges.choice(rng)
            edges.remove(e)
            events.append(UpdateEvent(DELETE, *e))
        else:
            edges.add(e)
            events.append(UpdateEvent(INSERT, *e))
    meta = {"model": "random", "seed": seed, "tau": tau, "p_delete": p_delete}
    return Trace(n, parse_eps(eps), events, meta)


def gen_sliding_window(n: int, tau: int, window: int, seed: int, eps="1/10") -> Trace:
    """Keep the ``window`` most recently inserted edges alive.

    Each step inserts a uniform absent pair, except that once ``window``
    edges are alive the oldest is deleted first (one event per step), so
    every edge lives through ``window`` later insertions.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    rng = random.Random(seed)
    edges = _EdgeSet()
    alive = deque()
    events = []
    for _ in range(tau):
        e = None
        if len(alive) < window:
            e = _random_absent_pair(n, edges, rng)
        if e is None:  # window full, or no absent pair left
            e = alive.popleft()
            edges.remove(e)
            events.append(UpdateEvent(DELETE, *e))
            continue
        edges.add(e)
        alive.append(e)
        events.append(UpdateEvent(INSERT, *e))
    meta = {"model": "sliding-window", "seed": seed, "tau": tau, "window": window}
    return Trace(n, parse_eps(eps), events, meta)


def gen_star_churn(n: int, rounds: int, eps="1/10") -> Trace:
    """Grow the star at node 0 to full degree, then shrink it in reverse, ``rounds`` times."""
    if n < 3 or rounds < 1:
        raise ValueError("need n >= 3 and rounds >= 1")
    events = []
    for _ in range(rounds):
        events += [UpdateEvent(INSERT, 0, k) for k in range(1, n)]
        events += [UpdateEvent(DELETE, 0, k) for k in range(n - 1, 0, -1)]
    return Trace(n, parse_eps(eps), events, {"model": "star-churn", "rounds": rounds})


def replay(graph, events: Iterable[UpdateEvent]):
    """Apply events to a graph, yielding each :class:`UpdateReport`."""
    for ev in events:
        if ev.is_insert:
            yield graph.insert_edge(ev.u, ev.v)
        else:
            yield graph.delete_edge(ev.u, ev.v)
