"""Leveled dynamic graph maintaining a (2+eps)-approximate vertex cover.

Every node sits at a level in ``[0, L]``; an edge weighs ``(1+eps)**-k``
where ``k`` is the larger endpoint level.  After each edge update the
FIX-DIRTY loop moves active nodes one level at a time until every node is
passive, which keeps every node weight below ``1 + eps`` and every node
above level 0 at weight ``>= 1 - eps``.

Per node the engine keeps the cached weight and the neighborhood buckets
``lower`` (neighbors at level <= own level) and ``upper[t]`` (neighbors at
level ``t`` above its own), as intrusive doubly linked lists.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Optional

from .dlist import DList, Link
from .numerics import NumericTier, build_weight_table, level_count, parse_eps

UP, DOWN = "up", "down"


class GraphError(ValueError):
    """Base class for rejected updates."""


class NodeRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class MissingEdgeError(GraphError):
    pass


class MoveBudgetExceeded(RuntimeError):
    """FIX-DIRTY made more moves than its budget allows in one call."""


@dataclass(frozen=True)
class GraphConfig:
    n: int
    eps: Fraction
    L: int
    tier: NumericTier = field(repr=False)

    @classmethod
    def create(cls, n: int, eps, exact: bool = True) -> "GraphConfig":
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"n must be a positive integer, got {n!r}")
        eps = parse_eps(eps)
        L = level_count(n, eps)
        tier = NumericTier.create(eps, L, exact=exact)
        exact_tail = Fraction(1) / (1 + eps) ** L
        assert exact_tail <= (1 + eps) / n
        return cls(n, eps, L, tier)

    @cached_property
    def weight_table(self) -> list:
        """``(1+eps)**-k`` for k in 0..L, as Fractions (exact) or floats."""
        return build_weight_table(self.eps, self.L, exact=self.tier.exact)


class NodeState:
    __slots__ = ("level", "weight", "lower", "upper", "queued")

    def __init__(self, zero):
        self.level = 0
        self.weight = zero
        self.lower = DList()   # edges to neighbors at level <= self.level
        self.upper = {}        # t -> DList of edges to neighbors at level t > self.level
        self.queued = False

    @property
    def degree(self) -> int:
        return self.lower.size + sum(d.size for d in self.upper.values())

    def links(self):
        yield from self.lower
        for bucket in self.upper.values():
            yield from bucket


class EdgeRecord:
    __slots__ = ("u", "v", "pos_in_u", "pos_in_v")

    def __init__(self, u: int, v: int):
        self.u, self.v = u, v
        self.pos_in_u = Link(v, self)
        self.pos_in_v = Link(u, self)
        self.pos_in_u.twin = self.pos_in_v
        self.pos_in_v.twin = self.pos_in_u


@dataclass(frozen=True)
class Move:
    node: int
    from_level: int
    to_level: int
    work: int
    touches: int

    @property
    def direction(self) -> str:
        return UP if self.to_level > self.from_level else DOWN


@dataclass(frozen=True)
class Event:
    """One atomic step as seen by an observer.

    ``kind`` is ``"insert"``, ``"delete"``, ``"up"`` or ``"down"``.  For edge
    updates ``nodes`` is the endpoint pair; for jumps it is ``(mover,)`` and
    ``level`` is the mover's level before the jump.
    """

    kind: str
    nodes: tuple
    level: Optional[int] = None


@dataclass
class UpdateReport:
    op: str
    u: int
    v: int
    moves: list = field(default_factory=list)

    @property
    def work(self) -> int:
        return sum(m.work for m in self.moves)

    @property
    def touches(self) -> int:
        return sum(m.touches for m in self.moves)

    @property
    def up_moves(self) -> int:
        return sum(1 for m in self.moves if m.to_level > m.from_level)

    @property
    def down_moves(self) -> int:
        return sum(1 for m in self.moves if m.to_level < m.from_level)


class DynamicGraph:
    """Fully dynamic graph on nodes ``0..n-1`` with a maintained cover.

    ``exact=True`` keeps every weight as an exact integer numerator over a
    fixed denominator (tests, accounting);
    ``exact=False`` is the float performance path.  ``order`` picks which
    active node FIX-DIRTY handles next: ``"fifo"`` or ``"lifo"``.
    ``observer`` receives ``before(graph, event)`` and
    ``after(graph, event, move)`` around every edge update and every jump.
    """

    def __init__(self, n: int, eps, *, exact: bool = True, order: str = "fifo",
                 budget: Optional[int] = None, recompute_every: Optional[int] = None,
                 observer=None):
        if order not in ("fifo", "lifo"):
            raise ValueError("order must be 'fifo' or 'lifo'")
        self.config = GraphConfig.create(n, eps, exact=exact)
        self.tier = self.config.tier
        self.n = n
        self.L = self.config.L
        self.order = order
        self.budget = budget
        self.recompute_every = recompute_every
        self.observer = observer
        self.nodes = [NodeState(self.tier.zero) for _ in range(n)]
        self.edges: dict = {}
        self._queue: deque = deque()
        self._cover_count = 0
        self._weight_sum = self.tier.zero
        self._updates = 0
        self._fault = None  # test hook: "skip-notify" drops one neighbor update per up-move

    @property
    def exact(self) -> bool:
        return self.tier.exact

    @property
    def eps(self) -> Fraction:
        return self.config.eps

    # -- queries -----------------------------------------------------------

    def level(self, v: int) -> int:
        return self.nodes[v].level

    def _real(self, raw):
        return self.tier.to_fraction(raw) if self.tier.exact else raw

    def weight(self, v: int):
        """Cached ``W_v``: a Fraction in exact mode, a float otherwise."""
        return self._real(self.nodes[v].weight)

    def neighbors(self, v: int) -> list:
        return [link.nbr for link in self.nodes[v].links()]

    def degree(self, v: int) -> int:
        return self.nodes[v].degree

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def edge_level(self, u: int, v: int) -> int:
        return max(self.nodes[u].level, self.nodes[v].level)

    def edge_weight(self, u: int, v: int):
        return self._real(self.tier.table[self.edge_level(u, v)])

    def weight_at_level(self, v: int, i: int):
        """Weight ``v`` would have at level ``i`` with all other levels fixed."""
        if not 0 <= i <= self.L:
            raise ValueError(f"level {i} outside [0, {self.L}]")
        node = self.nodes[v]
        table = self.tier.table
        if i == node.level:
            return self._real(node.weight)
        if i == node.level + 1:
            return self._real(node.weight - node.lower.size * self.tier.step[node.level])
        nodes = self.nodes
        total = self.tier.zero
        for link in node.links():
            total += table[max(nodes[link.nbr].level, i)]
        return self._real(total)

    def classify(self, v: int) -> tuple:
        """Return ``(state, active)`` with state ``"up"`` or ``"down"``."""
        node = self.nodes[v]
        tier = self.tier
        if node.weight >= tier.one:
            assert node.level < self.L, f"up-dirty node {v} at top level {self.L}"
            return UP, node.weight - node.lower.size * tier.step[node.level] >= tier.one
        return DOWN, node.level > 0 and node.weight < tier.lower

    def is_active(self, v: int) -> bool:
        return self.classify(v)[1]

    def cover(self) -> set:
        lower = self.tier.lower
        return {v for v, node in enumerate(self.nodes) if node.weight >= lower}

    def cover_size(self) -> int:
        return self._cover_count

    def fractional_matching(self) -> dict:
        """Edge weights scaled by ``1/(1+eps)``; every node total stays below 1."""
        table = self.config.weight_table
        scale = 1 / (1 + self.eps)
        if not self.exact:
            scale = float(scale)
        nodes = self.nodes
        return {key: scale * table[max(nodes[key[0]].level, nodes[key[1]].level)]
                for key in self.edges}

    def matching_size(self):
        """Total fractional matching weight, from the maintained weight sum."""
        scale = 1 / (1 + self.eps)
        if self.exact:
            return self.tier.to_fraction(self._weight_sum) * scale / 2
        return self._weight_sum * float(scale) / 2

    def levels(self) -> list:
        return [node.level for node in self.nodes]

    # -- updates -----------------------------------------------------------

    def _check_pair(self, u: int, v: int) -> tuple:
        for x in (u, v):
            if not isinstance(x, int) or not 0 <= x < self.n:
                raise NodeRangeError(f"node id {x!r} outside [0, {self.n})")
        if u == v:
            raise SelfLoopError(f"self-loop at node {u}")
        return (u, v) if u < v else (v, u)

    def insert_edge(self, u: int, v: int) -> UpdateReport:
        key = self._check_pair(u, v)
        if key in self.edges:
            raise DuplicateEdgeError(f"edge {key} already present")
        event = Event("insert", key) if self.observer is not None else None
        if event:
            self.observer.before(self, event)
        nu, nv = self.nodes[key[0]], self.nodes[key[1]]
        edge = EdgeRecord(*key)
        self.edges[key] = edge
        self._file(nu, edge.pos_in_u, nv.level)
        self._file(nv, edge.pos_in_v, nu.level)
        w = self.tier.table[max(nu.level, nv.level)]
        self._shift(nu, w)
        self._shift(nv, w)
        self._enqueue(key[0])
        self._enqueue(key[1])
        if event:
            self.observer.after(self, event, None)
        return self._finish(UpdateReport("insert", u, v))

    def delete_edge(self, u: int, v: int) -> UpdateReport:
        key = self._check_pair(u, v)
        edge = self.edges.get(key)
        if edge is None:
            raise MissingEdgeError(f"edge {key} not present")
        event = Event("delete", key) if self.observer is not None else None
        if event:
            self.observer.before(self, event)
        nu, nv = self.nodes[key[0]], self.nodes[key[1]]
        self._container(nu, nv.level).remove(edge.pos_in_u)
        self._container(nv, nu.level).remove(edge.pos_in_v)
        self._prune(nu, nv.level)
        self._prune(nv, nu.level)
        del self.edges[key]
        w = self.tier.table[max(nu.level, nv.level)]
        self._shift(nu, -w)
        self._shift(nv, -w)
        self._enqueue(key[0])
        self._enqueue(key[1])
        if event:
            self.observer.after(self, event, None)
        return self._finish(UpdateReport("delete", u, v))

    def _finish(self, report: UpdateReport) -> UpdateReport:
        report.moves = self.fix_dirty()
        self._updates += 1
        if self.recompute_every and self._updates % self.recompute_every == 0:
            self.resync()
            report.moves.extend(self.fix_dirty())
        return report

    # -- FIX-DIRTY ---------------------------------------------------------

    def _enqueue(self, v: int) -> None:
        node = self.nodes[v]
        if not node.queued:
            node.queued = True
            self._queue.append(v)

    def fix_dirty(self) -> list:
        """Move active nodes one level at a time until none is active."""
        queue = self._queue
        pop = queue.popleft if self.order == "fifo" else queue.pop
        nodes, tier = self.nodes, self.tier
        one, lower_band, step = tier.one, tier.lower, tier.step
        budget = self.budget if self.budget is not None else self._default_budget()
        log = []
        while queue:
            x = pop()
            node = nodes[x]
            node.queued = False
            if node.weight >= one:
                assert node.level < self.L, f"up-dirty node {x} at top level {self.L}"
                if node.weight - node.lower.size * step[node.level] < one:
                    continue
                move = self._jump(x, self._move_up)
            elif node.level > 0 and node.weight < lower_band:
                move = self._jump(x, self._move_down)
            else:
                continue
            log.append(move)
            self._enqueue(x)
            if len(log) > budget:
                raise MoveBudgetExceeded(
                    f"fix_dirty exceeded {budget} moves; last move {move}")
        return log

    def _default_budget(self) -> int:
        touched = sum(self.nodes[v].degree for v in self._queue) + 1
        return max(10 ** 6, 64 * (self.L + 1) * touched)

    def _jump(self, x: int, mover) -> Move:
        if self.observer is None:
            return mover(x)
        kind = UP if mover == self._move_up else DOWN
        event = Event(kind, (x,), self.nodes[x].level)
        self.observer.before(self, event)
        move = mover(x)
        self.observer.after(self, event, move)
        return move

    def _move_up(self, x: int) -> Move:
        """Raise ``x`` from level k to k+1; work is |N_x(0, k)|."""
        node = self.nodes[x]
        k = node.level
        nodes, step = self.nodes, self.tier.step
        low = node.lower
        count = low.size
        skip = self._fault == "skip-notify"
        for link in low:
            v = link.nbr
            nv = nodes[v]
            if skip:
                skip = False
                continue
            twin = link.twin
            if nv.level < k:
                bucket = nv.upper[k]
                bucket.remove(twin)
                if not bucket.size:
                    del nv.upper[k]
            else:  # nv.level == k: x was in v's lower list
                nv.lower.remove(twin)
            target = nv.upper.get(k + 1)
            if target is None:
                target = nv.upper[k + 1] = DList()
            target.append(twin)
            self._shift(nv, -step[k])
            self._enqueue(v)
        if count:
            self._shift(node, -count * step[k])
        above = node.upper.pop(k + 1, None)
        if above is not None:
            low.splice(above)
        node.level = k + 1
        return Move(x, k, k + 1, count, count)

    def _move_down(self, x: int) -> Move:
        """Lower ``x`` from level k to k-1; work is |N_x(0, k-1)|."""
        node = self.nodes[x]
        k = node.level
        nodes, step = self.nodes, self.tier.step
        low = node.lower
        scanned = low.size
        assert scanned * self.tier.table[k] < self.tier.one
        gain = step[k - 1]
        refiled = None
        for link in low:
            v = link.nbr
            nv = nodes[v]
            lv = nv.level
            if lv == k:
                # edge level stays k; x now sits below v
                low.remove(link)
                if refiled is None:
                    refiled = node.upper[k] = DList()
                refiled.append(link)
                continue
            twin = link.twin
            bucket = nv.upper[k]
            bucket.remove(twin)
            if not bucket.size:
                del nv.upper[k]
            if lv < k - 1:
                target = nv.upper.get(k - 1)
                if target is None:
                    target = nv.upper[k - 1] = DList()
                target.append(twin)
            else:
                nv.lower.append(twin)
            self._shift(nv, gain)
            self._enqueue(v)
        count = low.size
        if count:
            self._shift(node, count * gain)
        node.level = k - 1
        return Move(x, k, k - 1, count, scanned)

    # -- bookkeeping helpers -----------------------------------------------

    def _shift(self, node: NodeState, delta) -> None:
        lower = self.tier.lower
        before = node.weight >= lower
        node.weight += delta
        after = node.weight >= lower
        if before != after:
            self._cover_count += 1 if after else -1
        self._weight_sum += delta

    def _container(self, node: NodeState, nbr_level: int) -> DList:
        if nbr_level <= node.level:
            return node.lower
        return node.upper[nbr_level]

    def _file(self, node: NodeState, link: Link, nbr_level: int) -> None:
        if nbr_level <= node.level:
            node.lower.append(link)
            return
        bucket = node.upper.get(nbr_level)
        if bucket is None:
            bucket = node.upper[nbr_level] = DList()
        bucket.append(link)

    def _prune(self, node: NodeState, nbr_level: int) -> None:
        if nbr_level > node.level and not node.upper[nbr_level].size:
            del node.upper[nbr_level]

    def resync(self) -> None:
        """Recompute every cached weight from levels; queue nodes whose weight moved."""
        table, nodes = self.tier.table, self.nodes
        fresh = [self.tier.zero] * self.n
        for (u, v) in self.edges:
            w = table[max(nodes[u].level, nodes[v].level)]
            fresh[u] += w
            fresh[v] += w
        lower = self.tier.lower
        for v, node in enumerate(nodes):
            if node.weight != fresh[v]:
                node.weight = fresh[v]
                self._enqueue(v)
        self._cover_count = sum(1 for node in nodes if node.weight >= lower)
        self._weight_sum = sum(fresh, self.tier.zero)

    # -- construction from explicit state ----------------------------------

    @classmethod
    def from_state(cls, n: int, eps, levels, edges, **kwargs) -> "DynamicGraph":
        """Build a graph with the given levels and edges without running FIX-DIRTY.

        Every node is queued, so calling :meth:`fix_dirty` afterwards settles
        any node the given levels leave active.
        """
        graph = cls(n, eps, **kwargs)
        for v, lv in enumerate(levels):
            if not 0 <= lv <= graph.L:
                raise ValueError(f"level {lv} of node {v} outside [0, {graph.L}]")
            graph.nodes[v].level = lv
        table = graph.tier.table
        for u, v in edges:
            key = graph._check_pair(u, v)
            if key in graph.edges:
                raise DuplicateEdgeError(f"edge {key} listed twice")
            nu, nv = graph.nodes[key[0]], graph.nodes[key[1]]
            edge = EdgeRecord(*key)
            graph.edges[key] = edge
            graph._file(nu, edge.pos_in_u, nv.level)
            graph._file(nv, edge.pos_in_v, nu.level)
            w = table[max(nu.level, nv.level)]
            graph._shift(nu, w)
            graph._shift(nv, w)
        # queue everything so that a later fix_dirty() settles any active node
        for v in range(n):
            graph._enqueue(v)
        return graph

    def snapshot(self) -> str:
        from .snapshot import dump_snapshot
        return dump_snapshot(self)


def new_graph(n: int, eps, **kwargs) -> DynamicGraph:
    return DynamicGraph(n, eps, **kwargs)
