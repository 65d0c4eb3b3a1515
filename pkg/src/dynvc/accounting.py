"""Executable potential/energy ledger for the FIX-DIRTY analysis.

Each node ``x`` stores potential ``Phi(x, k) >= 0`` at every level ``k``;
the matching energy is ``Phi(x, k) * (1+eps)**k / eps``.  The rows are a
pure function of the graph state:

* up-dirty ``x`` (``W_x >= 1``): with ``top`` the highest level at or above
  ``level(x)`` where the hypothetical weight ``W_{x->top} >= 1``,
  ``Phi(x, k) = W_{x->k} - W_{x->k+1}`` for ``level(x) <= k < top``,
  ``Phi(x, top) = W_{x->top} - 1``, and zero elsewhere;
* down-dirty ``x``: ``Phi(x, level(x)) = 1 - W_x`` and zero elsewhere.

:class:`Auditor` attaches to a :class:`~dynvc.engine.DynamicGraph` as an
observer.  Around every edge update and every single-level jump it
recomputes the rows of the nodes the event can touch, splits the change
into released and absorbed amounts, and runs the event-local checks.  All
arithmetic is exact; no check has a tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .numerics import NumericTier

UP, DOWN = "up", "down"
_ZERO = Fraction(0)


class AccountingError(AssertionError):
    pass


# -- potential rows ------------------------------------------------------------
#
# Internally every weight and potential is an integer numerator over the exact
# tier's denominator; Fractions appear only at the public boundary.

def hypothetical_weights(graph, x: int, table) -> list:
    """``[W_{x->i} for i in 0..L]`` from table entries, in O(L + deg(x))."""
    L = graph.L
    nodes = graph.nodes
    counts = [0] * (L + 1)
    for link in nodes[x].links():
        counts[nodes[link.nbr].level] += 1
    # above[i] = sum_{t > i} counts[t] * table[t]
    above = [0] * (L + 1)
    acc = 0
    for i in range(L, -1, -1):
        above[i] = acc
        acc += counts[i] * table[i]
    result = []
    low = 0
    for i in range(L + 1):
        low += counts[i]
        result.append(low * table[i] + above[i])
    return result


def row_from_weights(level: int, hw: list, one) -> tuple:
    """Return ``(state, {k: Phi(x, k)})`` holding only nonzero entries."""
    w = hw[level]
    if w >= one:
        top = level
        while top + 1 < len(hw) and hw[top + 1] >= one:
            top += 1
        row = {}
        for k in range(level, top):
            d = hw[k] - hw[k + 1]
            if d:
                row[k] = d
        if hw[top] != one:
            row[top] = hw[top] - one
        return UP, row
    return DOWN, {level: one - w}


def exact_tier(graph) -> NumericTier:
    if graph.tier.exact:
        return graph.tier
    return NumericTier.create(graph.eps, graph.L, exact=True)


def _raw_row(graph, x: int, tier: NumericTier) -> tuple:
    return row_from_weights(graph.nodes[x].level, hypothetical_weights(graph, x, tier.table), tier.one)


def potential_row(graph, x: int) -> tuple:
    """``(state, row)`` for node ``x``; ``row`` is a list of Fractions over levels 0..L."""
    tier = exact_tier(graph)
    state, sparse = _raw_row(graph, x, tier)
    dense = [_ZERO] * (graph.L + 1)
    for k, val in sparse.items():
        dense[k] = tier.to_fraction(val)
    return state, dense


def _total_raw(graph, tier: NumericTier) -> int:
    return sum(sum(_raw_row(graph, x, tier)[1].values()) for x in range(graph.n))


def total_potential(graph) -> Fraction:
    tier = exact_tier(graph)
    return tier.to_fraction(_total_raw(graph, tier))


# -- potential types -----------------------------------------------------------

class PotentialType(NamedTuple):
    level: int
    direction: str  # "up" or "down"

    def succeeds(self, other: "PotentialType") -> bool:
        """Total order: higher level first; at equal level "up" beats "down"."""
        if self.level != other.level:
            return self.level > other.level
        return self.direction == UP and other.direction == DOWN

    def rate(self, eps: Fraction) -> Fraction:
        return (1 + eps) ** self.level / eps


def all_types(L: int) -> list:
    """Every type in ascending order of the total order."""
    return [PotentialType(k, d) for k in range(L + 1) for d in (DOWN, UP)]


def check_two_hop_rate_drop(eps: Fraction, L: int) -> list:
    """Return violations of ``g1 > g2 > g3  =>  rate(g1) >= (1+eps) * rate(g3)``.

    In a total order a middle element exists exactly when the two ends are
    at least two positions apart, so pairs at distance >= 2 cover every triple.
    """
    types = all_types(L)
    for a, b in zip(types, types[1:]):
        assert b.succeeds(a) and not a.succeeds(b)
    bad = []
    for i, low in enumerate(types):
        for high in types[i + 2:]:
            if high.rate(eps) < (1 + eps) * low.rate(eps):
                bad.append((high, low))
    return bad


# -- event deltas --------------------------------------------------------------

@dataclass
class EventDelta:
    """Released and absorbed potential per ``(node, level)`` for one event.

    Amounts are numerators over ``denom`` (1 when rows were given as Fractions).
    """

    kind: str
    mover: Optional[int]
    level: Optional[int]
    released: dict = field(default_factory=dict)   # (v, t) -> amount > 0
    absorbed: dict = field(default_factory=dict)   # (v, t) -> amount > 0
    state_before: dict = field(default_factory=dict)
    state_after: dict = field(default_factory=dict)
    denom: int = 1

    def released_by(self, v: int) -> Fraction:
        return Fraction(sum(a for (u, _), a in self.released.items() if u == v), self.denom)

    def absorbed_by(self, v: int) -> Fraction:
        return Fraction(sum(a for (u, _), a in self.absorbed.items() if u == v), self.denom)

    def energy(self, amounts: dict, eps: Fraction, node: Optional[int] = None) -> Fraction:
        total = sum((Fraction(a, self.denom) * (1 + eps) ** t / eps
                     for (v, t), a in amounts.items() if node is None or v == node), _ZERO)
        return total

    def absorbed_type(self, v: int, t: int) -> PotentialType:
        return PotentialType(t, self.state_after[v])

    def released_type(self, v: int, t: int) -> PotentialType:
        return PotentialType(t, self.state_before[v])


def event_delta(before: dict, after: dict, kind: str = "", mover=None, level=None,
                denom: int = 1) -> EventDelta:
    """Split the row changes of one event into released and absorbed parts.

    ``before`` and ``after`` map node -> ``(state, {level: Phi})``.  A node
    that keeps its dirty state releases the decrease and absorbs the
    increase at each level; a node that flips state releases its whole old
    row and absorbs its whole new row.
    """
    delta = EventDelta(kind, mover, level, denom=denom)
    for v, (s0, row0) in before.items():
        s1, row1 = after[v]
        delta.state_before[v] = s0
        delta.state_after[v] = s1
        if s0 == s1:
            for t in row0.keys() | row1.keys():
                d = row1.get(t, 0) - row0.get(t, 0)
                if d > 0:
                    delta.absorbed[(v, t)] = d
                elif d < 0:
                    delta.released[(v, t)] = -d
        else:
            for t, a in row0.items():
                if a:
                    delta.released[(v, t)] = a
            for t, a in row1.items():
                if a:
                    delta.absorbed[(v, t)] = a
    return delta


# -- lemma checks --------------------------------------------------------------

@dataclass
class CheckOutcome:
    name: str
    ok: bool
    margin: Fraction = _ZERO
    detail: dict = field(default_factory=dict)


def check_work_lemma(move, delta: EventDelta, eps: Fraction) -> CheckOutcome:
    """Work on the mover is at most ``(1+eps)`` times the energy it releases."""
    released = delta.energy(delta.released, eps, node=move.node)
    bound = (1 + eps) * released
    return CheckOutcome("work", move.work <= bound, bound - move.work,
                        {"node": move.node, "from": move.from_level, "to": move.to_level,
                         "work": move.work, "released_energy": released})


def check_update_energy(delta: EventDelta, endpoints, eps: Fraction) -> CheckOutcome:
    """Each endpoint of an inserted or deleted edge absorbs at most ``3/eps`` energy."""
    limit = 3 / eps
    worst, worst_node = _ZERO, None
    for x in endpoints:
        e = delta.energy(delta.absorbed, eps, node=x)
        if worst_node is None or e > worst:
            worst, worst_node = e, x
    return CheckOutcome("update-energy", worst <= limit, limit - worst,
                        {"node": worst_node, "absorbed_energy": worst})


def check_transfer(delta: EventDelta, neighbors: set) -> list:
    """Transfer lemmas for a jump: locality, total absorbed, and type descent."""
    x, k = delta.mover, delta.level
    up = delta.kind == UP
    released_here = Fraction(delta.released.get((x, k), 0), delta.denom)
    total_absorbed = Fraction(sum(delta.absorbed.values()), delta.denom)
    star = PotentialType(k, UP if up else DOWN)
    outcomes = [CheckOutcome("transfer-total", total_absorbed <= released_here,
                             released_here - total_absorbed,
                             {"node": x, "level": k, "absorbed": total_absorbed,
                              "released_at_level": released_here})]
    local_bad, order_bad = [], []
    for (v, t) in delta.absorbed:
        if up:
            fine = v != x and v in neighbors and delta.state_after[v] == DOWN and t <= k
        else:
            fine = (v == x or v in neighbors) and t < k
        if not fine:
            local_bad.append((v, t, delta.state_after[v]))
        if not star.succeeds(delta.absorbed_type(v, t)):
            order_bad.append((v, t, delta.state_after[v]))
    outcomes.append(CheckOutcome("transfer-locality", not local_bad, detail={"violations": local_bad}))
    outcomes.append(CheckOutcome("type-descent", not order_bad, detail={"violations": order_bad}))
    return outcomes


def check_move_identity(move, hw: list, low_counts: tuple, eps: Fraction, denom: int = 1) -> list:
    """Work equals the scaled drop in hypothetical weight; down-moves are small.

    ``hw`` holds the mover's hypothetical weights before the move (numerators
    over ``denom``) and ``low_counts`` is ``(|N_x(0, k-1)|, |N_x(0, k)|)``
    counted from neighbor levels.
    """
    k = move.from_level
    below, upto = low_counts
    if move.to_level > k:
        scaled = Fraction(hw[k] - hw[k + 1], denom) * (1 + eps) ** (k + 1) / eps
        return [CheckOutcome("identity", move.work == upto == scaled,
                             detail={"work": move.work, "count": upto, "scaled": scaled})]
    scaled = Fraction(hw[k - 1] - hw[k], denom) * (1 + eps) ** k / eps
    return [
        CheckOutcome("identity", move.work == below == scaled,
                     detail={"work": move.work, "count": below, "scaled": scaled}),
        CheckOutcome("down-size", upto < (1 + eps) ** k,
                     detail={"count": upto, "bound": (1 + eps) ** k}),
    ]


# -- the observer --------------------------------------------------------------

def _fmt(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    return value


class Auditor:
    """Observer that keeps the ledger and runs every event-local check.

    With ``strict=True`` the first failing check raises
    :class:`AccountingError`; otherwise failures are collected in
    :attr:`failures`.  ``keep_records`` stores one structured record per
    event for :meth:`records`.
    """

    def __init__(self, graph, *, strict: bool = False, keep_records: bool = False):
        if not graph.exact:
            raise ValueError("accounting requires an exact-mode graph")
        self.eps = graph.eps
        self.tier = graph.tier
        self.strict = strict
        self.keep_records = keep_records
        self.initial_total = total_potential(graph)
        # running totals as integer numerators, bucketed by type so that
        # energy can be recovered exactly without per-event Fractions
        self._absorbed_raw: dict = {}
        self._released_raw: dict = {}
        self.work = 0
        self.events = 0
        self.checks_run = 0
        self.failures: list = []
        self._records: list = []
        self._pending = None
        graph.observer = self

    def _rows(self, graph, nodes) -> tuple:
        table = self.tier.table
        rows, weights = {}, {}
        for v in nodes:
            hw = hypothetical_weights(graph, v, table)
            weights[v] = hw
            rows[v] = row_from_weights(graph.nodes[v].level, hw, self.tier.one)
        return rows, weights

    def before(self, graph, event) -> None:
        if event.kind in (UP, DOWN):
            x = event.nodes[0]
            nbrs = set(graph.neighbors(x))
            nodes = [x, *sorted(nbrs)]
            k = event.level
            levels = [graph.nodes[v].level for v in nbrs]
            counts = (sum(1 for lv in levels if lv <= k - 1), sum(1 for lv in levels if lv <= k))
        else:
            nbrs, nodes, counts = set(), list(event.nodes), None
        rows, weights = self._rows(graph, nodes)
        self._pending = (event, nodes, nbrs, rows, weights, counts)

    def after(self, graph, event, move) -> None:
        pending_event, nodes, nbrs, before, weights, counts = self._pending
        assert pending_event is event
        self._pending = None
        after, _ = self._rows(graph, nodes)
        mover = event.nodes[0] if move is not None else None
        delta = event_delta(before, after, event.kind, mover, event.level, self.tier.denom)
        eps = self.eps
        if move is None:
            outcomes = [check_update_energy(delta, event.nodes, eps)]
        else:
            self.work += move.work
            outcomes = [check_work_lemma(move, delta, eps)]
            outcomes += check_transfer(delta, nbrs)
            outcomes += check_move_identity(move, weights[mover], counts, eps, self.tier.denom)
        self._tally(delta)
        self.events += 1
        self.checks_run += len(outcomes)
        failed = [o for o in outcomes if not o.ok]
        for o in failed:
            self.failures.append((event, o))
        if self.keep_records:
            self._records.append(self._record(event, move, delta, outcomes))
        if failed and self.strict:
            raise AccountingError(f"{event}: {failed[0].name} failed: {_fmt(failed[0].detail)}")

    def _tally(self, delta: EventDelta) -> None:
        absorbed, released = self._absorbed_raw, self._released_raw
        for (v, t), a in delta.absorbed.items():
            key = delta.absorbed_type(v, t)
            absorbed[key] = absorbed.get(key, 0) + a
        for (v, t), a in delta.released.items():
            key = delta.released_type(v, t)
            released[key] = released.get(key, 0) + a

    def _by_type(self, raw: dict) -> dict:
        return {key: self.tier.to_fraction(a) for key, a in sorted(raw.items())}

    def _energy(self, raw: dict) -> Fraction:
        return sum((self.tier.to_fraction(a) * self.tier.rate(key.level) for key, a in raw.items()),
                   _ZERO)

    @property
    def by_type_absorbed(self) -> dict:
        return self._by_type(self._absorbed_raw)

    @property
    def by_type_released(self) -> dict:
        return self._by_type(self._released_raw)

    @property
    def absorbed(self) -> Fraction:
        return self.tier.to_fraction(sum(self._absorbed_raw.values()))

    @property
    def released(self) -> Fraction:
        return self.tier.to_fraction(sum(self._released_raw.values()))

    @property
    def absorbed_energy(self) -> Fraction:
        return self._energy(self._absorbed_raw)

    @property
    def released_energy(self) -> Fraction:
        return self._energy(self._released_raw)

    def _record(self, event, move, delta, outcomes) -> dict:
        eps = self.eps
        return {
            "event": event.kind,
            "nodes": list(event.nodes),
            "level": event.level,
            "work": move.work if move else 0,
            "released_potential": str(Fraction(sum(delta.released.values()), delta.denom)),
            "absorbed_potential": str(Fraction(sum(delta.absorbed.values()), delta.denom)),
            "released_energy": str(delta.energy(delta.released, eps)),
            "absorbed_energy": str(delta.energy(delta.absorbed, eps)),
            "checks": {o.name: o.ok for o in outcomes},
        }

    def records(self) -> list:
        return [json.dumps(r, sort_keys=True) for r in self._records]

    @property
    def ok(self) -> bool:
        return not self.failures

    def detach(self, graph) -> None:
        if graph.observer is self:
            graph.observer = None


@dataclass
class ConservationReport:
    initial: Fraction
    absorbed: Fraction
    released: Fraction
    final: Fraction
    work: int
    released_energy: Fraction
    eps: Fraction

    @property
    def balanced(self) -> bool:
        return self.final == self.initial + self.absorbed - self.released

    @property
    def work_covered(self) -> bool:
        """Total work is at most ``(1+eps)`` times all energy released."""
        return self.work <= (1 + self.eps) * self.released_energy

    def as_record(self) -> dict:
        return {"audit": "conservation", "balanced": self.balanced,
                "initial": str(self.initial), "absorbed": str(self.absorbed),
                "released": str(self.released), "final": str(self.final),
                "work": self.work, "released_energy": str(self.released_energy),
                "work_covered": self.work_covered}


def audit_conservation(graph, auditor: Auditor) -> ConservationReport:
    """Compare the recomputed ledger total against initial + absorbed - released."""
    return ConservationReport(
        initial=auditor.initial_total,
        absorbed=auditor.absorbed,
        released=auditor.released,
        final=total_potential(graph),
        work=auditor.work,
        released_energy=auditor.released_energy,
        eps=auditor.eps,
    )
