"""Brute-force verifiers that share no bookkeeping with the engine.

Everything here is recomputed from two facts only: the edge set and the
node levels.  Weights are evaluated in exact rationals regardless of the
engine's tier; for a float engine the threshold checks allow a 1e-9 slack.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .numerics import NumericTier

FLOAT_SLACK = Fraction(1, 10 ** 9)
RATIO_CHECK_MAX_N = 20


@dataclass
class ReferenceState:
    """Recomputed state; weights are integer numerators over ``tier.denom``."""

    tier: NumericTier
    levels: list
    weights: list                # W_v
    weights_up: list             # W_{v -> level+1}, None at level L
    lower: list                  # set of neighbors with level <= own level
    upper: list                  # dict t -> set of neighbors at level t > own level
    classes: list                # (state, active) per node

    def weight(self, v: int) -> Fraction:
        return self.tier.to_fraction(self.weights[v])


def exact_tier(graph) -> NumericTier:
    if graph.tier.exact:
        return graph.tier
    return NumericTier.create(graph.eps, graph.L, exact=True)


def recompute_state(graph) -> ReferenceState:
    n, L = graph.n, graph.L
    tier = exact_tier(graph)
    table = tier.table
    levels = graph.levels()
    adj = [[] for _ in range(n)]
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    weights, weights_up, lower, upper, classes = [], [], [], [], []
    one, band = tier.one, tier.lower
    for v in range(n):
        lv = levels[v]
        nbr_levels = [levels[u] for u in adj[v]]
        w = sum(table[max(t, lv)] for t in nbr_levels)
        w_up = sum(table[max(t, lv + 1)] for t in nbr_levels) if lv < L else None
        low = {u for u in adj[v] if levels[u] <= lv}
        high = {}
        for u in adj[v]:
            if levels[u] > lv:
                high.setdefault(levels[u], set()).add(u)
        if w >= one:
            cls = ("up", w_up is not None and w_up >= one)
        else:
            cls = ("down", lv > 0 and w < band)
        weights.append(w)
        weights_up.append(w_up)
        lower.append(low)
        upper.append(high)
        classes.append(cls)
    return ReferenceState(tier, levels, weights, weights_up, lower, upper, classes)


# -- exact minimum vertex cover ---------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def exact_min_vertex_cover(n: int, edges) -> int:
    """Exact minimum vertex cover size by branch and bound over bitmasks.

    Degree-0 vertices are dropped, a degree-1 vertex forces its neighbor,
    and a greedy maximal matching gives the lower bound used for pruning.
    """
    if n > 32:
        raise ValueError("exact_min_vertex_cover supports n <= 32")
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    adj = tuple(adj)
    alive = 0
    for v in range(n):
        if adj[v]:
            alive |= 1 << v

    def matching_bound(mask: int) -> int:
        size, free = 0, mask
        while free:
            v = (free & -free).bit_length() - 1
            free &= ~(1 << v)
            nbrs = adj[v] & free
            if nbrs:
                u = (nbrs & -nbrs).bit_length() - 1
                free &= ~(1 << u)
                size += 1
        return size

    @lru_cache(maxsize=None)
    def solve(mask: int) -> int:
        forced = 0
        while True:
            changed = False
            m = mask
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                nbrs = adj[v] & mask
                if not nbrs:
                    mask &= ~(1 << v)
                    changed = True
                elif nbrs & (nbrs - 1) == 0:
                    mask &= ~(nbrs | (1 << v))
                    forced += 1
                    changed = True
                    m &= mask
            if not changed:
                break
        if not mask:
            return forced
        pick, pick_deg = -1, -1
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            d = _popcount(adj[v] & mask)
            if d > pick_deg:
                pick, pick_deg = v, d
        if pick_deg == 2:
            # max degree 2: disjoint paths and cycles; a cycle of length c needs ceil(c/2)
            return forced + _cover_paths_cycles(adj, mask)
        nbrs = adj[pick] & mask
        take_v = 1 + solve(mask & ~(1 << pick))
        lb_other = matching_bound(mask & ~nbrs & ~(1 << pick))
        if _popcount(nbrs) + lb_other < take_v:
            take_n = _popcount(nbrs) + solve(mask & ~nbrs & ~(1 << pick))
            take_v = min(take_v, take_n)
        return forced + take_v

    return solve(alive)


def _cover_paths_cycles(adj, mask: int) -> int:
    total = 0
    seen = 0
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        if seen >> v & 1:
            continue
        comp, stack, edges2 = 0, [v], 0
        seen |= 1 << v
        while stack:
            x = stack.pop()
            comp += 1
            nb = adj[x] & mask
            edges2 += _popcount(nb)
            nb &= ~seen
            while nb:
                y = (nb & -nb).bit_length() - 1
                nb &= nb - 1
                seen |= 1 << y
                stack.append(y)
        n_edges = edges2 // 2
        # a path with k vertices needs floor(k/2); a cycle with k vertices needs ceil(k/2)
        total += (comp + 1) // 2 if n_edges == comp else comp // 2
    return total


def brute_force_min_vertex_cover(n: int, edges) -> int:
    """Minimum vertex cover by enumerating all 2**n subsets."""
    masks = [(1 << u) | (1 << v) for u, v in edges]
    best = n
    for s in range(1 << n):
        size = _popcount(s)
        if size < best and all(s & m for m in masks):
            best = size
    return best


# -- verification report -----------------------------------------------------

@dataclass
class CheckResult:
    name: str
    ok: bool = True
    witness: Optional[dict] = None

    def fail(self, **witness) -> None:
        if self.ok:
            self.ok = False
            self.witness = {k: _plain(v) for k, v in witness.items()}


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_plain(x) for x in value]
    return value


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)

    def check(self, name: str) -> CheckResult:
        return self.checks.setdefault(name, CheckResult(name))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def failures(self) -> list:
        return [c for c in self.checks.values() if not c.ok]

    def records(self, **extra) -> list:
        return [json.dumps({"check": c.name, "ok": c.ok, "witness": c.witness, **extra},
                           sort_keys=True)
                for c in self.checks.values()]

    def __str__(self):
        if self.ok:
            return f"all {len(self.checks)} checks passed"
        return "; ".join(f"{c.name}: {c.witness}" for c in self.failures())


def check_consistency(graph, ref: ReferenceState, report: VerificationReport) -> None:
    """Cached weights and neighborhood lists against the reference."""
    lists = report.check("lists")
    weights = report.check("weights")
    for v, node in enumerate(graph.nodes):
        low = [link.nbr for link in node.lower]
        if len(low) != node.lower.size or set(low) != ref.lower[v] or len(set(low)) != len(low):
            lists.fail(node=v, bucket="lower", cached=set(low), expected=ref.lower[v])
        cached_upper = {}
        for t, bucket in node.upper.items():
            members = [link.nbr for link in bucket]
            if len(members) != bucket.size or not members:
                lists.fail(node=v, bucket=t, size=bucket.size, members=members)
            cached_upper[t] = set(members)
        if cached_upper != ref.upper[v]:
            lists.fail(node=v, bucket="upper", cached=str(cached_upper), expected=str(ref.upper[v]))
        for link in node.links():
            twin = link.twin
            if twin is None or twin.twin is not link or twin.nbr != v:
                lists.fail(node=v, nbr=link.nbr, problem="twin handle mismatch")
        cached = node.weight
        if graph.exact:
            if cached != ref.weights[v]:
                weights.fail(node=v, cached=graph.tier.to_fraction(cached), expected=ref.weight(v))
        else:
            expected = float(ref.weight(v))
            if abs(cached - expected) > 1e-9 * max(1.0, expected):
                weights.fail(node=v, cached=cached, expected=ref.weight(v))


def verify_all(graph, ref: Optional[ReferenceState] = None, *, ratio: Optional[bool] = None,
               opt: Optional[int] = None) -> VerificationReport:
    """Run every between-updates check and return a report.

    ``ratio`` forces the approximation-ratio check on or off; by default it
    runs when ``n <= 20``.  ``opt`` supplies a precomputed optimum.
    """
    if ref is None:
        ref = recompute_state(graph)
    report = VerificationReport()
    check_consistency(graph, ref, report)

    eps = graph.eps
    tier = ref.tier
    # thresholds in integer units; a float engine gets a 1e-9 slack
    slack = 0 if graph.exact else FLOAT_SLACK * tier.denom
    one, lower, upper = tier.one, tier.lower, tier.upper
    L = graph.L

    passive = report.check("passive")
    top = report.check("updirty-level")
    bands = report.check("bands")
    for v in range(graph.n):
        w, lv = ref.weights[v], ref.levels[v]
        if lv == L and w >= one + slack:
            top.fail(node=v, level=lv, weight=ref.weight(v))
        w_up = ref.weights_up[v]
        if w_up is not None and w_up >= one + slack:
            passive.fail(node=v, level=lv, weight=ref.weight(v),
                         weight_next=tier.to_fraction(w_up), kind="active up-dirty")
        if lv > 0 and w < lower - slack:
            passive.fail(node=v, level=lv, weight=ref.weight(v), kind="active down-dirty")
        if w >= upper + slack or (lv > 0 and w < lower - slack):
            bands.fail(node=v, level=lv, weight=ref.weight(v))

    cover = graph.cover()
    cov = report.check("cover")
    for u, v in graph.edges:
        if u not in cover and v not in cover:
            cov.fail(edge=(u, v), weights=(ref.weight(u), ref.weight(v)))
            break
    count = report.check("cover-count")
    if graph.cover_size() != len(cover):
        count.fail(maintained=graph.cover_size(), actual=len(cover))

    matching = graph.fractional_matching()
    totals = [0] * graph.n
    for (u, v), w in matching.items():
        totals[u] += w
        totals[v] += w
    frac = report.check("matching")
    limit = 1 if graph.exact else 1.0 + 1e-9
    for v, t in enumerate(totals):
        if t >= limit:
            frac.fail(node=v, total=t)
    msize = sum(matching.values(), 0)
    counting = report.check("counting")
    lhs = Fraction(len(cover)) * (1 - eps) / (1 + eps)
    rhs = 2 * Fraction(msize)
    if not graph.exact:
        rhs += FLOAT_SLACK * graph.n
    if lhs > rhs:
        counting.fail(cover=len(cover), lhs=lhs, rhs=rhs)

    if ratio is None:
        ratio = graph.n <= RATIO_CHECK_MAX_N
    if ratio:
        if opt is None:
            opt = exact_min_vertex_cover(graph.n, list(graph.edges))
        rc = report.check("ratio")
        if len(cover) > 2 * (1 + eps) / (1 - eps) * opt:
            rc.fail(cover=len(cover), opt=opt)
    return report
