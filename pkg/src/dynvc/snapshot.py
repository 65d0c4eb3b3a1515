"""Canonical text dump of a quiescent graph state.

::

    dvc-snapshot v1
    n <N> eps <p>/<q> L <L>
    node <id> <level> <weight p/q>
    edge <u> <v> <level> <weight p/q>

Weights are always written as exact rationals.  They are re-derived from
the levels with the exact table, so a float-mode graph dumps the same text
as an exact-mode graph in the same state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import build_weight_table, parse_eps

MAGIC = "dvc-snapshot v1"


class SnapshotError(ValueError):
    pass


@dataclass
class Snapshot:
    n: int
    eps: Fraction
    L: int
    levels: list
    weights: list
    edges: list  # (u, v, level, weight), u < v, sorted


def _rat(x: Fraction) -> str:
    return str(Fraction(x))


def dump_snapshot(graph) -> str:
    eps = graph.eps
    table = build_weight_table(eps, graph.L, exact=True)
    levels = graph.levels()
    weights = [Fraction(0)] * graph.n
    edge_lines = []
    for u, v in sorted(graph.edges):
        lvl = max(levels[u], levels[v])
        w = table[lvl]
        weights[u] += w
        weights[v] += w
        edge_lines.append(f"edge {u} {v} {lvl} {_rat(w)}")
    lines = [MAGIC, f"n {graph.n} eps {eps.numerator}/{eps.denominator} L {graph.L}"]
    lines += [f"node {v} {levels[v]} {_rat(weights[v])}" for v in range(graph.n)]
    lines += edge_lines
    return "\n".join(lines) + "\n"


def parse_snapshot(text: str) -> Snapshot:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != MAGIC:
        raise SnapshotError("missing 'dvc-snapshot v1' header")
    try:
        tag_n, n, tag_eps, eps, tag_l, L = lines[1].split()
        assert (tag_n, tag_eps, tag_l) == ("n", "eps", "L")
        n, eps, L = int(n), parse_eps(eps), int(L)
    except (ValueError, AssertionError, IndexError) as exc:
        raise SnapshotError(f"line 2: bad parameter line {lines[1:2]}") from exc
    levels = [None] * n
    weights = [None] * n
    edges = []
    for lineno, line in enumerate(lines[2:], start=3):
        parts = line.split()
        try:
            if parts[0] == "node" and len(parts) == 4:
                v = int(parts[1])
                levels[v] = int(parts[2])
                weights[v] = Fraction(parts[3])
            elif parts[0] == "edge" and len(parts) == 5:
                edges.append((int(parts[1]), int(parts[2]), int(parts[3]), Fraction(parts[4])))
            else:
                raise ValueError(parts[0])
        except (ValueError, IndexError) as exc:
            raise SnapshotError(f"line {lineno}: cannot parse {line!r}") from exc
    if any(lv is None for lv in levels):
        raise SnapshotError("snapshot does not list every node")
    return Snapshot(n, eps, L, levels, weights, edges)


def load_snapshot(text: str, **kwargs):
    """Rebuild a :class:`DynamicGraph` from a snapshot dump."""
    from .engine import DynamicGraph

    snap = parse_snapshot(text)
    graph = DynamicGraph.from_state(
        snap.n, snap.eps, snap.levels, [(u, v) for u, v, _, _ in snap.edges], **kwargs)
    if graph.L != snap.L:
        raise SnapshotError(f"L={snap.L} in dump, expected {graph.L}")
    return graph
