from fractions import Fraction
from pathlib import Path

import pytest

from dynvc import (DuplicateEdgeError, DynamicGraph, MissingEdgeError, MoveBudgetExceeded,
                   NodeRangeError, SelfLoopError, verify_all)
from dynvc.oracle import recompute_state

from reference import NaiveGraph

HALF = Fraction(1, 2)
GOLDEN = Path(__file__).parent / "golden"


def star(n_leaves, n=None, eps=HALF):
    g = DynamicGraph(n or n_leaves + 1, eps)
    reports = [g.insert_edge(0, k) for k in range(1, n_leaves + 1)]
    return g, reports


def moves_of(report):
    return [(m.node, m.from_level, m.to_level, m.work) for m in report.moves]


def test_new_graph_levels():
    assert DynamicGraph(2, HALF).L == 2
    assert DynamicGraph(4, HALF).L == 4
    g = DynamicGraph(1, Fraction(1, 10))
    assert g.L == 0
    with pytest.raises(NodeRangeError):
        g.insert_edge(0, 1)


def test_weight_at_level():
    g = DynamicGraph(4, HALF)
    assert g.weight_at_level(3, 2) == 0
    g.insert_edge(0, 1)
    g.insert_edge(0, 2)
    # node 0 moved to level 1; its two neighbors stay at level 0
    assert g.level(0) == 1
    assert [g.weight_at_level(0, i) for i in range(3)] == [2, Fraction(4, 3), Fraction(8, 9)]


def test_classify():
    g = DynamicGraph(2, HALF)
    assert g.classify(0) == ("down", False)
    g.insert_edge(0, 1)
    assert g.classify(0) == ("up", False)
    assert g.weight_at_level(0, 1) == Fraction(2, 3)
    # center with two level-0 neighbors held at level 0 is active up-dirty
    h = DynamicGraph.from_state(4, HALF, [0, 0, 0, 0], [(0, 1), (0, 2)])
    assert h.weight(0) == 2
    assert h.classify(0) == ("up", True)


def test_insert_examples():
    g = DynamicGraph(2, HALF)
    r = g.insert_edge(0, 1)
    assert r.moves == [] and r.work == 0
    assert g.levels() == [0, 0] and g.weight(0) == g.weight(1) == 1

    g, reports = star(2, n=4)
    assert moves_of(reports[1]) == [(0, 0, 1, 2)]
    assert g.weight(0) == Fraction(4, 3)
    assert g.weight(1) == g.weight(2) == Fraction(2, 3)

    r = g.insert_edge(0, 3)
    assert moves_of(r) == [(0, 1, 2, 3)]
    assert g.weight(0) == Fraction(4, 3)
    assert all(g.weight(k) == Fraction(4, 9) for k in (1, 2, 3))


def test_delete_examples():
    g, _ = star(3)
    r = g.delete_edge(0, 3)
    assert r.moves == [] and g.weight(0) == Fraction(8, 9)
    r = g.delete_edge(0, 2)
    assert moves_of(r) == [(0, 2, 1, 1)]
    assert g.weight(0) == Fraction(2, 3)
    assert g.classify(0) == ("down", False)
    # the leaf at level 0 just goes quiet; the center (level 1, weight 0) drops to 0
    r = g.delete_edge(0, 1)
    assert g.weight(1) == 0 and g.classify(1) == ("down", False)
    assert moves_of(r) == [(0, 1, 0, 0)]


def test_update_errors():
    g = DynamicGraph(3, HALF)
    with pytest.raises(SelfLoopError):
        g.insert_edge(1, 1)
    with pytest.raises(NodeRangeError):
        g.insert_edge(0, 3)
    g.insert_edge(0, 1)
    with pytest.raises(DuplicateEdgeError):
        g.insert_edge(1, 0)
    with pytest.raises(MissingEdgeError):
        g.delete_edge(1, 2)


def test_fix_dirty_idle():
    g = DynamicGraph(5, HALF)
    assert g.fix_dirty() == []


def test_star_matches_golden():
    lines = (GOLDEN / "star8_eps1-2.moves").read_text().splitlines()
    g = DynamicGraph(8, HALF)
    expected, seen = [], []
    for line in lines:
        parts = line.split()
        if parts[0] == "+":
            seen += moves_of(g.insert_edge(int(parts[1]), int(parts[2])))
        elif parts[0] == "move":
            expected.append(tuple(map(int, parts[1:])))
        elif parts[0] == "levels":
            assert g.levels() == list(map(int, parts[1:]))
    assert seen == expected
    assert verify_all(g).ok


def test_star_against_naive_simulator_with_deletions():
    eps = Fraction(1, 5)
    g, naive = DynamicGraph(12, eps), NaiveGraph(12, eps)
    ops = [(1, k) for k in range(1, 12)] + [(0, k) for k in range(11, 0, -1)]
    for grow, k in ops:
        if grow:
            assert moves_of(g.insert_edge(0, k)) == naive.insert(0, k)
        else:
            assert moves_of(g.delete_edge(0, k)) == naive.delete(0, k)
        assert g.levels() == naive.levels
        assert [g.weight(v) for v in range(12)] == [naive.weight(v) for v in range(12)]


def test_cascade_two_movers():
    # two centers (0 and 1) sharing leaf 3; the last insert lifts center 1,
    # which makes the shared leaf active in turn
    g = DynamicGraph(10, HALF)
    for e in [(1, 4), (1, 8), (0, 7), (0, 3)]:
        g.insert_edge(*e)
    r = g.insert_edge(1, 3)
    assert moves_of(r) == [(1, 1, 2, 3), (3, 0, 1, 0)]
    assert len({m.node for m in r.moves}) >= 2
    assert verify_all(g).ok


def test_move_up_list_rebuild():
    g = DynamicGraph.from_state(4, HALF, [0, 0, 0, 0], [(0, 1), (0, 2)])
    moves = g.fix_dirty()
    assert [(m.node, m.work) for m in moves] == [(0, 2)]
    ref = recompute_state(g)
    for v in (1, 2):
        assert g.nodes[v].lower.size == 0
        assert {t: set(b.neighbors()) for t, b in g.nodes[v].upper.items()} == {1: {0}}
        assert ref.upper[v] == {1: {0}}
    assert set(g.nodes[0].lower.neighbors()) == {1, 2}


def test_move_up_no_low_neighbors():
    # node 0 at level 0 with three neighbors at level 2: weight 3*(4/9) >= 1
    g = DynamicGraph.from_state(4, HALF, [0, 2, 2, 2], [(0, 1), (0, 2), (0, 3)])
    assert g.classify(0) == ("up", True)
    move = g._move_up(0)
    assert move.work == 0 and g.level(0) == 1
    assert verify_all(g, ratio=False).check("lists").ok


def test_move_down_no_low_neighbors():
    # node 0 at level 2 whose only neighbor is at level 3
    g = DynamicGraph.from_state(4, HALF, [2, 3, 0, 0], [(0, 1)])
    move = g._move_down(0)
    assert move.work == 0 and g.level(0) == 1
    assert verify_all(g, ratio=False).check("lists").ok


def test_cover_and_matching():
    g = DynamicGraph(2, HALF)
    assert g.cover() == set() and g.fractional_matching() == {}
    g.insert_edge(0, 1)
    assert g.cover() == {0, 1}
    assert g.fractional_matching() == {(0, 1): Fraction(2, 3)}
    g, _ = star(3)
    assert g.cover() == {0} and g.cover_size() == 1


def test_fifo_and_lifo_both_settle():
    edges = [(0, k) for k in range(1, 9)] + [(1, k) for k in range(2, 9)] + [(2, 3), (4, 5)]
    for order in ("fifo", "lifo"):
        g = DynamicGraph(9, Fraction(1, 5), order=order)
        for e in edges:
            g.insert_edge(*e)
            assert verify_all(g).ok
        assert not any(g.is_active(v) for v in range(9))


def test_budget_exceeded():
    g = DynamicGraph.from_state(8, Fraction(1, 10), [0] * 8, [(0, k) for k in range(1, 8)],
                                budget=1)
    with pytest.raises(MoveBudgetExceeded):
        g.fix_dirty()


def test_recompute_every_keeps_state():
    g = DynamicGraph(10, Fraction(3, 10), recompute_every=3)
    for k in range(1, 10):
        g.insert_edge(0, k)
        g.insert_edge(k, (k % 9) + 1) if not g.has_edge(k, (k % 9) + 1) else None
    assert verify_all(g).ok


def test_float_mode_matches_exact():
    ge, gf = DynamicGraph(9, Fraction(1, 5)), DynamicGraph(9, Fraction(1, 5), exact=False)
    for k in range(1, 9):
        assert moves_of(ge.insert_edge(0, k)) == moves_of(gf.insert_edge(0, k))
    assert ge.levels() == gf.levels()
    assert all(abs(float(ge.weight(v)) - gf.weight(v)) < 1e-12 for v in range(9))
    assert isinstance(gf.weight(0), float)
