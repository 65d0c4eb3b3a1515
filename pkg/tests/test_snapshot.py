import random
from fractions import Fraction

import pytest

from dynvc import DynamicGraph, gen_random, load_snapshot, parse_snapshot
from dynvc.snapshot import SnapshotError
from dynvc.tracegen import replay


def test_empty_snapshot():
    text = DynamicGraph(3, "1/2").snapshot()
    assert text == "dvc-snapshot v1\nn 3 eps 1/2 L 3\nnode 0 0 0\nnode 1 0 0\nnode 2 0 0\n"


def test_single_edge_snapshot():
    g = DynamicGraph(2, "1/2")
    g.insert_edge(1, 0)
    assert g.snapshot() == ("dvc-snapshot v1\nn 2 eps 1/2 L 2\n"
                            "node 0 0 1\nnode 1 0 1\nedge 0 1 0 1\n")


def test_star_snapshot_weights():
    g = DynamicGraph(4, "1/2")
    for k in (1, 2, 3):
        g.insert_edge(0, k)
    snap = parse_snapshot(g.snapshot())
    assert snap.levels == [2, 0, 0, 0]
    assert snap.weights == [Fraction(4, 3)] + [Fraction(4, 9)] * 3
    assert snap.edges[0] == (0, 1, 2, Fraction(4, 9))


def test_round_trip_random_graphs():
    rng = random.Random(2024)
    for i in range(100):
        n = rng.randint(2, 20)
        eps = rng.choice(["1/10", "3/10", "1/2"])
        exact = i % 2 == 0
        g = DynamicGraph(n, eps, exact=exact)
        list(replay(g, gen_random(n, rng.randint(0, 120), 0.3, seed=i, eps=eps)))
        text = g.snapshot()
        h = load_snapshot(text, exact=exact)
        assert h.levels() == g.levels()
        assert set(h.edges) == set(g.edges)
        assert h.fix_dirty() == []
        assert h.snapshot() == text
        assert [h.weight(v) for v in range(n)] == [g.weight(v) for v in range(n)] or not exact


def test_float_and_exact_dump_identically():
    tr = gen_random(12, 200, 0.3, seed=5, eps="1/5")
    ge, gf = DynamicGraph(12, "1/5"), DynamicGraph(12, "1/5", exact=False)
    list(replay(ge, tr))
    list(replay(gf, tr))
    assert ge.snapshot() == gf.snapshot()


@pytest.mark.parametrize("text", [
    "",
    "dvc-snapshot v2\n",
    "dvc-snapshot v1\nn 2 eps 1/2\n",
    "dvc-snapshot v1\nn 2 eps 1/2 L 2\nnode 0 0 0\n",
    "dvc-snapshot v1\nn 2 eps 1/2 L 2\nnode 0 0 0\nnode 1 0 0\nvertex 1\n",
])
def test_parse_errors(text):
    with pytest.raises(SnapshotError):
        parse_snapshot(text)
