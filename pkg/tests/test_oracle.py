import random
from fractions import Fraction

from dynvc import DynamicGraph, exact_min_vertex_cover, gen_random, verify_all
from dynvc.oracle import brute_force_min_vertex_cover, recompute_state
from dynvc.tracegen import replay


def test_mvc_small_cases():
    assert exact_min_vertex_cover(3, []) == 0
    assert exact_min_vertex_cover(2, [(0, 1)]) == 1
    five_cycle = [(i, (i + 1) % 5) for i in range(5)]
    assert exact_min_vertex_cover(5, five_cycle) == 3
    assert brute_force_min_vertex_cover(5, five_cycle) == 3
    k4 = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    assert exact_min_vertex_cover(4, k4) == 3
    # path on 4 vertices and a triangle, disjoint
    assert exact_min_vertex_cover(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (4, 6)]) == 4


def test_mvc_matches_brute_force():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randint(1, 12)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edges = [e for e in pairs if rng.random() < rng.choice([0.2, 0.4, 0.7])]
        assert exact_min_vertex_cover(n, edges) == brute_force_min_vertex_cover(n, edges)


def test_recompute_empty():
    ref = recompute_state(DynamicGraph(4, "1/2"))
    assert ref.weights == [0, 0, 0, 0]
    assert all(c == ("down", False) for c in ref.classes)


def test_reference_matches_after_trace():
    for exact in (True, False):
        g = DynamicGraph(30, "1/5", exact=exact)
        list(replay(g, gen_random(30, 1000, 0.35, seed=8, eps="1/5")))
        report = verify_all(g, ratio=False)
        assert report.ok, str(report)


def test_verify_empty_and_star():
    assert verify_all(DynamicGraph(5, "1/2")).ok
    g = DynamicGraph(4, "1/2")
    for k in (1, 2, 3):
        g.insert_edge(0, k)
    report = verify_all(g)
    assert report.ok and "ratio" in report.checks
    assert g.cover() == {0} and exact_min_vertex_cover(4, list(g.edges)) == 1


def test_corrupted_weight_is_named():
    g = DynamicGraph(4, "1/2")
    g.insert_edge(0, 1)
    g.nodes[1].weight = 2 * g.tier.one  # cached weights are numerators over tier.denom
    report = verify_all(g)
    check = report.check("weights")
    assert not check.ok
    assert check.witness["node"] == 1
    assert check.witness["expected"] == "1" and check.witness["cached"] == "2"


def test_passivity_violation_has_witness():
    # an isolated node at level 1 has weight 0 < 1 - eps: active down-dirty
    g = DynamicGraph.from_state(4, "1/2", [1, 0, 0, 0], [])
    report = verify_all(g)
    assert not report.check("passive").ok
    assert report.check("passive").witness["node"] == 0
    assert not report.check("bands").ok


def test_fault_hook_breaks_lists():
    g = DynamicGraph(6, "1/2")
    g._fault = "skip-notify"
    g.insert_edge(0, 1)
    g.insert_edge(0, 2)
    report = verify_all(g)
    assert not report.check("lists").ok


def test_report_records_are_json():
    import json
    g = DynamicGraph(3, Fraction(1, 2))
    g.insert_edge(0, 1)
    rows = [json.loads(r) for r in verify_all(g).records(update=1)]
    assert all(r["ok"] for r in rows) and rows[0]["update"] == 1
