"""Watch a star's center climb and fall through the levels.

Run:  python demos/star_walkthrough.py
"""

from fractions import Fraction

from dynvc import DynamicGraph, exact_min_vertex_cover, verify_all


def show(g, label):
    weights = ", ".join(f"{v}:{g.weight(v)}" for v in range(g.n))
    print(f"{label:<14} levels={g.levels()} cover={sorted(g.cover())}")
    print(f"{'':<14} weights {weights}")


def main():
    eps = Fraction(1, 2)
    g = DynamicGraph(6, eps)
    print(f"n={g.n} eps={eps} -> {g.L + 1} levels (0..{g.L})\n")

    # Growing the star: each new leaf adds weight to the center until it
    # would still have weight >= 1 one level up, and then it climbs.
    for k in range(1, 6):
        report = g.insert_edge(0, k)
        for m in report.moves:
            print(f"  node {m.node} moved {m.from_level} -> {m.to_level}, work {m.work}")
        show(g, f"+ (0,{k})")

    opt = exact_min_vertex_cover(g.n, list(g.edges))
    print(f"\ncover size {g.cover_size()} vs optimum {opt}; "
          f"guarantee {2 * (1 + eps) / (1 - eps)}x")
    print(f"fractional matching size {g.matching_size()} certifies the lower bound\n")

    # Shrinking: once the center's weight falls below 1 - eps it steps back down.
    for k in range(5, 0, -1):
        report = g.delete_edge(0, k)
        for m in report.moves:
            print(f"  node {m.node} moved {m.from_level} -> {m.to_level}, work {m.work}")
        show(g, f"- (0,{k})")

    print("\nall checks:", verify_all(g))


if __name__ == "__main__":
    main()
