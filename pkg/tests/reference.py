"""Naive reference simulator: recomputes every weight from scratch.

Used to produce golden move sequences independently of the engine's
incremental lists.  Only valid where the move order is forced, e.g. a star
whose center is the only node that can ever become active.
"""

from fractions import Fraction

from dynvc.numerics import level_count


class NaiveGraph:
    def __init__(self, n, eps):
        self.n = n
        self.eps = Fraction(eps)
        self.L = level_count(n, self.eps)
        self.levels = [0] * n
        self.edges = set()

    def _w(self, level):
        return (1 + self.eps) ** -level

    def weight_at(self, v, i):
        total = Fraction(0)
        for a, b in self.edges:
            if v in (a, b):
                other = b if a == v else a
                total += self._w(max(i, self.levels[other]))
        return total

    def weight(self, v):
        return self.weight_at(v, self.levels[v])

    def low_count(self, v, k):
        """|N_v(0, k)|: neighbors at level <= k."""
        return sum(1 for a, b in self.edges if v in (a, b)
                   and self.levels[b if a == v else a] <= k)

    def active(self, v):
        lv, w = self.levels[v], self.weight(v)
        if w >= 1:
            return lv < self.L and self.weight_at(v, lv + 1) >= 1
        return lv > 0 and w < 1 - self.eps

    def settle(self, order):
        """Move active nodes (scanning ``order``) until none is active."""
        moves = []
        progress = True
        while progress:
            progress = False
            for v in order:
                if self.active(v):
                    k = self.levels[v]
                    if self.weight(v) >= 1:
                        work = self.low_count(v, k)
                        self.levels[v] = k + 1
                    else:
                        work = self.low_count(v, k - 1)
                        self.levels[v] = k - 1
                    moves.append((v, k, self.levels[v], work))
                    progress = True
                    break
        return moves

    def insert(self, u, v):
        self.edges.add((min(u, v), max(u, v)))
        return self.settle(range(self.n))

    def delete(self, u, v):
        self.edges.discard((min(u, v), max(u, v)))
        return self.settle(range(self.n))
