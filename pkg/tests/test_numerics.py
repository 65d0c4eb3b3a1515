import math
from fractions import Fraction

import pytest

from dynvc.numerics import NumericTier, build_weight_table, level_count, parse_eps


def test_parse_eps_forms():
    assert parse_eps("1/10") == Fraction(1, 10)
    assert parse_eps("0.1") == Fraction(1, 10)
    assert parse_eps((3, 10)) == Fraction(3, 10)
    assert parse_eps(Fraction(1, 2)) == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["0", "1", "3/2", "-1/5"])
def test_parse_eps_range(bad):
    with pytest.raises(ValueError):
        parse_eps(bad)


def test_parse_eps_rejects_float():
    with pytest.raises(TypeError):
        parse_eps(0.1)


@pytest.mark.parametrize("n, eps, expected", [
    (1, "1/10", 0),
    (2, "1/2", 2),
    (4, "1/2", 4),
    (1000, "1/10", 73),
])
def test_level_count(n, eps, expected):
    assert level_count(n, eps) == expected


def test_level_count_is_smallest():
    for n in range(1, 300):
        for eps in (Fraction(1, 10), Fraction(1, 5), Fraction(1, 2)):
            L = level_count(n, eps)
            assert (1 + eps) ** L >= n
            assert L == 0 or (1 + eps) ** (L - 1) < n


def test_weight_table_values():
    assert build_weight_table("1/2", 2) == [1, Fraction(2, 3), Fraction(4, 9)]
    assert build_weight_table("1/10", 3)[3] == Fraction(1000, 1331)


@pytest.mark.parametrize("eps", ["1/10", "1/5", "1/2"])
def test_float_table_within_one_ulp(eps):
    exact = build_weight_table(eps, 200)
    approx = build_weight_table(eps, 200, exact=False)
    for e, f in zip(exact, approx):
        assert abs(Fraction(f) - e) <= Fraction(math.ulp(f))


def test_tail_bound():
    for n in (2, 3, 10, 1000):
        for eps in (Fraction(1, 10), Fraction(1, 2)):
            L = level_count(n, eps)
            assert build_weight_table(eps, L)[-1] <= (1 + eps) / n


def test_exact_tier_is_scaled_table():
    tier = NumericTier.create("1/2", 4)
    table = build_weight_table("1/2", 4)
    assert [tier.to_fraction(x) for x in tier.table] == table
    assert tier.to_fraction(tier.one) == 1
    assert tier.to_fraction(tier.lower) == Fraction(1, 2)
    assert tier.to_fraction(tier.upper) == Fraction(3, 2)
    assert all(isinstance(x, int) for x in tier.table)
    # denominator divides (p+q)^L * q^L
    assert (3 ** 4 * 2 ** 4) % Fraction(tier.table[-1], tier.denom).denominator == 0


def test_float_tier_steps_rounded_once():
    tier = NumericTier.create("1/10", 10, exact=False)
    table = build_weight_table("1/10", 10)
    assert tier.step == [float(table[k] - table[k + 1]) for k in range(10)]
    assert tier.one == 1.0 and tier.lower == 0.9


def test_rate():
    tier = NumericTier.create("1/2", 3)
    assert tier.rate(0) == 2
    assert tier.rate(2) == Fraction(9, 4) / Fraction(1, 2)
