"""Weight arithmetic shared by the engine and the accounting layer.

Every weight in the system is a finite sum of entries ``(1+eps)**-k`` of a
precomputed table.  Two tiers expose the same table interface:

* the exact tier works in integers: with ``eps = p/q`` in lowest terms,
  every table entry is an integer multiple of ``1 / (q * (p+q)**L)``, so
  weights are stored as integer numerators over that fixed denominator and
  every comparison against ``1`` or ``1 - eps`` is decided exactly;
* the float tier rounds each exact table entry to the nearest double once
  and never recomputes powers afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Number = Union[int, float]


def parse_eps(value) -> Fraction:
    """Parse ``eps`` given as ``"p/q"``, a decimal string, an int pair or a Fraction.

    Decimal strings are read exactly, so ``"0.1"`` becomes ``1/10``.
    Floats are rejected because their binary value is almost never the
    rational the caller meant.
    """
    if isinstance(value, float):
        raise TypeError("eps must be rational; pass a string such as '0.1' or '1/10'")
    if isinstance(value, tuple):
        value = Fraction(*value)
    eps = value if isinstance(value, Fraction) else Fraction(value)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie strictly between 0 and 1, got {eps}")
    return eps


def level_count(n: int, eps) -> int:
    """Smallest ``L`` with ``(1+eps)**L >= n``, by exact rational powering."""
    if n < 1:
        raise ValueError("n must be positive")
    base = 1 + parse_eps(eps)
    L, power = 0, Fraction(1)
    while power < n:
        power *= base
        L += 1
    return L


def build_weight_table(eps, L: int, exact: bool = True) -> list:
    """Return ``[(1+eps)**-k for k in 0..L]`` as Fractions or as floats."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    ratio = 1 / (1 + parse_eps(eps))
    table = [Fraction(1)]
    for _ in range(L):
        table.append(table[-1] * ratio)
    if exact:
        return table
    # Fraction.__float__ is correctly rounded, so each entry is rounded exactly once.
    return [float(w) for w in table]


@dataclass(frozen=True)
class NumericTier:
    """Table entries plus the thresholds the engine compares against.

    In the exact tier every stored value is an integer numerator over
    ``denom``; in the float tier ``denom`` is 1 and values are floats.
    ``step[k]`` is ``table[k] - table[k+1]``, the weight an edge loses when
    its level rises from ``k`` to ``k+1``.
    """

    eps: Fraction
    L: int
    exact: bool
    denom: int
    table: list = field(repr=False)
    step: list = field(repr=False)
    zero: Number
    one: Number
    lower: Number  # 1 - eps, start of the passive band above level 0
    upper: Number  # 1 + eps

    @classmethod
    def create(cls, eps, L: int, exact: bool = True) -> "NumericTier":
        eps = parse_eps(eps)
        p, q = eps.numerator, eps.denominator
        if exact:
            denom = q * (p + q) ** L
            table = [q ** (k + 1) * (p + q) ** (L - k) for k in range(L + 1)]
            conv = lambda x: x  # noqa: E731
            one, lower, upper = q * (p + q) ** L, (q - p) * (p + q) ** L, (q + p) * (p + q) ** L
            zero = 0
        else:
            denom = 1
            table = build_weight_table(eps, L, exact=False)
            one, lower, upper, zero = 1.0, float(1 - eps), float(1 + eps), 0.0
        exact_table = build_weight_table(eps, L, exact=True)
        if exact:
            step = [table[k] - table[k + 1] for k in range(L)]
        else:
            step = [float(exact_table[k] - exact_table[k + 1]) for k in range(L)]
        return cls(eps=eps, L=L, exact=exact, denom=denom, table=table, step=step,
                   zero=zero, one=one, lower=lower, upper=upper)

    def to_fraction(self, value) -> Fraction:
        """Exact rational value of a stored weight (floats convert exactly as binary)."""
        if self.exact:
            return Fraction(value, self.denom)
        return Fraction(value)

    def rate(self, k: int) -> Fraction:
        """Energy per unit of potential stored at level ``k``: ``(1+eps)**k / eps``."""
        return (1 + self.eps) ** k / self.eps

    def close(self, a, b, rel: float = 1e-9) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= rel * max(1.0, abs(a), abs(b))
