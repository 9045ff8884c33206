"""Closed-form frequencies of convergent games, as exact fractions.

``p1(n, m)`` is the frequency of convergent games with a unique PSNE among
random n-player, m-strategy games; ``p2_k(m, k)`` is the frequency of
convergent 2-player games with exactly ``k`` PSNEs.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, perm

# Coefficients of 1/m**j inside the bracket, for each player count; the
# bracket is scaled by 1/m**(n-1).
_EXPANSIONS = {
    2: (2, -1),
    3: (3, -3, 3, -3, 1),
    4: (4, -4, 0, 6, -8, 2, 4, -6, 4, -1),
    5: (5, -5, 0, 0, 10, -15, 5, 0, 10, -20, 15, -5, 5, -10, 10, -5, 1),
}


def _check(n: int, m: int) -> None:
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")


def p1(n: int, m: int) -> Fraction:
    _check(n, m)
    r = Fraction(m - 1, m**n) + 1
    return r ** (n - 1) + (m - 1) / (m - r) * ((r / m) ** (n - 1) - 1)


def p1_expansion(n: int, m: int) -> Fraction:
    """Polynomial-in-``1/m`` form of :func:`p1` for ``n`` in 2..5."""
    if n not in _EXPANSIONS:
        raise ValueError(f"expansion only available for n in 2..5, got n={n}")
    _check(n, m)
    x = Fraction(1, m)
    return x ** (n - 1) * sum(c * x**j for j, c in enumerate(_EXPANSIONS[n]))


def p2_k(m: int, k: int) -> Fraction:
    _check(2, m)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > m:
        return Fraction(0)
    return Fraction((2 * m - k) * perm(m, k) ** 2, m ** (2 * k + 2) * factorial(k - 1))


def convergent_freq_2p(m: int) -> Fraction:
    return sum((p2_k(m, k) for k in range(1, m + 1)), Fraction(0))


def type_b_freq_2p(m: int) -> Fraction:
    return sum((p2_k(m, k) for k in range(2, m + 1)), Fraction(0))


def crossover_m(limit: int = 1000) -> int:
    """Smallest ``m`` where multi-PSNE convergent 2-player games outnumber unique-PSNE ones."""
    for m in range(2, limit + 1):
        if type_b_freq_2p(m) > p1(2, m):
            return m
    raise RuntimeError(f"no crossover found up to m={limit}")
