"""Small number-theoretic helpers: primality, Lucas binomials, Adem coefficients."""

from __future__ import annotations

import math


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def validate_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime integer, got {p!r}")
    return p


def lucas_binom(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p by Lucas' theorem; 0 for out-of-range arguments."""
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        result = (result * math.comb(nd, kd)) % p
        n //= p
        k //= p
    return result


def adem_coefficient(p: int, i: int, j: int, t: int) -> int:
    """Coefficient of the t-th term on the admissible side of the relation
    rewriting P^i P^j (i < pj), reduced into [0, p-1].

    For p > 2 this is (-1)^(i+t) * binom((p-1)(j-t)-1, i-pt); for p = 2 it is
    binom(2j-2t-1, 2i-4t).  Out-of-range binomials vanish.
    """
    validate_prime(p)
    if i <= 0 or j <= 0 or i >= p * j:
        raise ValueError(f"need i, j > 0 and i < pj, got i={i}, j={j}")
    if t < 0 or t > i // p:
        raise ValueError(f"t must lie in [0, floor(i/p)], got t={t}")
    if p == 2:
        return lucas_binom(2 * j - 2 * t - 1, 2 * i - 4 * t, 2)
    sign = -1 if (i + t) % 2 else 1
    return (sign * lucas_binom((p - 1) * (j - t) - 1, i - p * t, p)) % p


def fermat_quotient(c: int, p: int) -> int:
    """(c - c^p)/p, an exact integer by Fermat's little theorem."""
    num = c - c**p
    q, r = divmod(num, p)
    if r:
        raise ArithmeticError(f"({c} - {c}^{p}) is not divisible by {p}")
    return q
