"""Primality testing and prime search for certificate construction."""

from __future__ import annotations

import gmpy2

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Miller-Rabin with the first 13 primes as bases is exact below this bound.
_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


def _strong_probable_prime(n: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Exact primality for n < 3.3e24; beyond that, BPSW via GMP."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    if n >= _DETERMINISTIC_BOUND:
        return bool(gmpy2.is_bpsw_prp(n))
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return all(_strong_probable_prime(n, b, d, s) for b in _SMALL_PRIMES)


def smallest_prime_above(x: int) -> int:
    """Least prime strictly greater than x."""
    n = max(x + 1, 2)
    if n > 2 and n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 1 if n == 2 else 2
    return n
