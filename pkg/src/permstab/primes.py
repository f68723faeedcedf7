"""Deterministic Miller-Rabin for 64-bit integers."""

from __future__ import annotations

# The first twelve primes are a complete witness set below 3.3e24, which covers 2^64.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
LIMIT = 1 << 64


class PrimalityRangeError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n >= LIMIT:
        raise PrimalityRangeError(f"{n} is beyond the 64-bit range of the deterministic test")
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    if n <= 2:
        return 2
    p = n | 1
    while not is_prime(p):
        p += 2
    return p
