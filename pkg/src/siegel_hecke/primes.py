"""Prime utilities: exact sieves and a deterministic primality test.

Counting functions here are always exact; nothing in the package estimates
pi(x) by an asymptotic formula.
"""

from __future__ import annotations

import functools

import numpy as np

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (empty for limit < 2)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


@functools.lru_cache(maxsize=32)
def _sieve_cached(limit: int) -> np.ndarray:
    arr = sieve_primes(limit)
    arr.setflags(write=False)
    return arr


def prime_pi(x: float) -> int:
    """Exact prime-counting function pi(x)."""
    limit = int(x)
    if limit < 2:
        return 0
    # Round the cache key up so nearby queries share one sieve.
    cap = max(limit, 1 << (limit.bit_length()))
    sieved = _sieve_cached(cap)
    return int(np.searchsorted(sieved, limit, side="right"))


def primes_up_to(x: float) -> np.ndarray:
    """Primes <= x, served from the shared sieve cache."""
    limit = int(x)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    cap = max(limit, 1 << (limit.bit_length()))
    sieved = _sieve_cached(cap)
    return sieved[: np.searchsorted(sieved, limit, side="right")]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every integer tested here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> None:
    """Raise ValueError unless p is a prime integer."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool) or not is_prime(int(p)):
        raise ValueError(f"p must be prime, got {p!r}")


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n, for 0 <= n <= limit (spf[0..1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        for p in range(2, limit + 1):
            if spf[p] == 0:
                spf[p::p][spf[p::p] == 0] = p
    return spf


def factorize(n: int, spf: np.ndarray | None = None) -> tuple[tuple[int, int], ...]:
    """Factor n >= 1 into sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"cannot factor {n!r}")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return tuple(out)
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)
