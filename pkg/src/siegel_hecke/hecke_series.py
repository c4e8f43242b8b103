"""Hecke eigenvalues at prime powers and their multiplicative extension.

The local generating series sums lambda(p^j) t^j and equals
(1 - t^2/p) divided by the reciprocal spinor quartic; expanding the quotient
gives a four-term linear recurrence.  Eigenvalues of composite n multiply
across coprime prime powers and are accumulated in (sign, log|.|) form so
witnesses with thousands of prime factors never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

import mpmath

from .errors import MissingPrime
from .primes import factorize, require_prime

if TYPE_CHECKING:  # pragma: no cover
    from .eigen_table import EigenvalueTable


@dataclass(frozen=True)
class LocalEigenvalues:
    """Normalized eigenvalue data at one prime.

    lambda_p3 and b_p are optional; when absent they are derived on demand
    from the closed forms.  Stored values are trusted as-is here and audited
    separately by table validation.
    """

    p: int
    lambda_p: float
    lambda_p2: float
    lambda_p3: float | None = None
    b_p: float | None = None

    def __post_init__(self):
        require_prime(self.p)


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer carried as sorted (prime, exponent) pairs.

    log_value is computed once from the factorization; the decimal value is
    only materialized on demand since witnesses can have thousands of factors.
    """

    factors: tuple[tuple[int, int], ...]
    log_value: float = field(init=False, compare=False)

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            require_prime(p)
            if p <= last:
                raise ValueError(f"prime factors must be strictly increasing, got {p}")
            if e < 1:
                raise ValueError(f"exponent must be >= 1, got {e} at p={p}")
            last = p
        log_val = math.fsum(e * math.log(p) for p, e in self.factors)
        object.__setattr__(self, "log_value", log_val)

    @classmethod
    def from_int(cls, n: int) -> "FactoredInteger":
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        return cls(factorize(n))

    def value(self) -> int:
        """Exact integer value; beware, this can be astronomically large."""
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def times_coprime(self, other: "FactoredInteger") -> "FactoredInteger":
        """Product with an integer sharing no prime factor."""
        mine = {p for p, _ in self.factors}
        if any(p in mine for p, _ in other.factors):
            raise ValueError("factors are not coprime")
        return FactoredInteger(tuple(sorted(self.factors + other.factors)))


ONE = FactoredInteger(())


def lambda_p3_closed(lam1: float, lam2: float, p: int) -> float:
    """lambda(p^3) = lambda(p) (2 lambda(p^2) - lambda(p)^2 + 1 + 1/p)."""
    return lam1 * (2.0 * lam2 - lam1 * lam1 + 1.0 + 1.0 / p)


def lambda_prime_power(rec: LocalEigenvalues, n: int) -> float:
    """lambda(p^n) by the four-term recursion seeded with the stored values.

    For n >= 3,
      lambda(p^n) = lambda(p) (lambda(p^{n-1}) + lambda(p^{n-3}))
                    - lambda(p^{n-2}) (lambda(p)^2 - lambda(p^2) - 1/p)
                    - lambda(p^{n-4}),
    with lambda at negative exponents taken as 0.  n = 3 uses the closed form
    above, which is the same recursion instance rearranged.
    """
    if n < 0:
        raise ValueError(f"exponent must be >= 0, got {n}")
    if n == 0:
        return 1.0
    if n == 1:
        return rec.lambda_p
    if n == 2:
        return rec.lambda_p2
    if n == 3:
        return lambda_p3_closed(rec.lambda_p, rec.lambda_p2, rec.p)
    a1 = rec.lambda_p
    k = a1 * a1 - rec.lambda_p2 - 1.0 / rec.p
    vals = [1.0, a1, rec.lambda_p2, lambda_p3_closed(a1, rec.lambda_p2, rec.p)]
    for m in range(4, n + 1):
        vals.append(a1 * (vals[m - 1] + vals[m - 3]) - vals[m - 2] * k - vals[m - 4])
    return vals[n]


def lambda_prime_power_series(rec: LocalEigenvalues, n_max: int) -> list[float]:
    """[lambda(p^j) for j <= n_max] by expanding (1 - t^2/p) / spinor quartic.

    Independent route from lambda_prime_power: the j = 2 coefficient comes out
    of the series division instead of being read from the record.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    a1 = rec.lambda_p
    a2 = a1 * a1 - rec.lambda_p2 - 1.0 / rec.p
    coeffs: list[float] = []
    for j in range(n_max + 1):
        v = 1.0 if j == 0 else (-1.0 / rec.p if j == 2 else 0.0)
        if j >= 1:
            v += a1 * coeffs[j - 1]
        if j >= 2:
            v -= a2 * coeffs[j - 2]
        if j >= 3:
            v += a1 * coeffs[j - 3]
        if j >= 4:
            v -= coeffs[j - 4]
        coeffs.append(v)
    return coeffs


def lambda_pr(rec: LocalEigenvalues, r: int) -> float:
    """lambda(p^r), preferring a stored table value over the recursion."""
    if r == 1:
        return rec.lambda_p
    if r == 2:
        return rec.lambda_p2
    if r == 3 and rec.lambda_p3 is not None:
        return rec.lambda_p3
    return lambda_prime_power(rec, r)


def lambda_n_log(
    table: "EigenvalueTable | Mapping[int, LocalEigenvalues]", n: FactoredInteger
) -> tuple[int, float]:
    """(sign, log|lambda(n)|) across the coprime factorization of n.

    Returns (1, 0.0) for n = 1 and sign 0 with log -inf if any local factor
    vanishes.  Raises MissingPrime when a factor has no table entry.
    """
    entries: Mapping[int, LocalEigenvalues] = getattr(table, "entries", table)
    sign = 1
    log_terms: list[float] = []
    for p, e in n.factors:
        rec = entries.get(p)
        if rec is None:
            raise MissingPrime(f"no table entry for prime {p}")
        v = lambda_prime_power(rec, e)
        if v == 0.0:
            return 0, float("-inf")
        if v < 0.0:
            sign = -sign
        log_terms.append(math.log(abs(v)))
    return sign, math.fsum(log_terms)


def normalize_mu(mu: int, n: int, k: int) -> float:
    """Analytic normalization mu(n) / n^(k - 3/2) for even weight k >= 10.

    Evaluated in log space with at least 128 mantissa bits so the result
    keeps full double precision even for |mu| around 10^60.
    """
    if not isinstance(mu, int) or isinstance(mu, bool):
        raise ValueError(f"mu must be an integer, got {mu!r}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if k < 10 or k % 2 != 0:
        raise ValueError(f"weight must be an even integer >= 10, got {k}")
    if mu == 0:
        return 0.0
    sign = 1.0 if mu > 0 else -1.0
    with mpmath.workprec(max(160, mu.bit_length() + 64)):
        log_abs = mpmath.log(abs(mu)) - (mpmath.mpf(k) - mpmath.mpf(3) / 2) * mpmath.log(n)
        value = float(mpmath.exp(log_abs))
    return sign * value


def d_k_count(n: FactoredInteger, k: int) -> int:
    """Number of ordered k-tuples of positive integers with product n."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    out = 1
    for _, e in n.factors:
        out *= math.comb(e + k - 1, k - 1)
    return out


def log_d_k(n: FactoredInteger, k: int) -> float:
    """log d_k(n) without materializing the (possibly huge) count."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    return math.fsum(math.log(math.comb(e + k - 1, k - 1)) for _, e in n.factors)


def growth_bound(log_n: float, c: float) -> float:
    """The extreme-value benchmark c * log n / log log n."""
    if not log_n > 1.0:
        raise ValueError(f"log n must exceed 1, got {log_n!r}")
    return c * log_n / math.log(log_n)
