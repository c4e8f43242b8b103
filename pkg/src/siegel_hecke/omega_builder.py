"""Extreme-value witnesses: integers n with |lambda(n)| large and signed.

The construction multiplies one prime power p^r per witness prime, where
every witness carries |lambda(p^r)| >= C > 1, so log |lambda(n)| grows with
the number of witnesses while log n stays near r * N.  Signs are steered by
parity: an even (resp. odd) number of negative local factors makes the
product positive (resp. negative); when no negative witness exists, a small
seed integer n0 with lambda(n0) < 0 flips the sign instead.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigen_table import EigenvalueTable
from .errors import (
    NoNegativeSeed,
    NoWitnessPrimes,
    NumericalFailure,
    RangeExceeded,
    SeedNotFound,
)
from .hecke_series import (
    FactoredInteger,
    growth_bound,
    lambda_n_log,
    lambda_prime_power,
    log_d_k,
)
from .primes import smallest_prime_factors

# JSON payloads list at most this many prime factors; the rest is summarized
# by a count plus a hash of the full canonical factor list.
FACTOR_LISTING_CAP = 10_000


@dataclass(frozen=True)
class OmegaWitness:
    """A constructed witness integer with its accumulated eigenvalue data."""

    n: FactoredInteger
    target_sign: int
    r: int
    source_primes: tuple[int, ...]
    n0: FactoredInteger | None
    sign_lambda: int
    log_abs_lambda: float
    achieved_c: float | None

    def to_json_dict(self) -> dict:
        factors = [[int(p), int(e)] for p, e in self.n.factors]
        canonical = json.dumps(factors, separators=(",", ":")).encode()
        payload: dict = {
            "target_sign": self.target_sign,
            "r": self.r,
            "sign_lambda": self.sign_lambda,
            "log_abs_lambda": self.log_abs_lambda,
            "achieved_c": self.achieved_c,
            "log_n": self.n.log_value,
            "factor_count": len(factors),
            "factors": factors[:FACTOR_LISTING_CAP],
            "factors_sha256": hashlib.sha256(canonical).hexdigest(),
            "source_prime_count": len(self.source_primes),
            "source_primes": [int(p) for p in self.source_primes[:FACTOR_LISTING_CAP]],
            "n0_factors": (
                [[int(p), int(e)] for p, e in self.n0.factors] if self.n0 else None
            ),
            # Benchmarks reported side by side: the divisor-count growth that
            # any bound must beat, and the scale log n / log log n itself.
            "log_d5_n": log_d_k(self.n, 5),
            "log_n_over_log_log_n": (
                self.n.log_value / math.log(self.n.log_value)
                if self.n.log_value > 1.0
                else None
            ),
        }
        return payload


class OmegaCheck(NamedTuple):
    """Outcome of verify_omega: certification flag plus log-scale margin."""

    ok: bool
    margin: float


def witness_primes(
    table: EigenvalueTable, n_max: float, c_threshold: float, r: int
) -> tuple[set[int], set[int], set[int]]:
    """(B, B+, B-): primes p <= n_max with lambda(p^r) beyond +-c_threshold."""
    if r not in (1, 2, 3):
        raise ValueError(f"exponent r must be 1, 2 or 3, got {r}")
    if not c_threshold > 1.0:
        raise ValueError(f"threshold must exceed 1, got {c_threshold!r}")
    if n_max > table.x_max:
        raise RangeExceeded(f"N={n_max} exceeds the table coverage x_max={table.x_max}")
    p, lam, lam2, lam3, _ = table.columns()
    hi = int(np.searchsorted(p, math.floor(n_max), side="right"))
    values = (lam, lam2, lam3)[r - 1][:hi]
    p = p[:hi]
    plus = {int(q) for q in p[values >= c_threshold]}
    minus = {int(q) for q in p[values <= -c_threshold]}
    return plus | minus, plus, minus


def find_negative_seed(table: EigenvalueTable, limit: int) -> FactoredInteger:
    """Smallest integer n <= limit over the table's primes with lambda(n) < 0.

    Prime powers count: a table whose lambda(p) are all positive can still
    seed a sign flip through lambda(p^2) < 0.  Raises SeedNotFound past limit.
    """
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    spf = smallest_prime_factors(limit)
    local_cache: dict[tuple[int, int], float] = {}
    for m in range(2, limit + 1):
        n = m
        factors: list[tuple[int, int]] = []
        supported = True
        while n > 1:
            q = int(spf[n])
            if q not in table.entries:
                supported = False
                break
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            factors.append((q, e))
        if not supported:
            continue
        sign = 1
        for q, e in factors:
            key = (q, e)
            v = local_cache.get(key)
            if v is None:
                v = lambda_prime_power(table.entries[q], e)
                local_cache[key] = v
            if v == 0.0:
                sign = 0
                break
            if v < 0.0:
                sign = -sign
        if sign < 0:
            return FactoredInteger(tuple(factors))
    raise SeedNotFound(f"no integer up to {limit} over the table primes has lambda < 0")


def _sign_subset(minus: list[int], want_odd: bool) -> list[int]:
    """Largest prefix of the sorted negative witnesses with the wanted parity."""
    keep = len(minus) if (len(minus) % 2 == (1 if want_odd else 0)) else len(minus) - 1
    return minus[:keep]


def build_witness(
    table: EigenvalueTable,
    n_max: float,
    c_threshold: float,
    target_sign: int,
    seed_search_limit: int = 10_000,
) -> OmegaWitness:
    """Assemble a witness integer of the requested sign.

    The exponent r in {1, 2, 3} maximizing the witness count is chosen first
    (ties to the smallest r).  Sign +1 multiplies the positive witnesses, or
    an even-cardinality prefix of the negative ones when those dominate.
    Sign -1 prefers an odd-cardinality prefix of the negative witnesses and
    otherwise multiplies a negative seed n0 into the positive witnesses
    coprime to it.
    """
    if target_sign not in (1, -1):
        raise ValueError(f"target_sign must be +1 or -1, got {target_sign!r}")
    by_r = {r: witness_primes(table, n_max, c_threshold, r) for r in (1, 2, 3)}
    r = max((1, 2, 3), key=lambda rr: (len(by_r[rr][0]), -rr))
    full, plus, minus = by_r[r]
    if not full:
        raise NoWitnessPrimes(
            f"no prime up to {n_max} has |lambda(p^r)| >= {c_threshold} for any r"
        )
    plus_sorted = sorted(plus)
    minus_sorted = sorted(minus)
    n0: FactoredInteger | None = None

    if target_sign == 1:
        if len(minus) > len(plus):
            chosen = _sign_subset(minus_sorted, want_odd=False)
        else:
            chosen = plus_sorted
        if not chosen:
            raise NoWitnessPrimes(
                "cannot reach sign +1: the only witness carries a negative eigenvalue"
            )
    else:
        if len(minus) >= max(len(plus), 1):
            chosen = _sign_subset(minus_sorted, want_odd=True)
        else:
            try:
                n0 = find_negative_seed(table, seed_search_limit)
            except SeedNotFound as exc:
                raise NoNegativeSeed(
                    f"sign -1 unreachable: no negative witness up to {n_max} and "
                    f"no negative seed up to {seed_search_limit}"
                ) from exc
            n0_primes = {q for q, _ in n0.factors}
            chosen = [q for q in plus_sorted if q not in n0_primes]

    n = FactoredInteger(tuple((q, r) for q in chosen))
    if n0 is not None:
        n = n0.times_coprime(n)
    sign, log_abs = lambda_n_log(table, n)
    if sign != target_sign:
        raise NumericalFailure(
            f"constructed witness has sign {sign}, wanted {target_sign}"
        )
    log_n = n.log_value
    achieved = None
    if log_n > 1.0 and log_abs > float("-inf"):
        achieved = log_abs * math.log(log_n) / log_n
    return OmegaWitness(
        n=n,
        target_sign=target_sign,
        r=r,
        source_primes=tuple(chosen),
        n0=n0,
        sign_lambda=sign,
        log_abs_lambda=log_abs,
        achieved_c=achieved,
    )


def verify_omega(witness: OmegaWitness, c: float) -> OmegaCheck:
    """Does the witness certify |lambda(n)| >= exp(c log n / log log n)?

    Returns (ok, margin) with margin = log|lambda(n)| minus the benchmark in
    log scale; requires log n > e so the benchmark is monotone in c.
    """
    log_n = witness.n.log_value
    if not log_n > math.e:
        raise ValueError(f"witness too small: need log n > e, got {log_n!r}")
    benchmark = growth_bound(log_n, c)
    margin = witness.log_abs_lambda - benchmark
    ok = witness.sign_lambda == witness.target_sign and witness.log_abs_lambda >= benchmark
    return OmegaCheck(ok, margin)
