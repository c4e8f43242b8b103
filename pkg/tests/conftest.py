"""Shared fixtures and independent oracles for the test suite.

The oracle helpers here deliberately avoid the library's own formulas:
coefficients come from direct products of spinor roots, prime-power
eigenvalues from complete homogeneous symmetric sums, and so on. Tests
compare library output against these independent routes.
"""

from __future__ import annotations

import cmath
import itertools
import math

import pytest

from siegel_hecke.eigen_table import EigenvalueTable, MODE_NORMALIZED
from siegel_hecke.hecke_series import LocalEigenvalues


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def spinor_roots_oracle(phi: float, psi: float) -> list[complex]:
    """The four spinor Satake parameters as raw complex exponentials."""
    a0 = cmath.exp(1j * phi)
    a1 = cmath.exp(1j * (psi - phi))
    return [a0, a0 * a1, a0.conjugate(), (a0 * a1).conjugate()]


def lambda_p_oracle(phi: float, psi: float) -> float:
    return sum(spinor_roots_oracle(phi, psi)).real


def e2_oracle(phi: float, psi: float) -> float:
    """Second elementary symmetric function of the spinor roots."""
    roots = spinor_roots_oracle(phi, psi)
    total = 0j
    for a, b in itertools.combinations(roots, 2):
        total += a * b
    return total.real


def b_oracle(phi: float, psi: float) -> float:
    # Trace of the degree-5 standard parameter {1, a1^(+-1), a2^(+-1)}.
    a1 = cmath.exp(1j * (psi - phi))
    a2 = cmath.exp(-1j * (psi + phi))
    betas = [1.0 + 0j, a1, 1 / a1, a2, 1 / a2]
    return sum(betas).real


def h_j_oracle(phi: float, psi: float, j: int) -> float:
    """lambda(p^j) pre-correction: complete homogeneous symmetric sum h_j."""
    roots = spinor_roots_oracle(phi, psi)
    total = 0j
    for combo in itertools.combinations_with_replacement(roots, j):
        total += math.prod(combo)
    return total.real


def lambda_pj_oracle(phi: float, psi: float, p: int, j: int) -> float:
    """Eigenvalue of T(p^j) via symmetric sums.

    The generating identity sum_j lambda(p^j) t^j = (1 - t^2/p) / prod(1 - at)
    over the four spinor roots gives lambda(p^j) = h_j - h_{j-2}/p.
    """
    if j == 0:
        return 1.0
    if j == 1:
        return h_j_oracle(phi, psi, 1)
    return h_j_oracle(phi, psi, j) - h_j_oracle(phi, psi, j - 2) / p


def prime_pi_oracle(x: int) -> int:
    """Trial-division prime count; slow but obviously correct."""
    count = 0
    for n in range(2, x + 1):
        if all(n % d for d in range(2, int(math.isqrt(n)) + 1)):
            count += 1
    return count


def d5_oracle(n: int) -> int:
    """Number of ways to write n as an ordered product of 5 positive ints."""
    if n == 1:
        return 1
    count = 0
    for a in range(1, n + 1):
        if n % a:
            continue
        for b in range(1, n // a + 1):
            if (n // a) % b:
                continue
            for c in range(1, n // (a * b) + 1):
                if (n // (a * b)) % c:
                    continue
                rest = n // (a * b * c)
                # d * e = rest: one choice per divisor of rest
                count += sum(1 for d in range(1, rest + 1) if rest % d == 0)
    return count


# ---------------------------------------------------------------------------
# Toy tables used across modules
# ---------------------------------------------------------------------------


def make_table(entries, x_max, k=20, allow_nontempered=False):
    table = {e.p: e for e in entries}
    return EigenvalueTable(
        weight_k=k,
        mode=MODE_NORMALIZED,
        entries=table,
        x_max=x_max,
        provenance="test fixture",
        allow_nontempered=allow_nontempered,
    )


_FIRST_NINE = (2, 3, 5, 7, 11, 13, 17, 19, 23)


def case1_toy_table() -> EigenvalueTable:
    """Five primes, three of them with lambda above 1: branch-1 bait."""
    lams = {2: 1.5, 3: 1.5, 5: 1.5, 7: 0.2, 11: 0.2}
    entries = [LocalEigenvalues(p, lam, 0.0) for p, lam in lams.items()]
    return make_table(entries, x_max=11)


def v2_toy_table() -> EigenvalueTable:
    """All lambda just below 1, b = 3 everywhere: branch-2 bait.

    lambda(p^2) is chosen consistent with b so re-verification passes:
    b = lam^2 - lam2 - 1 - 1/p  =>  lam2 = lam^2 - b - 1 - 1/p.
    """
    entries = [
        LocalEigenvalues(p, 0.95, 0.95 * 0.95 - 3.0 - 1.0 - 1.0 / p, None, 3.0)
        for p in _FIRST_NINE
    ]
    return make_table(entries, x_max=23)


def v3_toy_table() -> EigenvalueTable:
    """All lambda just below 1, b = 1: skips branch 2, lands in branch 3."""
    entries = [
        LocalEigenvalues(p, 0.95, 0.95 * 0.95 - 1.0 - 1.0 - 1.0 / p, None, 1.0)
        for p in _FIRST_NINE
    ]
    return make_table(entries, x_max=23)


def inconclusive_toy_table() -> EigenvalueTable:
    """b says branch 2 but the stored lambda(p^2) refuses to verify."""
    entries = [
        LocalEigenvalues(p, 0.95, 0.5, None, 2.2) for p in _FIRST_NINE
    ]
    return make_table(entries, x_max=23)


def omega_toy_table() -> EigenvalueTable:
    """Three primes with signs +, -, + and small second-layer values."""
    entries = [
        LocalEigenvalues(2, 1.5, 0.1),
        LocalEigenvalues(3, -1.5, 0.1),
        LocalEigenvalues(5, 0.2, 0.1),
    ]
    return make_table(entries, x_max=5)


# ---------------------------------------------------------------------------
# Session fixtures
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def haar_table_small():
    from siegel_hecke.eigen_table import FamilyModel, synth_family

    return synth_family(FamilyModel("haar-weyl", seed=7, x_max=2000))


@pytest.fixture(scope="session")
def haar_table_medium():
    from siegel_hecke.eigen_table import FamilyModel, synth_family

    return synth_family(FamilyModel("haar-weyl", seed=42, x_max=100_000))


@pytest.fixture(scope="session")
def sk_table_small():
    from siegel_hecke.eigen_table import FamilyModel, synth_family

    return synth_family(FamilyModel("sk-lift", seed=11, x_max=2000))
