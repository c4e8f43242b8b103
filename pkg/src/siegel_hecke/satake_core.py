"""Local Satake algebra for degree-2 symplectic Hecke eigenforms.

Everything here is per-prime.  A tempered local parameter is a pair of class
angles (phi, psi): the degree-4 spinor factor has the unit-circle roots
{e^{+-i phi}, e^{+-i psi}}, and every derived quantity is a real symmetric
function of those roots,

    lambda(p)   = 2 cos phi + 2 cos psi,
    lambda(p^2) = e1^2 - e2 - 1/p          (e1, e2 elementary symmetric),
    b(p)        = 1 + 2 cos(psi - phi) + 2 cos(psi + phi),

where b(p) is minus the linear coefficient of the degree-5 standard factor.
Recovery of the angles from (lambda(p), lambda(p^2)) inverts the palindromic
quartic through the substitution u = t + 1/t.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NotTempered, NumericalFailure
from .hecke_series import LocalEigenvalues
from .primes import require_prime

# Margin below a bound at which ramanujan_check attaches a warning.
NEAR_BOUNDARY_MARGIN = 1e-9


@dataclass(frozen=True)
class SatakeParams:
    """Conjugacy-class angles of a tempered local parameter.

    Both angles lie in [0, pi].  Closure of the root multiset under complex
    conjugation makes every derived eigenvalue real, and |lambda(p)| <= 4,
    |b(p)| <= 5 hold exactly (not merely to rounding) for any angle pair.
    """

    phi: float
    psi: float

    def __post_init__(self):
        for name, value in (("phi", self.phi), ("psi", self.psi)):
            if not 0.0 <= value <= math.pi:
                raise ValueError(f"{name} must lie in [0, pi], got {value!r}")

    def spinor_roots(self) -> tuple[complex, complex, complex, complex]:
        """The four unit-circle roots of the spinor quartic."""
        return (
            cmath.exp(1j * self.phi),
            cmath.exp(1j * self.psi),
            cmath.exp(-1j * self.psi),
            cmath.exp(-1j * self.phi),
        )

    def alpha(self) -> tuple[complex, complex, complex]:
        """Satake triple (a0, a1, a2); a0^2 a1 a2 = 1 by construction."""
        return (
            cmath.exp(1j * self.phi),
            cmath.exp(1j * (self.psi - self.phi)),
            cmath.exp(-1j * (self.psi + self.phi)),
        )

    def canonical(self) -> "SatakeParams":
        """Order the angles as phi <= psi; derived quantities are symmetric."""
        if self.phi <= self.psi:
            return self
        return SatakeParams(self.psi, self.phi)


@dataclass(frozen=True)
class SpinQuartic:
    """Coefficients (c0..c4) of the reciprocal degree-4 spinor factor."""

    coeffs: tuple[float, float, float, float, float]

    def __post_init__(self):
        c = self.coeffs
        if len(c) != 5:
            raise ValueError("spin quartic needs exactly 5 coefficients")
        if not (c[0] == 1.0 and c[4] == 1.0 and c[1] == c[3]):
            raise ValueError(f"not palindromic with unit ends: {c!r}")

    def __call__(self, t: complex) -> complex:
        c = self.coeffs
        return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0]


@dataclass(frozen=True)
class StdQuintic:
    """Coefficients (d0..d5) of the reciprocal degree-5 standard factor.

    Anti-palindromic (d_j = -d_{5-j}) with d0 = 1; t = 1 is always a root.
    """

    coeffs: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        d = self.coeffs
        if len(d) != 6:
            raise ValueError("std quintic needs exactly 6 coefficients")
        if not (d[0] == 1.0 and d[5] == -1.0 and d[1] == -d[4] and d[2] == -d[3]):
            raise ValueError(f"not anti-palindromic with unit ends: {d!r}")

    def __call__(self, t: complex) -> complex:
        out: complex = self.coeffs[5]
        for c in reversed(self.coeffs[:5]):
            out = out * t + c
        return out


def _alpha_cos_sum(params: SatakeParams) -> float:
    # 2 cos(psi - phi) + 2 cos(psi + phi); shared verbatim by b_p and
    # std_local_poly so the quintic's linear coefficient equals -b_p exactly.
    return 2.0 * math.cos(params.psi - params.phi) + 2.0 * math.cos(params.psi + params.phi)


def lambda_p(params: SatakeParams) -> float:
    """Hecke eigenvalue at p: the sum of the four spinor roots."""
    return 2.0 * math.cos(params.phi) + 2.0 * math.cos(params.psi)


def lambda_p2(params: SatakeParams, p: int) -> float:
    """Hecke eigenvalue at p^2: sum over root pairs (i <= j) minus 1/p."""
    require_prime(p)
    e1 = lambda_p(params)
    e2 = 2.0 + _alpha_cos_sum(params)
    return (e1 * e1 - e2) - 1.0 / p


def b_p(params: SatakeParams) -> float:
    """Trace of the degree-5 standard parameter: 1 + sum of alpha_{1,2}^{+-1}."""
    return 1.0 + _alpha_cos_sum(params)


def b_from_lambdas(lp: float, lp2: float, p: int) -> float:
    """b(p) from the two stored eigenvalues: lambda(p)^2 - lambda(p^2) - 1 - 1/p."""
    require_prime(p)
    return lp * lp - lp2 - 1.0 - 1.0 / p


def spin_local_poly(lp: float, lp2: float, p: int) -> SpinQuartic:
    """Reciprocal spinor quartic (1, -lambda(p), e2, -lambda(p), 1).

    The middle coefficient e2 = lambda(p)^2 - lambda(p^2) - 1/p is the pair
    sum of the roots; palindromy encodes their closure under inversion.
    """
    require_prime(p)
    e2 = lp * lp - lp2 - 1.0 / p
    return SpinQuartic((1.0, -lp, e2, -lp, 1.0))


def std_local_poly(params: SatakeParams) -> StdQuintic:
    """Reciprocal standard quintic (1-t)(1 - a1 t)(1 - a1^-1 t)(1 - a2 t)(1 - a2^-1 t)."""
    s = _alpha_cos_sum(params)
    c1 = math.cos(params.psi - params.phi)
    c2 = math.cos(params.psi + params.phi)
    m = 2.0 + 4.0 * c1 * c2
    d1 = -(1.0 + s)
    d2 = m + s
    return StdQuintic((1.0, d1, d2, -d2, -d1, -1.0))


def recover_satake(lp: float, lp2: float, p: int, tol: float = 1e-9) -> SatakeParams:
    """Invert (lambda(p), lambda(p^2)) back to class angles with phi <= psi.

    The palindromic quartic collapses under u = t + 1/t to
    u^2 - lambda(p) u + (e2 - 2), whose roots are 2 cos phi and 2 cos psi.
    Each u lifts to a root pair of t^2 - u t + 1; if any lifted root sits off
    the unit circle by more than tol the data is rejected as NotTempered.
    """
    require_prime(p)
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    e2 = lp * lp - lp2 - 1.0 / p
    c = e2 - 2.0
    disc = lp * lp - 4.0 * c
    if disc >= 0.0:
        # Stable real quadratic: large root first, small root via the product.
        sq = math.sqrt(disc)
        big = 0.5 * (lp + sq) if lp >= 0.0 else 0.5 * (lp - sq)
        if big == 0.0:
            u_roots: tuple[complex, complex] = (0.0 + 0.0j, 0.0 + 0.0j)
        else:
            u_roots = (complex(big), complex(c / big))
    else:
        sq_c = cmath.sqrt(complex(disc, 0.0))
        u_roots = (0.5 * (lp + sq_c), 0.5 * (lp - sq_c))

    deviation = 0.0
    for u in u_roots:
        t_root = 0.5 * (u + cmath.sqrt(u * u - 4.0))
        if t_root == 0.0:  # pragma: no cover - root pair has product 1
            t_root = 0.5 * (u - cmath.sqrt(u * u - 4.0))
        r = abs(t_root)
        deviation = max(deviation, abs(r - 1.0), abs(1.0 / r - 1.0))
    if deviation > tol:
        raise NotTempered(
            f"spinor roots leave the unit circle by {deviation:.6e} (tol {tol:.1e})",
            deviation=deviation,
        )

    angles = sorted(math.acos(min(1.0, max(-1.0, 0.5 * u.real))) for u in u_roots)
    params = SatakeParams(angles[0], angles[1])
    back_lp = lambda_p(params)
    back_lp2 = lambda_p2(params, p)
    if abs(back_lp - lp) > tol * max(1.0, abs(lp)) or abs(back_lp2 - lp2) > tol * max(
        1.0, abs(lp2)
    ):
        raise NumericalFailure(
            f"recovered angles reproduce ({back_lp!r}, {back_lp2!r}) "
            f"instead of ({lp!r}, {lp2!r})"
        )
    return params


@dataclass(frozen=True)
class BoundCheck:
    """One eigenvalue bound: margin = bound - |value| (negative on failure)."""

    name: str
    value: float
    bound: float
    margin: float
    passed: bool


@dataclass(frozen=True)
class RamanujanReport:
    """Temperedness screen for one local eigenvalue record."""

    p: int
    checks: tuple[BoundCheck, ...]
    warnings: tuple[str, ...]
    b_derived: bool

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def ramanujan_check(
    rec: LocalEigenvalues, warn_margin: float = NEAR_BOUNDARY_MARGIN
) -> RamanujanReport:
    """Check |lambda(p)| <= 4, |lambda(p^2)| <= 10 + 1/p, |b(p)| <= 5.

    Passing all three is necessary (coarse, not sufficient) for temperedness.
    Data sitting within warn_margin of a bound passes but gets a warning.
    """
    p = rec.p
    b_derived = rec.b_p is None
    b_val = b_from_lambdas(rec.lambda_p, rec.lambda_p2, p) if b_derived else rec.b_p
    raw = (
        ("lambda_p", rec.lambda_p, 4.0),
        ("lambda_p2", rec.lambda_p2, 10.0 + 1.0 / p),
        ("b_p", b_val, 5.0),
    )
    checks = tuple(
        BoundCheck(name, value, bound, bound - abs(value), abs(value) <= bound)
        for name, value, bound in raw
    )
    warnings = tuple(
        f"{check.name} within {warn_margin:g} of its bound (margin {check.margin:.3e})"
        for check in checks
        if check.passed and check.margin < warn_margin
    )
    return RamanujanReport(p=p, checks=checks, warnings=warnings, b_derived=b_derived)
