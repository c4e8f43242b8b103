"""Threshold sets, prime-sum calibration, and the distribution classifier.

The classifier turns a counting argument into a decision procedure.  Writing
V_i(a, b; x) for the primes p <= x with a <= |lambda(p^i)| < b, the decision
tree is:

  1. If V_1(1 + eta1, oo; x) already has density >= delta1, report case P1-i
     with exponent 1.
  2. Otherwise split on how often the degree-5 trace is large: if
     |{p <= x : |b(p)| > b_high}| exceeds b_high_density * pi(x), the primes
     with large |b(p)| but small |lambda(p)| force |lambda(p^2)| >= c2
     (case P1ii-V2, exponent 2).
  3. Otherwise the middle band 1 - eta2 <= |lambda(p)| < 1 + eta1 with
     |b(p)| >= b_band_low forces |lambda(p^3)| >= c3 (case P1ii-V3,
     exponent 3).

Every branch re-verifies its witness set element by element against the
table before reporting; a report is never returned with witnesses that fail
|lambda(p^i)| >= c on recomputation.  The numeric hypotheses behind the
branches are re-derived by audit_constants from the configured thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Union

import numpy as np

from .eigen_table import EigenvalueTable
from .errors import RangeExceeded
from .primes import prime_pi

CASE_P1_I = "P1-i"
CASE_P1II_V2 = "P1ii-V2"
CASE_P1II_V3 = "P1ii-V3"
CASE_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ThresholdConfig:
    """Every constant the classifier and its audit depend on.

    Defaults are the full-scale values; test_scale() shrinks only the scale
    couplings (prime cutoff, calibration tolerance, density floor) so the
    identical decision tree can be exercised on desk-size tables.
    """

    eta1: float = 1e-10
    eta2: float = 0.1
    c2: float = 1.09
    c3: float = 1.02
    delta1: float = 1e-5
    delta2: float = 0.98
    delta_v2: float = 9e-4
    delta_v3: float = 1 / 25
    delta_final: float = 1e-5
    b_high: float = 2.1
    b_band_low: float = 6 / 7
    b_band_high: float = 2.1
    b_high_density: float = 1e-3
    b_band_density: float = 1 / 16
    prime_cutoff: int = 10_000
    pnt_rel_tol: float = 1e-6
    pi_ratio: float = 999 / 1000
    c1_override: float | None = None

    def __post_init__(self):
        if not 0.0 < self.eta1 < self.eta2 < 1.0:
            raise ValueError("need 0 < eta1 < eta2 < 1")
        for name in ("delta1", "delta2", "delta_v2", "delta_v3", "delta_final",
                     "b_high_density", "b_band_density"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")
        if not 0.0 < self.b_band_low < self.b_band_high:
            raise ValueError("need 0 < b_band_low < b_band_high")
        if self.prime_cutoff < 2:
            raise ValueError("prime_cutoff must be >= 2")
        if not self.pnt_rel_tol > 0.0:
            raise ValueError("pnt_rel_tol must be positive")
        if not 0.0 < self.pi_ratio <= 1.0:
            raise ValueError("pi_ratio must lie in (0, 1]")

    @property
    def c1(self) -> float:
        """Case-1 threshold, tied to eta1 unless overridden."""
        return 1.0 + self.eta1 if self.c1_override is None else self.c1_override

    @classmethod
    def full_scale(cls) -> "ThresholdConfig":
        return cls()

    @classmethod
    def test_scale(cls) -> "ThresholdConfig":
        return cls(prime_cutoff=10, pnt_rel_tol=0.05, pi_ratio=0.9)

    def with_overrides(self, **kwargs) -> "ThresholdConfig":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["c1"] = self.c1
        return out


FULL_SCALE_CONFIG = ThresholdConfig.full_scale()
TEST_SCALE_CONFIG = ThresholdConfig.test_scale()


def _sliced_columns(table: EigenvalueTable, x: float):
    if x > table.x_max:
        raise RangeExceeded(f"x={x} exceeds the table coverage x_max={table.x_max}")
    p, lam, lam2, lam3, b = table.columns()
    hi = int(np.searchsorted(p, math.floor(x), side="right"))
    return p[:hi], lam[:hi], lam2[:hi], lam3[:hi], b[:hi]


def v_set(table: EigenvalueTable, i: int, a: float, b: float, x: float) -> set[int]:
    """{p <= x : a <= |lambda(p^i)| < b} for i in {1, 2, 3}.

    lambda(p^3) is taken from the table when stored and from the closed form
    otherwise.  The upper cut b may be math.inf.
    """
    if i not in (1, 2, 3):
        raise ValueError(f"exponent i must be 1, 2 or 3, got {i}")
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    p, lam, lam2, lam3, _ = _sliced_columns(table, x)
    values = (lam, lam2, lam3)[i - 1]
    absv = np.abs(values)
    mask = (absv >= a) & (absv < b)
    return {int(q) for q in p[mask]}


@dataclass(frozen=True)
class PntReport:
    """Both calibration prime sums at x and their relative errors against x."""

    x: float
    sum_lambda_sq_log: float
    sum_b_sq_log: float
    rel_err_lambda: float
    rel_err_b: float


def pnt_sums(table: EigenvalueTable, x: float) -> PntReport:
    """Sum lambda(p)^2 log p and b(p)^2 log p over p <= x.

    For tempered data drawn from the calibrated class density both sums grow
    like x; the relative errors |sum - x| / x quantify that.
    """
    if not x > 0.0:
        raise ValueError(f"x must be positive, got {x!r}")
    p, lam, _, _, b = _sliced_columns(table, x)
    logs = np.log(p) if len(p) else np.empty(0)
    s_lam = float(np.dot(lam * lam, logs))
    s_b = float(np.dot(b * b, logs))
    return PntReport(
        x=x,
        sum_lambda_sq_log=s_lam,
        sum_b_sq_log=s_b,
        rel_err_lambda=abs(s_lam - x) / x,
        rel_err_b=abs(s_b - x) / x,
    )


@dataclass(frozen=True)
class X0Report:
    """The three admissibility conditions a scan point x must satisfy."""

    x: float
    pnt: PntReport
    pi_x: int
    pi_cutoff: int
    x_over_log_x: float
    calibrated: bool        # both prime sums within pnt_rel_tol of x
    cutoff_negligible: bool  # pi(prime_cutoff) <= pnt_rel_tol * pi(x)
    pi_lower_bound: bool     # pi_ratio * pi(x) <= x / log x

    @property
    def all_pass(self) -> bool:
        return self.calibrated and self.cutoff_negligible and self.pi_lower_bound


def x0_conditions(table: EigenvalueTable, x: float, cfg: ThresholdConfig) -> X0Report:
    """Evaluate the scan-point admissibility conditions at x."""
    pnt = pnt_sums(table, x)
    pi_x = prime_pi(x)
    pi_cut = prime_pi(cfg.prime_cutoff)
    x_over_log = x / math.log(x) if x > 1 else math.inf
    return X0Report(
        x=x,
        pnt=pnt,
        pi_x=pi_x,
        pi_cutoff=pi_cut,
        x_over_log_x=x_over_log,
        calibrated=(
            pnt.rel_err_lambda <= cfg.pnt_rel_tol and pnt.rel_err_b <= cfg.pnt_rel_tol
        ),
        cutoff_negligible=(pi_cut <= cfg.pnt_rel_tol * pi_x),
        pi_lower_bound=(cfg.pi_ratio * pi_x <= x_over_log),
    )


@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of the decision tree at one scan point.

    For a non-inconclusive case every listed witness satisfies
    |lambda(p^exponent_i)| >= threshold_c on recomputation from the table,
    and density = witness_count / pi_x clears the case's density floor.
    """

    x: float
    case: str
    exponent_i: int
    threshold_c: float
    witness_count: int
    pi_x: int
    density: float
    diagnostics: dict
    witness_primes: tuple[int, ...]


def _reverify(table: EigenvalueTable, candidates, i: int, c: float) -> list[int]:
    """Element-by-element recomputation of |lambda(p^i)| >= c from the entries."""
    from .hecke_series import lambda_pr

    verified = []
    for p in candidates:
        rec = table.entries[int(p)]
        if abs(lambda_pr(rec, i)) >= c:
            verified.append(int(p))
    return verified


def classify_case(table: EigenvalueTable, x: float, cfg: ThresholdConfig) -> ClassificationReport:
    """Run the decision tree at x and return a re-verified report."""
    p, lam, lam2, lam3, b = _sliced_columns(table, x)
    pi_x = prime_pi(x)
    if pi_x == 0:
        raise RangeExceeded(f"no primes up to x={x}")
    abs_lam = np.abs(lam)
    abs_b = np.abs(b)

    low_count = int(np.count_nonzero(abs_lam < 1.0 - cfg.eta2))
    band_count = int(np.count_nonzero((abs_lam >= 1.0 - cfg.eta2) & (abs_lam < cfg.c1)))
    high_count = int(np.count_nonzero(abs_lam >= cfg.c1))
    b_high_count = int(np.count_nonzero(abs_b > cfg.b_high))
    b_band_count = int(
        np.count_nonzero((abs_b >= cfg.b_band_low) & (abs_b <= cfg.b_band_high))
    )
    b_low_count = int(np.count_nonzero(abs_b < cfg.b_band_low))

    diagnostics: dict = {
        "lambda_below_band": low_count,
        "lambda_in_band": band_count,
        "lambda_above_c1": high_count,
        "b_above_high": b_high_count,
        "b_in_band": b_band_count,
        "b_below_band": b_low_count,
        "table_primes_scanned": int(len(p)),
    }

    if high_count >= cfg.delta1 * pi_x:
        # Case 1: the top band is already dense enough at exponent 1.
        candidates = p[abs_lam >= cfg.c1]
        i, c, floor, strict = 1, cfg.c1, cfg.delta1, False
        branch = CASE_P1_I
    elif b_high_count > cfg.b_high_density * pi_x:
        # Case 2: many large |b(p)| among small |lambda(p)| force exponent 2.
        mask = (abs_b > cfg.b_high) & (abs_lam < cfg.c1) & (p > cfg.prime_cutoff)
        candidates = p[mask]
        i, c, floor, strict = 2, cfg.c2, cfg.delta_v2, True
        branch = CASE_P1II_V2
    else:
        # Case 3: the middle lambda band with moderate |b(p)| forces exponent 3
        # (the chain passes through |lambda(p^2)| >= 2/3, tracked below).
        mask = (
            (abs_lam >= 1.0 - cfg.eta2)
            & (abs_lam < cfg.c1)
            & (abs_b >= cfg.b_band_low)
            & (p > cfg.prime_cutoff)
        )
        candidates = p[mask]
        diagnostics["v2_intermediate_failures"] = int(
            np.count_nonzero(np.abs(lam2[mask]) < 2.0 / 3.0)
        )
        i, c, floor, strict = 3, cfg.c3, cfg.delta_v3, True
        branch = CASE_P1II_V3

    verified = _reverify(table, candidates, i, c)
    density = len(verified) / pi_x
    diagnostics["branch"] = branch
    diagnostics["candidates"] = int(len(candidates))
    diagnostics["reverify_failed"] = int(len(candidates) - len(verified))
    passes = density > floor if strict else density >= floor
    case = branch if passes else CASE_INCONCLUSIVE
    if case == CASE_INCONCLUSIVE:
        diagnostics["density_floor"] = floor
    return ClassificationReport(
        x=x,
        case=case,
        exponent_i=i,
        threshold_c=c,
        witness_count=len(verified),
        pi_x=pi_x,
        density=density,
        diagnostics=diagnostics,
        witness_primes=tuple(verified),
    )


Number = Union[float, Fraction]


@dataclass(frozen=True)
class AuditEntry:
    """One inequality chain: holds iff value <comparator> target."""

    name: str
    value: Number
    comparator: str
    target: Number
    margin: Number
    holds: bool


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[AuditEntry, ...]
    rational: bool

    @property
    def all_hold(self) -> bool:
        return all(entry.holds for entry in self.entries)

    def entry(self, name: str) -> AuditEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def audit_constants(cfg: ThresholdConfig, rational: bool = False) -> AuditReport:
    """Recompute every numeric hypothesis of the decision tree from cfg.

    With rational=True the chains are evaluated in exact arithmetic over the
    binary values of the configured constants, eliminating evaluation
    rounding; pass/fail must agree with the float evaluation.
    """
    if rational:
        def conv(v: float) -> Number:
            return Fraction(v)

        inv_cutoff: Number = Fraction(1, cfg.prime_cutoff)
        two_thirds: Number = Fraction(2, 3)
        t998: Number = Fraction(998, 1000)
        t989: Number = Fraction(989, 1000)
    else:
        def conv(v: float) -> Number:
            return float(v)

        inv_cutoff = 1.0 / cfg.prime_cutoff
        two_thirds = 2.0 / 3.0
        t998 = 998 / 1000
        t989 = 989 / 1000

    eta1, eta2 = conv(cfg.eta1), conv(cfg.eta2)
    delta1, delta2 = conv(cfg.delta1), conv(cfg.delta2)
    b_low, b_high = conv(cfg.b_band_low), conv(cfg.b_band_high)
    band_density, high_density = conv(cfg.b_band_density), conv(cfg.b_high_density)
    pnt_tol, pi_ratio = conv(cfg.pnt_rel_tol), conv(cfg.pi_ratio)

    lam_band_floor_sq = (1 - eta2) ** 2
    # Largest possible second moment inside the lambda bands: 16 = 4^2 and
    # 25 = 5^2 are the squared hard bounds on lambda(p) and b(p).
    split_v1 = (
        lam_band_floor_sq
        + delta2 * ((1 + eta1) ** 2 - lam_band_floor_sq)
        + delta1 * (16 - lam_band_floor_sq)
    )
    pnt_floor = (1 - pnt_tol) * pi_ratio
    surviving = high_density - delta1 - pnt_tol
    split_b = (
        b_low**2
        + band_density * (b_high**2 - b_low**2)
        + high_density * (25 - b_low**2)
    )
    band_gap = 1 - lam_band_floor_sq
    square_lower = b_low - band_gap - inv_cutoff
    cube_lower = (1 - eta2) * (2 * two_thirds - band_gap - inv_cutoff)
    closing = delta2 + band_density - 1 - pnt_tol

    checks = [
        ("prop_v1_moment_split", split_v1, "<", t998),
        ("prop_v1_pnt_floor", pnt_floor, ">", t998),
        ("prop_v2_surviving_density", surviving, ">=", conv(cfg.delta_v2)),
        ("prop_b_moment_split", split_b, "<", t989),
        ("prop_v3_square_lower", square_lower, ">", two_thirds),
        ("prop_v3_cube_lower", cube_lower, ">", conv(cfg.c3)),
        ("prop_v3_closing_density", closing, ">", conv(cfg.delta_v3)),
    ]
    entries = []
    for name, value, comparator, target in checks:
        if comparator == "<":
            margin = target - value
            holds = value < target
        elif comparator == ">":
            margin = value - target
            holds = value > target
        else:
            margin = value - target
            holds = value >= target
        entries.append(AuditEntry(name, value, comparator, target, margin, bool(holds)))
    return AuditReport(entries=tuple(entries), rational=rational)
