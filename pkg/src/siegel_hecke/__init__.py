"""Eigenvalue machinery for degree-2 symplectic Hecke eigenforms.

The package is organized bottom-up:

- satake_core: per-prime class angles, local L-factor polynomials, angle
  recovery, and the coarse temperedness bounds.
- hecke_series: eigenvalues at prime powers (recursion and series routes),
  multiplicative extension in (sign, log) form, normalization of raw integer
  eigenvalues, divisor counts, and the extreme-value benchmark.
- eigen_table: CSV persistence, per-entry validation, and deterministic
  synthetic families (calibrated, control, and non-tempered).
- distribution_engine: threshold sets, calibration prime sums, scan-point
  conditions, the distribution classifier, and the constants audit.
- omega_builder: construction and verification of signed extreme-value
  witness integers.
- cli: the `siegel-hecke` command.
"""

from .errors import (
    DuplicatePrime,
    MissingB,
    MissingPrime,
    NoNegativeSeed,
    NotTempered,
    NoWitnessPrimes,
    NumericalFailure,
    ParseError,
    RangeExceeded,
    SeedNotFound,
    SiegelHeckeError,
    WeightMissing,
)
from .hecke_series import (
    FactoredInteger,
    LocalEigenvalues,
    d_k_count,
    growth_bound,
    lambda_n_log,
    lambda_prime_power,
    lambda_prime_power_series,
    normalize_mu,
)
from .satake_core import (
    SatakeParams,
    SpinQuartic,
    StdQuintic,
    b_from_lambdas,
    b_p,
    lambda_p,
    lambda_p2,
    ramanujan_check,
    recover_satake,
    spin_local_poly,
    std_local_poly,
)
from .eigen_table import (
    EigenvalueTable,
    FamilyModel,
    parse_table,
    synth_family,
    validate_table,
    write_table,
)
from .distribution_engine import (
    ClassificationReport,
    PntReport,
    ThresholdConfig,
    audit_constants,
    classify_case,
    pnt_sums,
    v_set,
    x0_conditions,
)
from .omega_builder import (
    OmegaWitness,
    build_witness,
    find_negative_seed,
    verify_omega,
    witness_primes,
)

__version__ = "0.1.0"

__all__ = [
    "SiegelHeckeError",
    "NotTempered",
    "NumericalFailure",
    "ParseError",
    "WeightMissing",
    "DuplicatePrime",
    "MissingPrime",
    "MissingB",
    "RangeExceeded",
    "NoWitnessPrimes",
    "NoNegativeSeed",
    "SeedNotFound",
    "SatakeParams",
    "SpinQuartic",
    "StdQuintic",
    "lambda_p",
    "lambda_p2",
    "b_p",
    "b_from_lambdas",
    "spin_local_poly",
    "std_local_poly",
    "recover_satake",
    "ramanujan_check",
    "LocalEigenvalues",
    "FactoredInteger",
    "lambda_prime_power",
    "lambda_prime_power_series",
    "lambda_n_log",
    "normalize_mu",
    "d_k_count",
    "growth_bound",
    "EigenvalueTable",
    "FamilyModel",
    "parse_table",
    "write_table",
    "synth_family",
    "validate_table",
    "ThresholdConfig",
    "PntReport",
    "ClassificationReport",
    "v_set",
    "pnt_sums",
    "x0_conditions",
    "classify_case",
    "audit_constants",
    "OmegaWitness",
    "witness_primes",
    "build_witness",
    "find_negative_seed",
    "verify_omega",
    "__version__",
]
