"""Witness-set extraction, sign assembly, negative seeds, growth checks."""

from __future__ import annotations

import hashlib
import json
import math

import pytest

from conftest import make_table, omega_toy_table
from siegel_hecke.errors import (
    NoNegativeSeed,
    NoWitnessPrimes,
    RangeExceeded,
    SeedNotFound,
)
from siegel_hecke.hecke_series import (
    FactoredInteger,
    LocalEigenvalues,
    growth_bound,
    lambda_pr,
    log_d_k,
)
from siegel_hecke.omega_builder import (
    OmegaWitness,
    build_witness,
    find_negative_seed,
    verify_omega,
    witness_primes,
)

C0 = 1.0 + 1e-10


class TestWitnessPrimes:
    def test_toy_split(self):
        table = omega_toy_table()
        full, plus, minus = witness_primes(table, n_max=5, c_threshold=1.2, r=1)
        assert full == {2, 3}
        assert plus == {2}
        assert minus == {3}

    def test_disjoint_union(self, haar_table_small):
        full, plus, minus = witness_primes(haar_table_small, 2000, C0, 1)
        assert plus | minus == full
        assert plus & minus == set()

    def test_hard_bound_empties_first_layer(self, haar_table_small):
        full, plus, minus = witness_primes(haar_table_small, 2000, 5.0, 1)
        assert full == set()

    def test_matches_direct_scan(self, haar_table_small):
        _, plus, minus = witness_primes(haar_table_small, 2000, C0, 2)
        want_plus, want_minus = set(), set()
        for p, rec in haar_table_small.entries.items():
            if rec.lambda_p2 >= C0:
                want_plus.add(p)
            elif rec.lambda_p2 <= -C0:
                want_minus.add(p)
        assert plus == want_plus
        assert minus == want_minus

    def test_validation(self, haar_table_small):
        with pytest.raises(ValueError):
            witness_primes(haar_table_small, 2000, 1.0, 1)  # C must exceed 1
        with pytest.raises(ValueError):
            witness_primes(haar_table_small, 2000, 1.2, 4)
        with pytest.raises(RangeExceeded):
            witness_primes(haar_table_small, 2001, 1.2, 1)


class TestNegativeSeed:
    def test_prime_seed(self):
        table = make_table([LocalEigenvalues(2, -0.5, 0.1)], x_max=10)
        assert find_negative_seed(table, 100).value() == 2

    def test_prime_power_seed(self):
        # All lambda(p) positive; the square goes negative first.
        table = make_table([LocalEigenvalues(2, 1.0, -1.5)], x_max=10)
        seed = find_negative_seed(table, 100)
        assert seed.factors == ((2, 2),)
        assert seed.value() == 4

    def test_smallest_by_value(self):
        table = make_table(
            [LocalEigenvalues(2, 1.0, -1.5), LocalEigenvalues(3, -0.2, 0.1)],
            x_max=10,
        )
        # lambda(3) < 0 beats lambda(4) < 0 because 3 < 4.
        assert find_negative_seed(table, 100).value() == 3

    def test_not_found(self):
        table = make_table([LocalEigenvalues(5, 4.0, 9.8)], x_max=10)
        with pytest.raises(SeedNotFound):
            find_negative_seed(table, 100)

    def test_haar_family_has_small_seed(self, haar_table_small):
        assert find_negative_seed(haar_table_small, 100).value() <= 100

    def test_limit_validation(self, haar_table_small):
        with pytest.raises(ValueError):
            find_negative_seed(haar_table_small, 1)


class TestBuildWitness:
    def test_toy_positive(self):
        w = build_witness(omega_toy_table(), n_max=5, c_threshold=1.2, target_sign=1)
        assert w.n.value() == 2
        assert w.sign_lambda == 1
        assert w.r == 1
        assert w.n0 is None
        assert w.source_primes == (2,)
        assert w.achieved_c is None  # log 2 < 1: scale too small to rate

    def test_toy_negative(self):
        w = build_witness(omega_toy_table(), n_max=5, c_threshold=1.2, target_sign=-1)
        assert w.n.value() == 3
        assert w.sign_lambda == -1
        assert w.log_abs_lambda == pytest.approx(math.log(1.5), abs=1e-12)

    def test_even_prefix_when_negatives_dominate(self):
        table = make_table(
            [
                LocalEigenvalues(2, -1.5, 0.1),
                LocalEigenvalues(3, -1.5, 0.1),
                LocalEigenvalues(5, 1.5, 0.1),
            ],
            x_max=10,
        )
        w = build_witness(table, n_max=10, c_threshold=1.2, target_sign=1)
        assert w.n.value() == 6  # two negative factors multiply to +
        assert w.sign_lambda == 1

    def test_negative_seed_route(self):
        # No negative first-layer witness; lambda(4) < 0 seeds the sign and
        # the positive witness 5 is appended coprimely.
        table = make_table(
            [LocalEigenvalues(2, 1.0, -1.5), LocalEigenvalues(5, 1.5, 0.2)],
            x_max=10,
        )
        w = build_witness(table, n_max=10, c_threshold=1.2, target_sign=-1)
        assert w.n0 is not None
        assert w.n0.value() == 4
        assert w.n.value() == 20
        assert w.sign_lambda == -1
        assert set(q for q, _ in w.n0.factors).isdisjoint(w.source_primes)

    def test_r_maximizes_witness_count(self):
        # First layer has nothing above threshold, second layer everything.
        table = make_table(
            [LocalEigenvalues(2, 0.5, 2.0), LocalEigenvalues(3, 0.5, -2.0)],
            x_max=10,
        )
        w = build_witness(table, n_max=10, c_threshold=1.2, target_sign=1)
        assert w.r == 2

    def test_no_witnesses(self, haar_table_small):
        with pytest.raises(NoWitnessPrimes):
            build_witness(haar_table_small, 2000, 50.0, 1)

    def test_positive_unreachable_from_single_negative(self):
        table = make_table([LocalEigenvalues(3, -1.5, 0.1)], x_max=10)
        with pytest.raises(NoWitnessPrimes):
            build_witness(table, n_max=10, c_threshold=1.2, target_sign=1)

    def test_negative_unreachable_reported_honestly(self):
        table = make_table([LocalEigenvalues(5, 4.0, 9.8)], x_max=10)
        with pytest.raises(NoNegativeSeed):
            build_witness(table, n_max=10, c_threshold=1.2, target_sign=-1)

    def test_target_sign_validation(self, haar_table_small):
        with pytest.raises(ValueError):
            build_witness(haar_table_small, 2000, 1.2, target_sign=0)

    @pytest.mark.parametrize("target", [1, -1])
    def test_parity_and_multiplicativity(self, haar_table_small, target):
        w = build_witness(haar_table_small, 2000, C0, target)
        assert w.sign_lambda == target
        negatives = 0
        log_terms = []
        for q, e in w.n.factors:
            v = lambda_pr(haar_table_small.entries[q], e)
            if v < 0:
                negatives += 1
            log_terms.append(math.log(abs(v)))
        assert negatives % 2 == (0 if target == 1 else 1)
        assert w.log_abs_lambda == pytest.approx(math.fsum(log_terms), abs=1e-9)

    def test_fourth_power_free_without_seed(self, haar_table_small):
        w = build_witness(haar_table_small, 2000, C0, 1)
        assert w.n0 is None
        assert all(e == w.r for _, e in w.n.factors)
        assert all(e <= 3 for _, e in w.n.factors)

    def test_achieved_c_formula(self, haar_table_small):
        w = build_witness(haar_table_small, 2000, C0, 1)
        log_n = w.n.log_value
        assert log_n > 1.0
        assert w.achieved_c == pytest.approx(
            w.log_abs_lambda * math.log(log_n) / log_n, rel=1e-12
        )

    def test_scaling_does_not_collapse(self, haar_table_medium):
        c_small = build_witness(haar_table_medium, 1000, C0, 1).achieved_c
        c_large = build_witness(haar_table_medium, 10_000, C0, 1).achieved_c
        assert c_small > 0 and c_large > 0
        assert c_large >= 0.1 * c_small


class TestVerify:
    def test_small_witness_rejected(self):
        w = build_witness(omega_toy_table(), n_max=5, c_threshold=1.2, target_sign=-1)
        with pytest.raises(ValueError):
            verify_omega(w, 0.01)

    def test_achieved_c_halved_and_doubled(self, haar_table_small):
        w = build_witness(haar_table_small, 2000, C0, -1)
        ok, margin = verify_omega(w, w.achieved_c / 2)
        assert ok and margin > 0
        ok, margin = verify_omega(w, 2 * w.achieved_c)
        assert not ok and margin < 0

    def test_margin_is_log_scale_gap(self, haar_table_small):
        w = build_witness(haar_table_small, 2000, C0, 1)
        c = w.achieved_c / 3
        ok, margin = verify_omega(w, c)
        assert ok
        want = w.log_abs_lambda - growth_bound(w.n.log_value, c)
        assert margin == pytest.approx(want, rel=1e-12)

    def test_sign_mismatch_fails_even_with_margin(self):
        n = FactoredInteger.from_int(2**10)  # log n ~ 6.9 > e
        w = OmegaWitness(
            n=n,
            target_sign=1,
            r=1,
            source_primes=(2,),
            n0=None,
            sign_lambda=-1,
            log_abs_lambda=100.0,
            achieved_c=None,
        )
        ok, margin = verify_omega(w, 0.01)
        assert not ok
        assert margin > 0  # the magnitude was fine; the sign was not


class TestJsonPayload:
    def test_fields_and_hash(self, haar_table_small):
        w = build_witness(haar_table_small, 2000, C0, -1)
        payload = w.to_json_dict()
        assert payload["target_sign"] == -1
        assert payload["sign_lambda"] == -1
        assert payload["r"] == w.r
        assert payload["factor_count"] == len(w.n.factors)
        assert payload["factors"] == [[p, e] for p, e in w.n.factors]
        canonical = json.dumps(
            [[p, e] for p, e in w.n.factors], separators=(",", ":")
        ).encode()
        assert payload["factors_sha256"] == hashlib.sha256(canonical).hexdigest()
        assert payload["log_d5_n"] == pytest.approx(log_d_k(w.n, 5), rel=1e-12)
        log_n = w.n.log_value
        assert payload["log_n_over_log_log_n"] == pytest.approx(
            log_n / math.log(log_n), rel=1e-12
        )
        json.dumps(payload)  # must be serializable as-is

    def test_small_witness_payload(self):
        w = build_witness(omega_toy_table(), n_max=5, c_threshold=1.2, target_sign=1)
        payload = w.to_json_dict()
        assert payload["achieved_c"] is None
        assert payload["log_n_over_log_log_n"] is None
        assert payload["n0_factors"] is None
        json.dumps(payload)
