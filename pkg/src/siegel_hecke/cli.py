"""Command-line front end.

Subcommands::

    local      inspect one prime's eigenvalue data (polynomials, angles, bounds)
    table      validate | convert eigenvalue tables
    synth      write a deterministic synthetic table as CSV
    pnt        calibration prime sums and scan-point conditions
    classify   run the distribution decision tree on a table
    omega      build and verify an extreme-value witness
    audit      recompute the classifier's numeric hypotheses

Exit codes: 0 success, 1 honest negative (no witness in range, or an
inconclusive classification under --strict), 2 usage or data errors.
JSON output is deterministic: identical configuration gives identical bytes.
Tables are read from --table PATH, with '-' (the default) meaning stdin.
SIEGEL_HECKE_THREADS, when set, caps worker parallelism; the current
implementation never exceeds one worker, so any positive value is accepted
and recorded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

from . import distribution_engine as dist
from . import eigen_table as tables
from . import omega_builder as omega
from . import satake_core
from .errors import (
    NoNegativeSeed,
    NoWitnessPrimes,
    SeedNotFound,
    SiegelHeckeError,
)
from .hecke_series import LocalEigenvalues

_HONEST_NEGATIVES = (NoWitnessPrimes, NoNegativeSeed, SeedNotFound)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; embedded in JSON output so results are
    reproducible from the report alone."""

    subcommand: str
    options: dict
    threads: int

    def to_json_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "options": self.options,
            "threads": self.threads,
        }


def _threads_from_env() -> int:
    raw = os.environ.get("SIEGEL_HECKE_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise SiegelHeckeError(f"SIEGEL_HECKE_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise SiegelHeckeError(f"SIEGEL_HECKE_THREADS must be >= 1, got {value}")
    return value


def _json_safe(obj):
    if isinstance(obj, dict):
        return {key: _json_safe(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(val) for val in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
    return obj


def _emit_json(payload: dict, out_path: str | None) -> None:
    text = json.dumps(_json_safe(payload), sort_keys=True, indent=2) + "\n"
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_bytes(data: bytes, out_path: str | None) -> None:
    if out_path and out_path != "-":
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _read_table(path: str) -> tables.EigenvalueTable:
    if path == "-":
        return tables.parse_table(sys.stdin.buffer.read())
    with open(path, "rb") as fh:
        return tables.parse_table(fh.read())


def _scaled_config(args) -> dist.ThresholdConfig:
    cfg = dist.TEST_SCALE_CONFIG if args.scale == "test" else dist.FULL_SCALE_CONFIG
    overrides = {}
    for name in (
        "eta1",
        "eta2",
        "c2",
        "c3",
        "delta1",
        "delta_v2",
        "delta_v3",
        "b_high",
        "b_band_low",
        "b_band_high",
        "prime_cutoff",
        "pnt_rel_tol",
        "pi_ratio",
    ):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "c1", None) is not None:
        overrides["c1_override"] = args.c1
    return cfg.with_overrides(**overrides) if overrides else cfg


def _int_arg(text: str) -> int:
    # accept 1e6-style spellings for large integer flags
    value = float(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _add_scale_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scale", choices=("full", "test"), default="full",
                     help="threshold preset: full-scale or desk-scale couplings")
    sub.add_argument("--eta1", type=float, help="band half-width above 1")
    sub.add_argument("--eta2", type=float, help="band width below 1")
    sub.add_argument("--c1", type=float, help="case-1 witness threshold override")
    sub.add_argument("--c2", type=float, help="case-2 witness threshold")
    sub.add_argument("--c3", type=float, help="case-3 witness threshold")
    sub.add_argument("--delta1", type=float, help="case-1 density floor")
    sub.add_argument("--delta-v2", dest="delta_v2", type=float, help="case-2 density floor")
    sub.add_argument("--delta-v3", dest="delta_v3", type=float, help="case-3 density floor")
    sub.add_argument("--b-high", dest="b_high", type=float, help="large |b(p)| cut")
    sub.add_argument("--b-band-low", dest="b_band_low", type=float, help="|b(p)| band floor")
    sub.add_argument("--b-band-high", dest="b_band_high", type=float, help="|b(p)| band cap")
    sub.add_argument("--prime-cutoff", dest="prime_cutoff", type=_int_arg,
                     help="witnesses must exceed this prime")
    sub.add_argument("--pnt-rel-tol", dest="pnt_rel_tol", type=float,
                     help="calibration tolerance for the prime sums")
    sub.add_argument("--pi-ratio", dest="pi_ratio", type=float,
                     help="required ratio in the pi(x) lower bound")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siegel-hecke",
        description="Eigenvalue machinery for degree-2 symplectic Hecke eigenforms",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_local = subs.add_parser("local", help="inspect one prime's local data")
    p_local.add_argument("--lp", type=float, required=True, help="lambda(p)")
    p_local.add_argument("--lp2", type=float, required=True, help="lambda(p^2)")
    p_local.add_argument("--p", type=_int_arg, required=True, help="the prime p")
    p_local.add_argument("--tol", type=float, default=1e-9,
                         help="unit-circle tolerance for angle recovery")
    p_local.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p_local.add_argument("--out", help="output path ('-' for stdout)")

    p_table = subs.add_parser("table", help="validate or convert a table")
    table_subs = p_table.add_subparsers(dest="table_command", required=True)
    p_validate = table_subs.add_parser("validate", help="audit every entry")
    p_validate.add_argument("--table", default="-", help="CSV path or '-' for stdin")
    p_validate.add_argument("--out", help="output path ('-' for stdout)")
    p_convert = table_subs.add_parser("convert", help="rewrite as a normalized table")
    p_convert.add_argument("--table", default="-", help="CSV path or '-' for stdin")
    p_convert.add_argument("--out", help="output path ('-' for stdout)")

    p_synth = subs.add_parser("synth", help="write a deterministic synthetic table")
    p_synth.add_argument("--kind", choices=tables.FAMILY_KINDS, required=True)
    p_synth.add_argument("--seed", type=_int_arg, required=True, help="64-bit PRNG seed")
    p_synth.add_argument("--xmax", type=_int_arg, required=True, help="prime coverage")
    p_synth.add_argument("--out", help="output path ('-' for stdout)")

    p_pnt = subs.add_parser("pnt", help="calibration sums and scan-point conditions")
    p_pnt.add_argument("--table", default="-", help="CSV path or '-' for stdin")
    p_pnt.add_argument("--x", type=float, required=True, help="scan point")
    p_pnt.add_argument("--out", help="output path ('-' for stdout)")
    _add_scale_flags(p_pnt)

    p_classify = subs.add_parser("classify", help="run the distribution decision tree")
    p_classify.add_argument("--table", default="-", help="CSV path or '-' for stdin")
    p_classify.add_argument("--x", type=float, help="scan point (required unless --audit)")
    p_classify.add_argument("--audit", action="store_true",
                            help="only recompute the numeric hypotheses")
    p_classify.add_argument("--rational", action="store_true",
                            help="audit in exact rational arithmetic as well")
    p_classify.add_argument("--strict", action="store_true",
                            help="exit 1 when the classification is inconclusive")
    p_classify.add_argument("--out", help="output path ('-' for stdout)")
    _add_scale_flags(p_classify)

    p_omega = subs.add_parser("omega", help="build an extreme-value witness")
    p_omega.add_argument("--table", default="-", help="CSV path or '-' for stdin")
    p_omega.add_argument("--N", type=_int_arg, required=True, dest="n_max",
                         help="witness primes are drawn from p <= N")
    p_omega.add_argument("--C", type=float, default=1.0 + 1e-10, dest="c_threshold",
                         help="local eigenvalue threshold (> 1)")
    p_omega.add_argument("--sign", type=int, choices=(1, -1), required=True,
                         help="target sign of lambda(n)")
    p_omega.add_argument("--seed-limit", type=_int_arg, default=10_000,
                         help="cap for the negative-seed search")
    p_omega.add_argument("--verify-c", type=float, default=None,
                         help="also verify against this growth constant")
    p_omega.add_argument("--out", help="output path ('-' for stdout)")

    p_audit = subs.add_parser("audit", help="recompute the classifier's hypotheses")
    p_audit.add_argument("--rational", action="store_true",
                         help="also run the exact rational re-check")
    p_audit.add_argument("--out", help="output path ('-' for stdout)")
    _add_scale_flags(p_audit)

    return parser


def _options_dict(args, skip=("subcommand", "table_command")) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value
    return out


def _run_config(args) -> RunConfig:
    name = args.subcommand
    if getattr(args, "table_command", None):
        name = f"{name}.{args.table_command}"
    return RunConfig(subcommand=name, options=_options_dict(args), threads=_threads_from_env())


def _bound_report_dict(report: satake_core.RamanujanReport) -> dict:
    return {
        "p": report.p,
        "passed": report.passed,
        "b_derived": report.b_derived,
        "checks": [asdict(check) for check in report.checks],
        "warnings": list(report.warnings),
    }


def cmd_local(args, run_config: RunConfig) -> int:
    if abs(args.lp) > 4.0:
        raise SiegelHeckeError(
            f"lambda(p)={args.lp} violates the bound |lambda(p)| <= 4"
        )
    if abs(args.lp2) > 10.0 + 1.0 / args.p:
        raise SiegelHeckeError(
            f"lambda(p^2)={args.lp2} violates the bound |lambda(p^2)| <= 10 + 1/p"
        )
    quartic = satake_core.spin_local_poly(args.lp, args.lp2, args.p)
    params = satake_core.recover_satake(args.lp, args.lp2, args.p, tol=args.tol)
    quintic = satake_core.std_local_poly(params)
    b_value = satake_core.b_p(params)
    rec = LocalEigenvalues(args.p, args.lp, args.lp2, None, b_value)
    bounds = satake_core.ramanujan_check(rec)
    if args.json:
        _emit_json(
            {
                "p": args.p,
                "spin_quartic": list(quartic.coeffs),
                "std_quintic": list(quintic.coeffs),
                "phi": params.phi,
                "psi": params.psi,
                "b_p": b_value,
                "bounds": _bound_report_dict(bounds),
                "run_config": run_config.to_json_dict(),
            },
            args.out,
        )
        return 0
    lines = [
        f"p: {args.p}",
        "spin quartic: " + ", ".join(repr(c) for c in quartic.coeffs),
        "std quintic:  " + ", ".join(repr(c) for c in quintic.coeffs),
        f"angles: phi={params.phi!r} psi={params.psi!r}",
        f"b(p): {b_value!r}",
    ]
    for check in bounds.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"bound {check.name}: |{check.value!r}| <= {check.bound!r} "
            f"{status} (margin {check.margin:.6e})"
        )
    for warning in bounds.warnings:
        lines.append(f"warning: {warning}")
    _emit_bytes(("\n".join(lines) + "\n").encode(), args.out)
    return 0


def cmd_table(args, run_config: RunConfig) -> int:
    table = _read_table(args.table)
    if args.table_command == "convert":
        _emit_bytes(tables.write_table(table), args.out)
        return 0
    report = tables.validate_table(table)
    _emit_json(
        {
            "n_entries": report.n_entries,
            "n_failed": report.n_failed,
            "passed": report.passed,
            "dense": report.dense,
            "allow_nontempered": report.allow_nontempered,
            "counts": report.counts,
            "issues": [asdict(issue) for issue in report.issues[:1000]],
            "run_config": run_config.to_json_dict(),
        },
        args.out,
    )
    return 0


def cmd_synth(args, run_config: RunConfig) -> int:
    model = tables.FamilyModel(kind=args.kind, seed=args.seed, x_max=args.xmax)
    _emit_bytes(tables.write_table(tables.synth_family(model)), args.out)
    return 0


def cmd_pnt(args, run_config: RunConfig) -> int:
    table = _read_table(args.table)
    cfg = _scaled_config(args)
    report = dist.x0_conditions(table, args.x, cfg)
    _emit_json(
        {
            "x": report.x,
            "sum_lambda_sq_log": report.pnt.sum_lambda_sq_log,
            "sum_b_sq_log": report.pnt.sum_b_sq_log,
            "rel_err_lambda": report.pnt.rel_err_lambda,
            "rel_err_b": report.pnt.rel_err_b,
            "pi_x": report.pi_x,
            "pi_cutoff": report.pi_cutoff,
            "x_over_log_x": report.x_over_log_x,
            "calibrated": report.calibrated,
            "cutoff_negligible": report.cutoff_negligible,
            "pi_lower_bound": report.pi_lower_bound,
            "all_pass": report.all_pass,
            "config": cfg.to_dict(),
            "run_config": run_config.to_json_dict(),
        },
        args.out,
    )
    return 0


def _audit_payload(cfg: dist.ThresholdConfig, rational: bool) -> dict:
    def entry_dict(entry: dist.AuditEntry) -> dict:
        return {
            "name": entry.name,
            "value": float(entry.value),
            "comparator": entry.comparator,
            "target": float(entry.target),
            "margin": float(entry.margin),
            "holds": entry.holds,
        }

    float_report = dist.audit_constants(cfg, rational=False)
    payload = {
        "entries": [entry_dict(entry) for entry in float_report.entries],
        "all_hold": float_report.all_hold,
    }
    if rational:
        rational_report = dist.audit_constants(cfg, rational=True)
        payload["rational_entries"] = [entry_dict(e) for e in rational_report.entries]
        payload["rational_all_hold"] = rational_report.all_hold
        payload["modes_agree"] = [
            fe.holds == re.holds
            for fe, re in zip(float_report.entries, rational_report.entries)
        ]
    return payload


def cmd_audit(args, run_config: RunConfig) -> int:
    cfg = _scaled_config(args)
    payload = _audit_payload(cfg, args.rational)
    payload["config"] = cfg.to_dict()
    payload["run_config"] = run_config.to_json_dict()
    _emit_json(payload, args.out)
    return 0


def cmd_classify(args, run_config: RunConfig) -> int:
    cfg = _scaled_config(args)
    if args.audit:
        payload = _audit_payload(cfg, args.rational)
        payload["config"] = cfg.to_dict()
        payload["run_config"] = run_config.to_json_dict()
        _emit_json(payload, args.out)
        return 0
    if args.x is None:
        raise SiegelHeckeError("classify needs --x (or --audit)")
    table = _read_table(args.table)
    report = dist.classify_case(table, args.x, cfg)
    witness_primes = [int(q) for q in report.witness_primes]
    payload = {
        "x": report.x,
        "case": report.case,
        "exponent_i": report.exponent_i,
        "threshold_c": report.threshold_c,
        "witness_count": report.witness_count,
        "pi_x": report.pi_x,
        "density": report.density,
        "diagnostics": report.diagnostics,
        "witness_primes": witness_primes[: omega.FACTOR_LISTING_CAP],
        "witness_primes_truncated": len(witness_primes) > omega.FACTOR_LISTING_CAP,
        "config": cfg.to_dict(),
        "run_config": run_config.to_json_dict(),
    }
    _emit_json(payload, args.out)
    if args.strict and report.case == dist.CASE_INCONCLUSIVE:
        return 1
    return 0


def cmd_omega(args, run_config: RunConfig) -> int:
    table = _read_table(args.table)
    witness = omega.build_witness(
        table,
        args.n_max,
        args.c_threshold,
        args.sign,
        seed_search_limit=args.seed_limit,
    )
    payload = witness.to_json_dict()
    if args.verify_c is not None:
        check = omega.verify_omega(witness, args.verify_c)
        payload["verify"] = {"c": args.verify_c, "ok": check.ok, "margin": check.margin}
    payload["run_config"] = run_config.to_json_dict()
    _emit_json(payload, args.out)
    return 0


_DISPATCH = {
    "local": cmd_local,
    "table": cmd_table,
    "synth": cmd_synth,
    "pnt": cmd_pnt,
    "classify": cmd_classify,
    "omega": cmd_omega,
    "audit": cmd_audit,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        run_config = _run_config(args)
        return _DISPATCH[args.subcommand](args, run_config)
    except _HONEST_NEGATIVES as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        return 1
    except SiegelHeckeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
