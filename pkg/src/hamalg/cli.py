"""Command-line entry point.

Subcommands:

* ``verify``     -- run the identity suite on a chosen algebra
* ``brackets``   -- measure mixed-bracket defects and search for witnesses
* ``simulate``   -- evolve the coupled measurement model, CSV + summary
* ``uniqueness`` -- restriction factors for one constant triple, or a scan

Exit status: 0 all checks passed / expected pattern confirmed, 1 a check
or pattern failed, 2 usage error.  Seeds come from ``--seed``, then the
``HAMALG_SEED`` environment variable, then 0.  ``--config FILE`` loads
defaults from a JSON object keyed by option name; explicit flags win.
All reports validate against the schema shipped at
``hamalg/schemas/report.schema.json``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from importlib import resources

import jsonschema
import numpy as np

from .algebra import OperatorAlgebra, PhaseSpaceAlgebra
from .brackets import (
    DESIDERATA,
    EXPECTED_CLEAN,
    MixedBracketKind,
    find_violation_witness,
    measure_defects,
)
from .compose import ComposedAlgebra
from .errors import HamalgError
from .identities import run_axiom_suite
from .measurement import BASIS, TRACKED, MeasurementConfig, Regime, back_reaction_gap, evolve
from .reference import replay_defect
from .serialize import canon_float, canon_floats
from .uniqueness import log_grid, scan_constants, uniqueness_check

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _load_schema() -> dict:
    with resources.files("hamalg.schemas").joinpath("report.schema.json").open() as fh:
        return json.load(fh)


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("HAMALG_SEED")
    return int(env) if env else 0


def _merge_config(args: argparse.Namespace):
    """Fill unset options from a JSON config file, if given."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {args.config}: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise UsageError(f"config file option {key!r} unknown for this subcommand")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _write_report(report: dict, out_path: str | None) -> None:
    """Validate against the shipped schema, then write or print."""
    report = canon_floats(report)
    jsonschema.validate(report, _load_schema())
    text = json.dumps(report, indent=2)
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write report to {out_path}: {exc}")
    else:
        print(text)


def _positive(value, what: str):
    if value is None or not value > 0:
        raise UsageError(f"{what} must be positive, got {value}")
    return value


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _build_algebra(args) -> object:
    if args.composed and args.hybrid:
        raise UsageError("--composed and --hybrid are mutually exclusive")
    seed = _resolve_seed(args.seed)
    if args.composed:
        a1 = _positive(args.a1, "--a1")
        a2 = _positive(args.a2, "--a2")
        a12 = _positive(args.a12, "--a12")
        dim1 = int(_positive(args.dim1 if args.dim1 is not None else 2, "--dim1"))
        dim2 = int(_positive(args.dim2 if args.dim2 is not None else 2, "--dim2"))
        return ComposedAlgebra(OperatorAlgebra(dim1, hbar=2 * np.sqrt(a1), rng_seed=seed),
                               OperatorAlgebra(dim2, hbar=2 * np.sqrt(a2), rng_seed=seed),
                               a12=a12)
    if args.hybrid:
        a1 = _positive(args.a1 if args.a1 is not None else 1.0, "--a1")
        a12 = args.a12 if args.a12 is not None else a1
        dim = int(_positive(args.dim if args.dim is not None else 2, "--dim"))
        pairs = int(_positive(args.pairs if args.pairs is not None else 1, "--pairs"))
        degree = int(args.degree if args.degree is not None else 2)
        return ComposedAlgebra(OperatorAlgebra(dim, hbar=2 * np.sqrt(a1), rng_seed=seed),
                               PhaseSpaceAlgebra(pairs, max_random_degree=degree),
                               a12=_positive(a12, "--a12"))
    realization = args.realization or "operator"
    if realization == "operator":
        dim = int(_positive(args.dim if args.dim is not None else 2, "--dim"))
        hbar = _positive(args.hbar if args.hbar is not None else 1.0, "--hbar")
        return OperatorAlgebra(dim, hbar=hbar, rng_seed=seed)
    if realization == "phase-space":
        pairs = int(_positive(args.pairs if args.pairs is not None else 1, "--pairs"))
        degree = int(args.degree if args.degree is not None else 3)
        if degree < 0:
            raise UsageError(f"--degree must be >= 0, got {degree}")
        return PhaseSpaceAlgebra(pairs, max_random_degree=degree, rng_seed=seed)
    raise UsageError(f"unknown realization {realization!r}")


def cmd_verify(args) -> int:
    alg = _build_algebra(args)
    trials = int(_positive(args.trials if args.trials is not None else 200, "--trials"))
    tolerance = _positive(args.tolerance if args.tolerance is not None else 1e-9,
                          "--tolerance")
    report = run_axiom_suite(alg, trials=trials, tolerance=tolerance,
                             seed=_resolve_seed(args.seed))
    for check in report.checks:
        status = "pass" if check.passed else "FAIL"
        print(f"[{status}] {check.identity.value:<20} max defect "
              f"{check.max_relative_defect:.3e} (tolerance {check.tolerance:.1e})",
              file=sys.stderr)
    _write_report(report.to_json(), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

#: witness searches demanded by the expected failure pattern
_SEARCH_PLAN = {
    MixedBracketKind.BOUCHER_TRASCHEN: ("jacobi",),
    MixedBracketKind.ALEKSANDROV: ("jacobi",),
    MixedBracketKind.ANDERSON: ("antisymmetry",),
    MixedBracketKind.HYBRID_PAPER: DESIDERATA,
}


def cmd_brackets(args) -> int:
    seed = _resolve_seed(args.seed)
    trials = int(_positive(args.trials if args.trials is not None else 200, "--trials"))
    budget = args.budget if args.budget is not None else 1000
    if budget < 1:
        raise UsageError(f"--budget must be >= 1, got {budget}")
    hbar = _positive(args.hbar if args.hbar is not None else 1.0, "--hbar")
    kinds = ([MixedBracketKind(args.kind)] if args.kind
             else list(MixedBracketKind))

    defects = []
    searches = []
    passed = True
    for kind in kinds:
        triple = measure_defects(kind, trials=trials, seed=seed, hbar=hbar)
        defects.append(triple.to_json())
        passed = passed and triple.matches_expected_pattern()
        for desideratum in _SEARCH_PLAN[kind]:
            witness = find_violation_witness(kind, desideratum, int(budget),
                                             seed=seed, hbar=hbar)
            expect_clean = EXPECTED_CLEAN[kind][desideratum]
            entry = {
                "kind": kind.value,
                "desideratum": desideratum,
                "budget": int(budget),
                "found": witness is not None,
                "witness": witness,
                "replay_defect": None,
                "replay_agrees": None,
            }
            if witness is not None:
                replayed = replay_defect(witness, hbar=hbar)
                entry["replay_defect"] = canon_float(replayed)
                entry["replay_agrees"] = (
                    abs(replayed - witness["defect"])
                    <= 1e-10 * max(1.0, abs(witness["defect"]))
                )
                passed = passed and entry["replay_agrees"]
            # a clean desideratum must yield no witness; a broken one must
            passed = passed and ((witness is None) == expect_clean)
            searches.append(entry)
        name = kind.value
        print(f"[{'pass' if triple.matches_expected_pattern() else 'FAIL'}] {name:<18} "
              f"antisym {triple.antisymmetry_defect:.2e}  "
              f"jacobi {triple.jacobi_defect:.2e}  "
              f"derivation {triple.derivation_defect:.2e}", file=sys.stderr)

    report = {
        "report_kind": "brackets",
        "defects": defects,
        "witness_searches": searches,
        "passed": passed,
        "seed": seed,
        "timestamp": _timestamp(),
    }
    _write_report(report, args.out)
    return EXIT_PASS if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _trajectory_csv(traj) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    header = ["t"] + [f"{obs}.{b}" for obs in TRACKED for b in BASIS]
    writer.writerow(header)
    for s, t in enumerate(traj.times):
        row = [f"{t:.17g}"]
        for i in range(len(TRACKED)):
            row.extend(f"{v:.17g}" for v in traj.coefficients[s, i, :])
        writer.writerow(row)
    return buf.getvalue()


def cmd_simulate(args) -> int:
    regime = Regime(args.regime if args.regime is not None else "qq")
    try:
        cfg = MeasurementConfig(
            m1=_positive(args.m1 if args.m1 is not None else 1.0, "--m1"),
            m2=_positive(args.m2 if args.m2 is not None else 1.0, "--m2"),
            g0=float(args.g0 if args.g0 is not None else 0.7),
            t0=float(args.t0 if args.t0 is not None else 0.0),
            dt=_positive(args.dt if args.dt is not None else 1.3, "--dt"),
            hbar=_positive(args.hbar if args.hbar is not None else 1.0, "--hbar"),
            regime=regime,
        )
    except HamalgError as exc:
        raise UsageError(str(exc))
    t_end = _positive(args.t_end if args.t_end is not None else cfg.t0 + cfg.dt + 0.5,
                      "--t-end")
    samples = int(args.samples if args.samples is not None else 21)
    if samples < 2:
        raise UsageError(f"--samples must be >= 2, got {samples}")

    traj = evolve(cfg, t_end, samples)
    text = _trajectory_csv(traj)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write trajectory to {args.out}: {exc}")
    else:
        sys.stdout.write(text)

    summary = {
        "report_kind": "simulate",
        "config": {
            "m1": cfg.m1, "m2": cfg.m2, "g0": cfg.g0, "t0": cfg.t0, "dt": cfg.dt,
            "hbar": cfg.hbar, "regime": cfg.regime.value,
        },
        "back_reaction_gap": back_reaction_gap(cfg, t_end),
        "t_end": t_end,
        "samples": samples,
        "timestamp": _timestamp(),
    }
    summary_path = args.summary_out
    if summary_path:
        _write_report(summary, summary_path)
    elif args.out:
        _write_report(summary, None)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# uniqueness
# ---------------------------------------------------------------------------

def _parse_grid(spec: str):
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"--grid must be lo:hi:n, got {spec!r}")
    if not (lo > 0 and hi > lo and n >= 1):
        raise UsageError(f"--grid needs 0 < lo < hi and n >= 1, got {spec!r}")
    return log_grid(lo, hi, n)


def _scan_csv(verdicts) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["a1", "a2", "a12", "factor_left", "factor_right",
                     "expected_left", "expected_right", "passed"])
    for v in verdicts:
        writer.writerow([
            f"{v['a1']:.17g}", f"{v['a2']:.17g}", f"{v['a12']:.17g}",
            f"{v['left']['measured_factor']:.17g}",
            f"{v['right']['measured_factor']:.17g}",
            f"{v['left']['expected_factor']:.17g}",
            f"{v['right']['expected_factor']:.17g}",
            "1" if v["passed"] else "0",
        ])
    return buf.getvalue()


def cmd_uniqueness(args) -> int:
    seed = _resolve_seed(args.seed)
    tolerance = _positive(args.tolerance if args.tolerance is not None else 1e-8,
                          "--tolerance")
    if getattr(args, "mode", None) == "scan":
        values = _parse_grid(args.grid if args.grid is not None else "0.25:4:5")
        verdicts = scan_constants(values, tolerance=tolerance, seed=seed)
        # the theory predicts the pass set is exactly the diagonal
        diagonal_ok = all(
            v["passed"] == (v["a1"] == v["a2"] == v["a12"]) for v in verdicts
        )
        csv_text = _scan_csv(verdicts)
        if args.out:
            try:
                with open(args.out, "w") as fh:
                    fh.write(csv_text)
            except OSError as exc:
                raise UsageError(f"cannot write scan to {args.out}: {exc}")
        else:
            sys.stdout.write(csv_text)
        report = {
            "report_kind": "uniqueness",
            "verdicts": verdicts,
            "pass_set_is_diagonal": diagonal_ok,
            "passed": diagonal_ok,
            "timestamp": _timestamp(),
        }
        if args.json_out:
            _write_report(report, args.json_out)
        return EXIT_PASS if diagonal_ok else EXIT_FAIL

    for name in ("a1", "a2", "a12"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required (or use the scan mode)")
        _positive(getattr(args, name), f"--{name}")
    verdict = uniqueness_check(args.a1, args.a2, args.a12, tolerance=tolerance, seed=seed)
    report = {
        "report_kind": "uniqueness",
        "verdicts": [verdict],
        "pass_set_is_diagonal": None,
        "passed": verdict["passed"],
        "timestamp": _timestamp(),
    }
    _write_report(report, args.out)
    return EXIT_PASS if verdict["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamalg",
        description="Verification tooling for quantum/classical Hamilton algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (fallback: HAMALG_SEED, then 0)")
        p.add_argument("--config", default=None,
                       help="JSON file with default option values")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p_verify = sub.add_parser("verify", help="run the identity suite on an algebra")
    common(p_verify)
    p_verify.add_argument("--realization", choices=["operator", "phase-space"],
                          default=None)
    p_verify.add_argument("--dim", type=int, default=None, help="operator dimension")
    p_verify.add_argument("--hbar", type=float, default=None)
    p_verify.add_argument("--pairs", type=int, default=None,
                          help="canonical pairs (phase-space)")
    p_verify.add_argument("--degree", type=int, default=None,
                          help="max degree of random polynomials")
    p_verify.add_argument("--composed", action="store_true",
                          help="quantum (x) quantum composition")
    p_verify.add_argument("--hybrid", action="store_true",
                          help="quantum (x) classical composition")
    p_verify.add_argument("--a1", type=float, default=None)
    p_verify.add_argument("--a2", type=float, default=None)
    p_verify.add_argument("--a12", type=float, default=None)
    p_verify.add_argument("--dim1", type=int, default=None)
    p_verify.add_argument("--dim2", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--tolerance", type=float, default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_brackets = sub.add_parser("brackets",
                                help="mixed-bracket defects and witness searches")
    common(p_brackets)
    p_brackets.add_argument("--kind", choices=[k.value for k in MixedBracketKind],
                            default=None, help="restrict to one bracket")
    p_brackets.add_argument("--trials", type=int, default=None)
    p_brackets.add_argument("--budget", type=int, default=None,
                            help="witness search budget (default 1000)")
    p_brackets.add_argument("--hbar", type=float, default=None)
    p_brackets.set_defaults(func=cmd_brackets)

    p_sim = sub.add_parser("simulate", help="evolve the coupled measurement model")
    common(p_sim)
    p_sim.add_argument("--regime", choices=[r.value for r in Regime], default=None)
    p_sim.add_argument("--m1", type=float, default=None)
    p_sim.add_argument("--m2", type=float, default=None)
    p_sim.add_argument("--g0", type=float, default=None)
    p_sim.add_argument("--t0", type=float, default=None)
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.add_argument("--hbar", type=float, default=None)
    p_sim.add_argument("--t-end", dest="t_end", type=float, default=None)
    p_sim.add_argument("--samples", type=int, default=None)
    p_sim.add_argument("--summary-out", dest="summary_out", default=None,
                       help="write the JSON summary here (default: stdout when "
                            "the CSV goes to a file)")
    p_sim.set_defaults(func=cmd_simulate)

    p_uni = sub.add_parser("uniqueness",
                           help="restriction factors for constant triples")
    common(p_uni)
    p_uni.add_argument("--a1", type=float, default=None)
    p_uni.add_argument("--a2", type=float, default=None)
    p_uni.add_argument("--a12", type=float, default=None)
    p_uni.add_argument("--tolerance", type=float, default=None)
    p_uni.add_argument("--json-out", dest="json_out", default=None,
                       help="also write the JSON verdict table (scan mode)")
    p_uni.add_argument("--grid", default=None, help="lo:hi:n log-spaced (scan mode)")
    uni_modes = p_uni.add_subparsers(dest="mode")
    p_scan = uni_modes.add_parser("scan", help="scan a grid of constant triples")
    p_scan.add_argument("--grid", default=None, help="lo:hi:n log-spaced")
    p_scan.add_argument("--seed", type=int, default=None)
    p_scan.add_argument("--config", default=None)
    p_scan.add_argument("--out", default=None)
    p_scan.add_argument("--tolerance", type=float, default=None)
    p_scan.add_argument("--json-out", dest="json_out", default=None)
    p_uni.set_defaults(func=cmd_uniqueness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HamalgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
