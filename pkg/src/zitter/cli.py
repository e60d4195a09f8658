"""Command-line entry point: ``zitter <subcommand> ...``.

Exit codes: 0 success (SAT or TAUTOLOGY for ``sat``), 1 UNSAT or failed
checks, 2 input errors, 64 usage errors. The default seed is 0 unless the
``ZITTER_SEED`` environment variable is set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, bench, discriminate, formula, qtp, querymodel, verify
from .errors import ZitterError

SEED_ENV = "ZITTER_SEED"
EXIT_OK, EXIT_UNSAT, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _seed(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise UsageError(f"{SEED_ENV}={raw!r} is not an unsigned 64-bit integer") from None


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def _dump(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _meta(command: str, args: argparse.Namespace) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "handler", "seed")}
    return {"version": __version__, "schema": f"zitter/{command}/1", "seed": args.seed, "config": config}


def _g17(x: float) -> str:
    return f"{x:.17g}"


def cmd_sat(args, out) -> int:
    ast = formula.load_formula(args.formula)
    table = formula.brute_force_table(ast, cap=args.cap)
    gc = qtp.build_computer(table, cap=args.cap)
    sched = qtp.TrembleSchedule(table.n, args.epsilon)
    rng = np.random.default_rng(args.seed)
    verdict = qtp.decide_sat(gc, sched, args.samples, rng)
    result = {
        "meta": _meta("sat", args),
        "n": table.n,
        "outcome": verdict.outcome.value,
        "satisfiable": verdict.outcome.satisfiable,
        "trembles": verdict.trembles,
        "tol": verdict.tol,
        "max_abs_f": float(np.max(np.abs(verdict.values))),
        "max_abs_fprime": float(np.max(np.abs(verdict.derivatives))),
        "evidence": [{"theta": t, "f": f, "fprime": d}
                     for t, f, d in zip(verdict.thetas, verdict.values, verdict.derivatives)],
    }
    if args.shots:
        theta = float(verdict.thetas[0])
        est = qtp.estimate_expectation(gc, sched, theta, args.shots, rng)
        result["shots"] = {"shots": args.shots, "theta": theta, "estimate": est,
                           "stderr": qtp.binomial_stderr(est, args.shots),
                           "exact": float(verdict.values[0])}
    if args.format == "plain":
        out.write(f"zitter {__version__} seed={args.seed}\n")
        out.write(f"{args.formula}: {verdict.outcome.value} (n={table.n}, "
                  f"max|f|={result['max_abs_f']:.6g}, max|f'|={result['max_abs_fprime']:.6g})\n")
    else:
        out.write(_dump(result))
    return EXIT_UNSAT if verdict.outcome is qtp.Verdict.UNSAT else EXIT_OK


def cmd_scan(args, out) -> int:
    ast = formula.load_formula(args.formula)
    table = formula.brute_force_table(ast, cap=args.cap)
    gc = qtp.build_computer(table, cap=args.cap)
    sched = qtp.TrembleSchedule(table.n, args.epsilon)
    thetas = np.linspace(0.0, 2 * np.pi, args.grid, endpoint=False)
    f, df = qtp.scan(gc, sched, thetas)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "f", "fprime"])
    for row in zip(thetas, f, df):
        writer.writerow([_g17(v) for v in row])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
        out.write(_dump({"meta": _meta("scan", args), "rows": args.grid, "csv": args.csv,
                         "max_abs_f": float(np.max(np.abs(f))), "max_abs_fprime": float(np.max(np.abs(df)))}))
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_study(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    report = qtp.derivative_magnitude_study(args.n, args.sat_count, grid=args.grid, epsilon=args.epsilon,
                                            amplify=not args.no_amplify, rng=rng)
    lo, hi = report.value_bounds
    out.write(_dump({
        "meta": _meta("study", args),
        "n": report.n, "satisfying_count": report.satisfying_count, "epsilon": report.epsilon,
        "grid": report.grid, "witnesses": list(report.witnesses),
        "witness_frequencies": list(report.witness_frequencies),
        "max_abs_f": report.max_value, "max_abs_fprime": report.max_derivative,
        "value_bounds": [lo, hi], "predicted_fprime_peak": report.predicted_derivative,
        "value_times_2n": report.max_value * 2 ** report.n,
    }))
    return EXIT_OK


def cmd_discriminate(args, out) -> int:
    model = querymodel.make_model(args.model)
    rng = np.random.default_rng(args.seed)
    stats = discriminate.tail_statistics(model, args.state, args.runs, rng, max_tests=args.max_tests)
    rounds = [0] * (stats.max_rounds + 1)
    for r, c in stats.rounds_histogram.items():
        rounds[r] = c
    out.write(_dump({
        "meta": _meta("discriminate", args),
        "runs": stats.runs, "unresolved": stats.unresolved,
        "verdict_accuracy": stats.verdict_accuracy,
        "histogram": stats.histogram_list(),
        "rounds_histogram": rounds,
        "tail_ratio": stats.tail_ratio,
        "max_rounds": stats.max_rounds,
    }))
    return EXIT_OK


def cmd_table(args, out) -> int:
    model = querymodel.make_model(args.model)
    out.write("# " + json.dumps(_clean({"meta": _meta("table", args)}), sort_keys=True) + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["i", "k", "p"])
    for i in model.states():
        for k in model.states():
            writer.writerow([i, k, _g17(model.p(i, k))])
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = verify.run_all(args.seed)
    passed = sum(r.passed for r in results)
    if args.format == "plain":
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}\n")
        out.write(f"{passed} passed, {len(results) - passed} failed\n")
    else:
        out.write(_dump({
            "meta": _meta("verify", args), "passed": passed, "failed": len(results) - passed,
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        }))
    return EXIT_OK if passed == len(results) else EXIT_UNSAT


def cmd_bench(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    rows = bench.run_bench(range(args.min_n, args.max_n + 1), rng, samples=args.samples, epsilon=args.epsilon)
    body = []
    for row in rows:
        entry = row.counts()
        if args.timings:
            entry.update(classical_seconds=row.classical_seconds, qtp_seconds=row.qtp_seconds)
        else:
            sys.stderr.write(f"n={row.n}: classical {row.classical_seconds:.4f}s, "
                             f"simulated QTP {row.qtp_seconds:.4f}s\n")
        body.append(entry)
    out.write(_dump({"meta": _meta("bench", args), "rows": body,
                     "all_agree": all(r.agree for r in rows)}))
    return EXIT_OK if all(r.agree for r in rows) else EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zitter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"zitter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=True):
        p.add_argument("--seed", type=_seed, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
        if fmt:
            p.add_argument("--format", choices=["json", "plain"], default="json")
            p.add_argument("--json", dest="format", action="store_const", const="json")

    p = sub.add_parser("sat", help="decide satisfiability with the trembling-input test")
    p.add_argument("--formula", required=True, help=".txt infix form or .cnf DIMACS file")
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--shots", type=int, default=0, help="also estimate f by sampling at the first theta")
    p.add_argument("--cap", type=int, default=formula.TABLE_VAR_CAP)
    common(p)
    p.set_defaults(handler=cmd_sat)

    p = sub.add_parser("scan", help="tabulate f and f' on a theta grid")
    p.add_argument("--formula", required=True)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--csv", help="write rows here (default: stdout)")
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--cap", type=int, default=formula.TABLE_VAR_CAP)
    common(p, fmt=False)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("study", help="derivative magnitude versus 1/2^n value signal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sat-count", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--no-amplify", action="store_true", help="keep the default frequency assignment")
    common(p, fmt=False)
    p.set_defaults(handler=cmd_study)

    p = sub.add_parser("discriminate", help="Monte Carlo of the state identification game")
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--state", type=int, required=True)
    p.add_argument("--model", type=int, choices=[4, 8], default=8)
    p.add_argument("--max-tests", type=int, default=None, help="cap on pair-resolution tests per run")
    common(p, fmt=False)
    p.set_defaults(handler=cmd_discriminate)

    p = sub.add_parser("table", help="print the outcome table P(i,k) as CSV")
    p.add_argument("--model", type=int, choices=[4, 8], required=True)
    common(p, fmt=False)
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("verify", help="run the invariant self-checks")
    common(p)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="brute-force enumeration versus simulated decider")
    p.add_argument("--min-n", type=int, default=4)
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--timings", action="store_true", help="include wall-clock seconds in stdout")
    common(p, fmt=False)
    p.set_defaults(handler=cmd_bench)
    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        return args.handler(args, out)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (ZitterError, OSError) as exc:
        sys.stderr.write(f"zitter: error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
