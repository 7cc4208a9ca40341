"""Command-line front door.

Subcommands: gen-game, verify-rep, gen-correlation, eval, self-test, sweep,
demo-family.  Exit codes: 0 success, 2 bad input, 3 verification failure.
Identical flags and seeds produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import DomainError, LsgameError, PreconditionError
from .evaluation import (
    correlation_distance,
    evaluation_report,
    ls_winning_probability_from_correlation,
)
from .groups import build_presentation
from .isometry import selftest_report
from .lsg import system_to_json, system_to_text
from .numtheory import make_params
from .representation import build_representation, key_unitaries, verify_representation
from .robustness import (
    KINDS,
    PerturbationSpec,
    fit_bound,
    perturb_strategy,
    records_to_csv,
    relation_residuals,
    run_sweep,
)
from .strategy import (
    Correlation,
    build_full_test,
    build_ideal_strategy,
    generate_correlation,
    ideal_table_values,
    table_deviation,
)

DEMO_PRIMES = (3, 5, 7, 11, 13)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _setup(args) -> tuple:
    params = make_params(args.d, args.r)
    rep = build_representation(params)
    test = build_full_test(params)
    strategy = build_ideal_strategy(params, rep, test)
    return params, rep, test, strategy


def cmd_gen_game(args) -> int:
    params = make_params(args.d, args.r)
    test = build_full_test(params)
    system = test.game.system
    if args.format == "text":
        _write(args.out, system_to_text(system))
    else:
        payload = json.loads(system_to_json(system))
        payload["game"] = {
            "valid_pairs": len(test.game.valid_pairs),
            "quoted_pairs": test.game.quoted_pairs,
            "support": len(test.support),
            "quoted_support": test.quoted_support,
        }
        _write(args.out, _dump_json(payload))
    return 0


def cmd_verify_rep(args) -> int:
    params = make_params(args.d, args.r)
    rep = build_representation(params)
    gamma = build_presentation("Gamma", params.r)
    residual = verify_representation(rep, gamma)
    _, _, conj_residual = key_unitaries(rep)
    worst = max(residual, conj_residual)
    payload = {
        "d": params.d,
        "r": params.r,
        "relation_residual": residual,
        "conjugation_residual": conj_residual,
        "tolerance": args.tolerance,
        "ok": bool(worst <= args.tolerance),
    }
    _write(args.out, _dump_json(payload))
    return 0 if worst <= args.tolerance else 3


def cmd_gen_correlation(args) -> int:
    _, _, test, strategy = _setup(args)
    corr = generate_correlation(strategy, test)
    _write(args.out, corr.to_json())
    return 0


def cmd_eval(args) -> int:
    params, _, test, strategy = _setup(args)
    ideal_corr = generate_correlation(strategy, test)
    if args.infile:
        with open(args.infile) as fh:
            corr = Correlation.from_json(fh.read())
        payload = {
            "winning_probability": ls_winning_probability_from_correlation(corr, test),
            "epsilon": correlation_distance(corr, ideal_corr),
            "table_deviation": table_deviation(corr, ideal_table_values(params, test)),
        }
    else:
        target = strategy
        if args.delta > 0:
            spec = PerturbationSpec(kind=args.kind, magnitude=args.delta, seed=args.seed)
            target = perturb_strategy(strategy, spec)
        payload = evaluation_report(target, ideal_corr, test)
    _write(args.out, _dump_json(payload))
    return 0


def cmd_self_test(args) -> int:
    _, _, test, strategy = _setup(args)
    ideal_corr = generate_correlation(strategy, test)
    target = strategy
    if args.delta > 0:
        spec = PerturbationSpec(kind=args.kind, magnitude=args.delta, seed=args.seed)
        target = perturb_strategy(strategy, spec)
    report = selftest_report(target, ideal_corr, test)
    payload = report.to_dict()
    payload["residuals"] = relation_residuals(target, test)
    payload["d"] = args.d
    payload["delta"] = args.delta
    _write(args.out, _dump_json(payload))
    if args.delta == 0 and max(report.distances.values()) > args.tolerance:
        return 3
    return 0


def cmd_sweep(args) -> int:
    _, _, test, strategy = _setup(args)
    ideal_corr = generate_correlation(strategy, test)
    kinds = KINDS if args.kind == "all" else (args.kind,)
    magnitudes = [float(x) for x in args.deltas.split(",") if x]
    records = run_sweep(strategy, ideal_corr, magnitudes, args.trials, kinds, args.seed)
    _write(args.out, records_to_csv(records))
    try:
        fit = fit_bound(records)
        sys.stderr.write(_dump_json(fit))
    except DomainError:
        pass
    return 0


def cmd_demo_family(args) -> int:
    lines = []
    ok = True
    for d in DEMO_PRIMES:
        t0 = time.time()
        params = make_params(d)
        rep = build_representation(params)
        gamma = build_presentation("Gamma", params.r)
        residual = verify_representation(rep, gamma)
        test = build_full_test(params)
        strategy = build_ideal_strategy(params, rep, test)
        ideal_corr = generate_correlation(strategy, test)
        report = selftest_report(strategy, ideal_corr, test)
        worst = max(report.distances.values())
        good = residual <= args.tolerance and worst <= 1e-8
        ok = ok and good
        lines.append(
            {
                "d": d,
                "r": params.r,
                "rep_residual": residual,
                "max_selftest_distance": worst,
                "junk_norm": report.junk_norm,
                "epsilon": report.epsilon,
                "seconds": round(time.time() - t0, 3),
                "ok": bool(good),
            }
        )
    _write(args.out, _dump_json({"family": lines, "ok": ok}))
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lsgame")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_d=True):
        if need_d:
            p.add_argument("--d", type=int, required=True, help="odd prime parameter")
            p.add_argument("--r", type=int, default=None, help="primitive root (default: smallest)")
        p.add_argument("--tolerance", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p = sub.add_parser("gen-game", help="emit the linear system and game sizes")
    common(p)
    p.set_defaults(func=cmd_gen_game)

    p = sub.add_parser("verify-rep", help="build the representation and verify all relations")
    common(p)
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("gen-correlation", help="emit the ideal correlation")
    common(p)
    p.set_defaults(func=cmd_gen_correlation)

    p = sub.add_parser("eval", help="score a correlation file or a (perturbed) strategy")
    common(p)
    p.add_argument("--in", dest="infile", default=None, help="correlation JSON to score")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--kind", choices=KINDS, default="both")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("self-test", help="isometry distance report for ideal or perturbed strategy")
    common(p)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--kind", choices=KINDS, default="both")
    p.set_defaults(func=cmd_self_test)
    # distances at delta=0 are gated at 1e-8 by default
    p.set_defaults(tolerance=1e-8)

    p = sub.add_parser("sweep", help="perturbation sweep to CSV")
    common(p)
    p.add_argument("--deltas", default="1e-4,1e-3,1e-2", help="comma-separated magnitudes")
    p.add_argument("--trials", type=int, default=8)
    p.add_argument("--kind", choices=KINDS + ("all",), default="both")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demo-family", help="verify-rep + self-test across d in {3,5,7,11,13}")
    common(p, need_d=False)
    p.set_defaults(func=cmd_demo_family)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, PreconditionError) as exc:
        sys.stderr.write(_dump_json({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 2
    except LsgameError as exc:
        sys.stderr.write(_dump_json({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
