"""Command-line front door.

Subcommands: ``bias`` (closed-form biases for one parameter vector),
``curve`` (one-parameter sweep), ``simulate`` (Monte Carlo study),
``sensitivity`` (bias distribution from observed summaries), ``invert``
(observables to latent parameters), ``serve`` (HTTP service).

Exit codes: 0 success, 1 usage error, 2 domain error (positivity,
infeasibility, singularity, ...).  All numeric output is serialized at
full round-trip precision so it can be parsed back bit for bit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .errors import DomainError
from .formulas import (
    SWEEPABLE_PARAMETERS,
    bias_curve,
    bias_pair,
    implied_observables,
    invert_observables,
)
from .params import LatentParams, ObservedSummary
from .sensitivity import (
    config_from_dict,
    report_summary_dict,
    run_sensitivity,
    write_draws_csv,
)
from .sensitivity import write_report_json as write_sensitivity_json
from .simulation import (
    Scenario,
    builtin_scenario,
    load_scenario_catalog,
    report_rows,
    run_scenario,
    write_report_csv,
    write_report_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; this tool reserves 2 for
    # domain errors, so usage problems are remapped to 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(value: float) -> str:
    return repr(float(value))


def _print_result(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    elif fmt == "csv":
        keys = list(payload)
        print(",".join(keys))
        print(",".join(_fmt(payload[k]) if isinstance(payload[k], float) else str(payload[k]) for k in keys))
    else:
        width = max(len(k) for k in payload)
        for key, value in payload.items():
            rendered = _fmt(value) if isinstance(value, float) else str(value)
            print(f"{key.ljust(width)}  {rendered}")


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("table", "json", "csv"),
        default="table",
        help="output format (default: table)",
    )


def _add_param_flags(parser: argparse.ArgumentParser, require_core: bool = True) -> None:
    parser.add_argument("--lambda", dest="lam", type=float, required=require_core,
                        help="confounder prevalence P(L=1)")
    parser.add_argument("--pi0", type=float, required=require_core,
                        help="treatment probability P(A=1|L=0)")
    parser.add_argument("--pi1", type=float, required=require_core,
                        help="treatment probability P(A=1|L=1)")
    parser.add_argument("--p0", type=float, required=require_core,
                        help="P(L*=1|L=0), one minus specificity")
    parser.add_argument("--p1", type=float, required=require_core,
                        help="P(L*=1|L=1), sensitivity")
    parser.add_argument("--gamma", type=float, required=require_core,
                        help="confounder effect on the outcome")
    parser.add_argument("--alpha", type=float, default=0.0, help="outcome intercept")
    parser.add_argument("--beta", type=float, default=0.0, help="true treatment effect")
    parser.add_argument("--sigma", type=float, default=1.0, help="outcome noise SD")


def _params_from_args(args: argparse.Namespace) -> LatentParams:
    return LatentParams(
        lam=args.lam, pi0=args.pi0, pi1=args.pi1, p0=args.p0, p1=args.p1,
        alpha=args.alpha, beta=args.beta, gamma=args.gamma, sigma=args.sigma,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="confbias", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bias = sub.add_parser("bias", help="closed-form estimator biases", parents=[])
    _add_param_flags(p_bias)
    _add_format_flag(p_bias)

    p_curve = sub.add_parser("curve", help="sweep one parameter and tabulate both biases")
    _add_param_flags(p_curve)
    p_curve.add_argument("--param", choices=SWEEPABLE_PARAMETERS, required=True,
                         help="parameter to sweep")
    p_curve.add_argument("--start", type=float, required=True)
    p_curve.add_argument("--stop", type=float, required=True)
    p_curve.add_argument("--points", type=int, default=101)
    p_curve.add_argument("--format", choices=("json", "csv"), default="csv",
                         help="point-series format (default: csv)")

    p_sim = sub.add_parser("simulate", help="Monte Carlo simulation study")
    p_sim.add_argument("--scenario", action="append", required=True,
                       help="scenario id from the catalog (repeatable)")
    p_sim.add_argument("--scenario-file", default=None,
                       help="custom key/value catalog (default: built-in)")
    p_sim.add_argument("--n", type=int, default=1000, help="sample size per replicate")
    p_sim.add_argument("--reps", type=int, default=5000, help="replicates per scenario")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--setting", type=int, choices=(1, 2), default=2,
                       help="2: treatment from L (default); 1: treatment from L*")
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--out-prefix", default=None,
                       help="write PREFIX.csv and PREFIX.json reports")

    p_sens = sub.add_parser("sensitivity", help="sensitivity analysis from a JSON config")
    p_sens.add_argument("--config", required=True, help="path to a config JSON document")
    p_sens.add_argument("--out-prefix", default=None,
                        help="write PREFIX.json summary and PREFIX_draws.csv")
    _add_format_flag(p_sens)

    p_inv = sub.add_parser("invert", help="observables + assumed (p0, p1) -> latent parameters")
    p_inv.add_argument("--ell", type=float, required=True, help="P(L*=1)")
    p_inv.add_argument("--omega", type=float, required=True, help="P(A=1)")
    p_inv.add_argument("--pistar0", type=float, required=True, help="P(A=1|L*=0)")
    p_inv.add_argument("--pistar1", type=float, required=True, help="P(A=1|L*=1)")
    p_inv.add_argument("--p0", type=float, required=True)
    p_inv.add_argument("--p1", type=float, required=True)
    _add_format_flag(p_inv)

    p_serve = sub.add_parser("serve", help="run the HTTP JSON service")
    p_serve.add_argument("--port", type=int, default=None,
                         help="port (default: CONFBIAS_PORT or 8000)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", default=None,
                         help="directory with a built UI bundle to serve at /")
    return parser


def _cmd_bias(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    pair = bias_pair(params)
    obs = implied_observables(params)
    _print_result(
        {
            "bias_cm": pair.bias_cm,
            "bias_msm": pair.bias_msm,
            "ell": obs.ell,
            "omega": obs.omega,
            "pi_star0": obs.pi_star0,
            "pi_star1": obs.pi_star1,
        },
        args.format,
    )
    return EXIT_OK


def _cmd_curve(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.points < 2:
        raise DomainError("--points must be >= 2")
    step = (args.stop - args.start) / (args.points - 1)
    grid = [args.start + i * step for i in range(args.points)]
    points = bias_curve(params, args.param, grid)
    if args.format == "json":
        payload = [
            {
                "value": pt.value,
                "bias_cm": None if pt.pair is None else pt.pair.bias_cm,
                "bias_msm": None if pt.pair is None else pt.pair.bias_msm,
            }
            for pt in points
        ]
        print(json.dumps({"parameter": args.param, "points": payload}, sort_keys=True))
    else:
        print(f"{args.param},bias_cm,bias_msm")
        for pt in points:
            if pt.pair is None:
                print(f"{_fmt(pt.value)},,")
            else:
                print(f"{_fmt(pt.value)},{_fmt(pt.pair.bias_cm)},{_fmt(pt.pair.bias_msm)}")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    import configparser

    try:
        catalog = load_scenario_catalog(args.scenario_file)
    except configparser.Error as exc:
        print(f"error: cannot parse scenario file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError:
        raise
    except ValueError as exc:
        print(f"error: bad scenario file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = []
    for sid in args.scenario:
        if sid not in catalog:
            print(
                f"error: unknown scenario {sid!r}; catalog has {sorted(catalog)}",
                file=sys.stderr,
            )
            return EXIT_USAGE
        scenario = Scenario(
            id=sid, params=catalog[sid], n=args.n, reps=args.reps,
            seed=args.seed, setting=args.setting,
        )
        reports.append(run_scenario(scenario, workers=args.workers))
    if args.out_prefix:
        write_report_csv(reports, f"{args.out_prefix}.csv")
        write_report_json(reports, f"{args.out_prefix}.json")
    header = ["estimator", "scenario", "n", "bias_formula", "bias", "empse", "mse",
              "coverage", "model_se", "failed"]
    print("  ".join(header))
    for row in report_rows(reports):
        print(
            f"{row['estimator']:>9}  {row['scenario_id']:>8}  {row['n']:>6}  "
            f"{row['bias_formula']:+.4f}  {row['bias']:+.4f} ({row['bias_mcse']:.4f})  "
            f"{row['empse']:.4f} ({row['empse_mcse']:.4f})  "
            f"{row['mse']:.4f} ({row['mse_mcse']:.4f})  "
            f"{row['coverage']:.4f} ({row['coverage_mcse']:.4f})  "
            f"{row['model_se']:.4f} ({row['model_se_mcse']:.4f})  "
            f"{row['reps_failed']}"
        )
    return EXIT_OK


def _cmd_sensitivity(args: argparse.Namespace) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = config_from_dict(payload)
    except DomainError:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run_sensitivity(config)
    if args.out_prefix:
        write_sensitivity_json(report, f"{args.out_prefix}.json")
        write_draws_csv(report, f"{args.out_prefix}_draws.csv")
    summary = report_summary_dict(report)
    if args.format == "json":
        print(json.dumps(summary, sort_keys=True))
    else:
        for name in ("msm", "cm"):
            dist = summary[name]
            print(
                f"{name}: mean {_fmt(dist['mean'])}  median {_fmt(dist['median'])}  "
                f"iqr [{_fmt(dist['iqr'][0])}, {_fmt(dist['iqr'][1])}]"
            )
        print(
            f"draws: {report.n_feasible} feasible, {report.n_infeasible} infeasible "
            f"({report.proportion_infeasible:.4f})"
        )
    return EXIT_OK


def _cmd_invert(args: argparse.Namespace) -> int:
    obs = ObservedSummary(
        ell=args.ell, omega=args.omega, pi_star0=args.pistar0, pi_star1=args.pistar1
    )
    inverted = invert_observables(obs, args.p0, args.p1)
    _print_result(
        {"lambda": inverted.lam, "pi0": inverted.pi0, "pi1": inverted.pi1},
        args.format,
    )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .api import serve

    serve(host=args.host, port=args.port, ui_dir=args.ui_dir)
    return EXIT_OK


_COMMANDS = {
    "bias": _cmd_bias,
    "curve": _cmd_curve,
    "simulate": _cmd_simulate,
    "sensitivity": _cmd_sensitivity,
    "invert": _cmd_invert,
    "serve": _cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
