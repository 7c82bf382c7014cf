"""Command-line front end.

Subcommands:

* ``hadarot experiment marginal|lower-bound|e1`` — the Monte Carlo / table
  pipelines from :mod:`hadarot.experiments`.
* ``hadarot verify`` — the inequality suite from :mod:`hadarot.lemma_suite`,
  serialized as JSON.
* ``hadarot bench fwht`` — transform timing with scaling assertions.

Seeds resolve as ``--seed`` flag, then the ``HADAROT_SEED`` environment
variable, then 0.  Exit codes: 0 success, 1 assertion failure, 2 bad
configuration.  Progress goes to stderr; report content goes to ``--out``
or stdout.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Sequence

from . import experiments, lemma_suite
from ._version import VERSION
from .errors import ConfigError, ExperimentAssertionError
from .experiments import ExperimentConfig

SEED_ENV_VAR = "HADAROT_SEED"


def _parse_dims(text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"--dims got no usable values in {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--dims expects comma-separated integers: {exc}") from None


def _resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return 0


def _add_experiment_flags(sub: argparse.ArgumentParser, default_inputs: int) -> None:
    sub.add_argument("--dims", type=str, default=None, help="comma-separated powers of two")
    sub.add_argument("--seed", type=int, default=None, help="master seed (default: env or 0)")
    sub.add_argument("--out", type=str, default=None, help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--n-inputs", type=int, default=default_inputs, dest="n_inputs")
    sub.add_argument(
        "--n-samples",
        type=int,
        default=None,
        dest="n_samples",
        help="per-input sample count (default: adaptive schedule)",
    )
    sub.add_argument("--t-grid-size", type=int, default=2000, dest="t_grid_size")


def _experiment_config(args: argparse.Namespace, default_dims: tuple[int, ...]) -> ExperimentConfig:
    dims = _parse_dims(args.dims) if args.dims is not None else default_dims
    return ExperimentConfig(
        dims=dims,
        n_inputs=args.n_inputs,
        n_samples=args.n_samples,
        master_seed=_resolve_seed(args.seed),
        t_grid_size=args.t_grid_size,
        out=args.out,
        fmt=args.format,
        workers=args.workers,
    )


def _cmd_marginal(args: argparse.Namespace) -> int:
    config = _experiment_config(args, experiments.MARGINAL_DIMS)
    text = experiments.run_marginal(config)
    experiments.write_report(text, config.out)
    return 0


def _cmd_lower_bound(args: argparse.Namespace) -> int:
    config = _experiment_config(args, experiments.LOWER_BOUND_DIMS)
    text, failures = experiments.run_lower_bound(config)
    experiments.write_report(text, config.out)
    experiments.raise_failures(failures)
    return 0


def _cmd_e1(args: argparse.Namespace) -> int:
    config = _experiment_config(args, experiments.E1_DIMS)
    text, failures = experiments.run_e1(config)
    experiments.write_report(text, config.out)
    experiments.raise_failures(failures)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    reports = lemma_suite.run_all(seed, allowance_scale=args.allowance_scale, only=args.only)
    payload = {
        "command": "verify",
        "master_seed": seed,
        "allowance_scale": args.allowance_scale,
        "only": args.only,
    }
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]
    doc = {
        "metadata": {
            "version": VERSION,
            "command": "verify",
            "master_seed": seed,
            "allowance_scale": args.allowance_scale,
            "config_hash": digest,
        },
        "verifiers": [r.to_json_row() for r in reports],
    }
    experiments.write_report(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(
            f"{status} {r.verifier}: {r.instances} instances, "
            f"{r.violations} violations, min slack {r.min_slack:.3e}",
            file=sys.stderr,
        )
    return 0 if lemma_suite.suite_passed(reports) else 1


def _cmd_bench_fwht(args: argparse.Namespace) -> int:
    dims = _parse_dims(args.dims) if args.dims is not None else experiments.BENCH_DIMS
    text, failures = experiments.run_bench(dims, args.reps, _resolve_seed(args.seed))
    experiments.write_report(text, args.out)
    experiments.raise_failures(failures)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hadarot", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"hadarot {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    experiment = commands.add_parser("experiment", help="run a Monte Carlo or table pipeline")
    pipelines = experiment.add_subparsers(dest="pipeline", required=True)
    marginal = pipelines.add_parser("marginal", help="mean coordinate KS versus dimension")
    _add_experiment_flags(marginal, default_inputs=200)
    marginal.set_defaults(func=_cmd_marginal)
    lower = pipelines.add_parser("lower-bound", help="explicit transport lower-bound table")
    _add_experiment_flags(lower, default_inputs=1)
    lower.set_defaults(func=_cmd_lower_bound)
    e1 = pipelines.add_parser("e1", help="first-basis-vector Wasserstein sandwich")
    _add_experiment_flags(e1, default_inputs=1)
    e1.set_defaults(func=_cmd_e1)

    verify = commands.add_parser("verify", help="run the inequality verifier suite")
    verify.add_argument("--only", type=str, default=None, help="run a single verifier by name")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--allowance-scale", type=float, default=1.0, dest="allowance_scale")
    verify.add_argument("--out", type=str, default=None)
    verify.set_defaults(func=_cmd_verify)

    bench = commands.add_parser("bench", help="timing benchmarks")
    kinds = bench.add_subparsers(dest="kind", required=True)
    fwht = kinds.add_parser("fwht", help="fast transform timing and scaling check")
    fwht.add_argument("--dims", type=str, default=None)
    fwht.add_argument("--reps", type=int, default=9)
    fwht.add_argument("--seed", type=int, default=None)
    fwht.add_argument("--out", type=str, default=None)
    fwht.set_defaults(func=_cmd_bench_fwht)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ExperimentAssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
