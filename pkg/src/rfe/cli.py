"""Command-line interface: run, sweep, bounds, spectrum, verify.

All commands are seeded and deterministic: identical invocations (including
the seed) produce byte-identical output.  The environment variable
``RFE_SEED`` overrides ``--seed`` when set.  Output goes to stdout or to
``--output`` as JSON or CSV (comma-separated, UTF-8, LF, mandatory header).

Exit codes: 0 success, 1 verification failure, 2 invalid input (bad flags,
malformed noise JSON, noise past its threshold).

Noise models are passed as one JSON object, e.g.::

    {"kind": "ideal"}
    {"kind": "ban", "eta_bar": 0.05, "strategy": "sign_flip"}
    {"kind": "ban", "eta_bar": 0.1,
     "strategy": {"name": "custom", "eta1": [...], "eta2": [...]}}
    {"kind": "gaussian", "sigma": 0.1}
    {"kind": "gaussian_linear", "sigma": 0.01}
    {"kind": "dephasing", "t2": 630.0}
    {"kind": "high_coherence", "t2": 6300.0}
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .bounds import BoundsUnachievable, bounds_report, grid_size
from .estimator import (
    RunConfig,
    estimate_phase,
    run_rfe,
    spectrum_csv,
    trial_to_dict,
)
from .harness import FixedTheta, UniformTheta, noise_sweep, sweep_csv
from .noise import AdversaryStrategy, noise_from_dict, noise_to_dict
from .spectrum import expected_spectrum
from .verify import SUITE_NAMES, run_suites

_DEFAULT_NOISE = '{"kind": "ideal"}'


@dataclass(frozen=True)
class CliConfig:
    """Resolved invocation; embedded in JSON outputs and re-parseable."""

    subcommand: str
    epsilon: Optional[float] = None
    delta: Optional[float] = None
    theta: Optional[object] = None  # float or the string "random"
    noise: Optional[dict] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    workers: Optional[int] = None
    samples: Optional[int] = None
    grid: Optional[int] = None
    family: Optional[str] = None
    values: Optional[tuple] = None
    strategy: Optional[str] = None
    output: Optional[str] = None
    format: str = "json"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["values"] = list(self.values) if self.values is not None else None
        return d


def config_from_dict(data: dict) -> CliConfig:
    """Inverse of CliConfig.to_dict (round-trip identity)."""
    kwargs = dict(data)
    if kwargs.get("values") is not None:
        kwargs["values"] = tuple(kwargs["values"])
    return CliConfig(**kwargs)


def _parse_theta(text: str):
    if text == "random":
        return "random"
    return float(text)


def _parse_values(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise ValueError(f"--grid wants comma-separated numbers, got {text!r}") from exc


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _resolve_theta(theta, seed: int):
    """A "random" theta is trial 0 of a campaign with this master seed."""
    if theta == "random":
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
        value = UniformTheta().draw(rng)
        run_seed = int.from_bytes(rng.bytes(8), "little")
        return value, run_seed
    return float(theta), seed


def _cmd_run(args) -> int:
    noise = noise_from_dict(json.loads(args.noise))
    config = CliConfig(subcommand="run", epsilon=args.epsilon, delta=args.delta,
                       theta=args.theta, noise=noise_to_dict(noise), seed=args.seed,
                       samples=args.samples, grid=args.grid,
                       format=args.format)
    theta, run_seed = _resolve_theta(args.theta, args.seed)
    if args.samples is not None:
        K = args.grid if args.grid is not None else grid_size(args.epsilon)
        result = run_rfe(RunConfig(samples=args.samples, grid_size=K, theta=theta,
                                   noise=noise, seed=run_seed))
    else:
        result = estimate_phase(args.epsilon, args.delta, noise, theta, seed=run_seed)
    if args.format == "csv":
        _emit(spectrum_csv(result.spectrum.coefficients), args.output)
        return 0
    error = abs(result.theta_hat - theta)
    payload = {
        "config": config.to_dict(),
        "theta_true": theta,
        "error": error,
        "success": bool(error <= args.epsilon),
        "result": trial_to_dict(result),
    }
    _emit(_json_text(payload), args.output)
    return 0


def _cmd_spectrum(args) -> int:
    noise = noise_from_dict(json.loads(args.noise))
    theta, run_seed = _resolve_theta(args.theta, args.seed)
    K = args.grid if args.grid is not None else grid_size(args.epsilon)
    config = CliConfig(subcommand="spectrum", epsilon=args.epsilon, theta=args.theta,
                       noise=noise_to_dict(noise), seed=args.seed, samples=args.samples,
                       grid=args.grid, format=args.format)
    if args.samples is not None:
        result = run_rfe(RunConfig(samples=args.samples, grid_size=K, theta=theta,
                                   noise=noise, seed=run_seed))
        coefficients = result.spectrum.coefficients
        extra = trial_to_dict(result)
    else:
        coefficients = expected_spectrum(theta, K).coefficients
        extra = None
    if args.format == "csv":
        _emit(spectrum_csv(coefficients), args.output)
        return 0
    payload = {"config": config.to_dict(), "theta_true": theta, "grid_size": K,
               "coefficients": [[float(v.real), float(v.imag)] for v in coefficients]}
    if extra is not None:
        payload["result"] = extra
    _emit(_json_text(payload), args.output)
    return 0


def _cmd_bounds(args) -> int:
    noise = noise_from_dict(json.loads(args.noise))
    report = bounds_report(args.epsilon, args.delta, noise)
    config = CliConfig(subcommand="bounds", epsilon=args.epsilon, delta=args.delta,
                       noise=noise_to_dict(noise), format=args.format)
    if args.format == "csv":
        d = report.to_dict()
        header = "epsilon,delta,kind,K,M,inflation_factor,expected_total_depth"
        row = (f"{d['epsilon']!r},{d['delta']!r},{d['noise']['kind']},{d['K']},"
               f"{d['M']},{d['inflation_factor']!r},{d['expected_total_depth']!r}")
        _emit(header + "\n" + row + "\n", args.output)
        return 0
    payload = {"config": config.to_dict(), "report": report.to_dict()}
    _emit(_json_text(payload), args.output)
    return 0


def _cmd_sweep(args) -> int:
    values = _parse_values(args.grid)
    if not values:
        raise ValueError("--grid must list at least one parameter value")
    strategy = AdversaryStrategy(args.strategy)
    sampling = FixedTheta(float(args.theta)) if args.theta != "random" else UniformTheta()
    points = noise_sweep(args.family, values, args.epsilon, args.delta,
                         trials_per_point=args.trials, master_seed=args.seed,
                         strategy=strategy, theta_sampling=sampling,
                         workers=args.workers)
    if args.format == "csv":
        _emit(sweep_csv(points), args.output)
        return 0
    config = CliConfig(subcommand="sweep", epsilon=args.epsilon, delta=args.delta,
                       theta=args.theta, trials=args.trials, seed=args.seed,
                       workers=args.workers, family=args.family, values=values,
                       strategy=args.strategy, format=args.format)
    payload = {"config": config.to_dict(), "points": [p.to_dict() for p in points]}
    _emit(_json_text(payload), args.output)
    return 0


def _cmd_verify(args) -> int:
    results = run_suites(args.suite, workers=args.workers, trials=args.trials,
                         outdir=args.outdir)
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.summary}")
    if args.output:
        report = {"suites": [r.to_dict() for r in results],
                  "passed": all(r.passed for r in results)}
        Path(args.output).write_text(_json_text(report), encoding="utf-8", newline="\n")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfe",
        description=("Randomized Fourier estimation of a phase: simulate runs, "
                     "sweep noise parameters, compute guaranteed resource counts, "
                     "dump spectra, and verify the quantitative claims."))
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, *, delta=True, theta=None, noise=True, seed=True, trials=None,
               workers=False):
        p.add_argument("--epsilon", type=float, required=True,
                       help="target accuracy in radians")
        if delta:
            p.add_argument("--delta", type=float, default=0.1,
                           help="failure probability budget (default 0.1)")
        if theta is not None:
            p.add_argument("--theta", type=_parse_theta, default=theta,
                           help='true phase in [0, 2*pi), or "random"')
        if noise:
            p.add_argument("--noise", default=_DEFAULT_NOISE,
                           help="noise model JSON object (see rfe --help)")
        if seed:
            p.add_argument("--seed", type=int, default=0,
                           help="master seed (RFE_SEED env var overrides)")
        if trials is not None:
            p.add_argument("--trials", type=int, default=trials,
                           help=f"number of trials (default {trials})")
        if workers:
            p.add_argument("--workers", type=int, default=None,
                           help="worker processes (default: all cores); never "
                                "changes results")
        p.add_argument("--output", default=None, help="write to this path "
                       "instead of stdout")

    p_run = sub.add_parser("run", help="one estimation run")
    common(p_run, theta="random")
    p_run.add_argument("--samples", type=int, default=None,
                       help="override the certified sample count")
    p_run.add_argument("--grid", type=int, default=None,
                       help="override the grid size K (with --samples)")
    p_run.add_argument("--format", choices=("json", "csv"), default="json",
                       help="csv dumps the estimated spectrum")
    p_run.set_defaults(func=_cmd_run)

    p_spec = sub.add_parser("spectrum", help="dump an estimated or exact spectrum")
    common(p_spec, delta=False, theta="random")
    p_spec.add_argument("--samples", type=int, default=None,
                        help="simulate with this many samples (omit for the "
                             "exact expected spectrum)")
    p_spec.add_argument("--grid", type=int, default=None,
                        help="override the grid size K")
    p_spec.add_argument("--format", choices=("csv", "json"), default="csv")
    p_spec.set_defaults(func=_cmd_spectrum)

    p_bounds = sub.add_parser("bounds", help="grid size, sample count, inflation "
                                             "for a target and a noise model")
    common(p_bounds, theta=None, seed=False)
    p_bounds.add_argument("--format", choices=("json", "csv"), default="json")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_sweep = sub.add_parser("sweep", help="success-rate sweep over a noise grid")
    common(p_sweep, theta="random", noise=False, trials=100, workers=True)
    p_sweep.add_argument("--family", required=True,
                         choices=("ideal", "ban", "gaussian", "dephasing",
                                  "high_coherence"),
                         help="swept parameter: epsilon (ideal), eta_bar (ban), "
                              "sigma (gaussian), K/T2 (dephasing, high_coherence)")
    p_sweep.add_argument("--grid", required=True,
                         help="comma-separated parameter values")
    p_sweep.add_argument("--strategy", default="sign_flip",
                         choices=[s.value for s in AdversaryStrategy],
                         help="adversary strategy for the ban family")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", action="append", default=None,
                          choices=list(SUITE_NAMES),
                          help="suite name (repeatable; default: all)")
    p_verify.add_argument("--trials", type=int, default=None,
                          help="override trial counts of the Monte Carlo suites")
    p_verify.add_argument("--workers", type=int, default=None,
                          help="worker processes (default: all cores)")
    p_verify.add_argument("--seed", type=int, default=0, help=argparse.SUPPRESS)
    p_verify.add_argument("--outdir", default=None,
                          help="directory for emitted artifacts (demo spectrum CSV)")
    p_verify.add_argument("--output", default=None,
                          help="write the full JSON report to this path")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get("RFE_SEED")
    if env_seed is not None and hasattr(args, "seed"):
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"error: RFE_SEED must be an integer, got {env_seed!r}", file=sys.stderr)
            return 2
    if args.subcommand == "verify" and args.suite is None:
        args.suite = ["all"]
    try:
        return args.func(args)
    except BoundsUnachievable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
