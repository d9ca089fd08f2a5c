"""Command-line runner for the verification experiments.

Every subcommand writes a JSON array (or CSV table) of reports and exits
0 if no gating row failed, 1 if one did, and 2 on bad arguments.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ForrelationError
from .experiments import core
from .experiments.parallel import WORKERS_ENV
from .experiments.report import ExperimentReport, Verdict, aggregate, dumps_csv, dumps_json
from .rng import RngStream

DEFAULT_SEED = 2718

# command -> (default n, allowed n range, default trials)
COMMANDS = {
    "fish": (10, (8, 16), 1_000),
    "check": (10, (8, 16), 100_000),
    "indep": (10, (8, 16), 1_000_000),
    "bias": (8, (6, 10), 3_000_000),
    "alicebob": (8, (6, 12), 1_000_000),
    "tvd": (4, (2, 4), None),
    "constants": (None, None, None),
    "all": (None, None, None),
}


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    trials: Optional[int] = None
    seed: int = DEFAULT_SEED
    workers: Optional[int] = None
    fmt: str = "json"
    out: Optional[str] = None
    timing: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        default_n, n_range, default_trials = COMMANDS[self.command]
        if self.n is None:
            self.n = default_n
        elif n_range is None:
            raise ValueError(f"{self.command} does not take --n")
        elif not n_range[0] <= self.n <= n_range[1]:
            raise ValueError(f"n must lie in [{n_range[0]}, {n_range[1]}], got {self.n}")
        if self.trials is None:
            self.trials = default_trials
        elif default_trials is None:
            raise ValueError(f"{self.command} does not take --trials")
        elif self.trials < 1:
            raise ValueError("--trials must be positive")
        if self.workers is not None and self.workers < 1:
            raise ValueError("--workers must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("--seed must fit in 64 unsigned bits")
        for key in ("overlap_trials", "classical_trials", "term_trials", "ratio_samples"):
            if key in self.extra and self.extra[key] < 1:
                raise ValueError(f"--{key.replace('_', '-')} must be positive")
        if self.command == "indep":
            ks = self.extra["k"]
            if any(not 1 <= k <= 8 for k in ks):
                raise ValueError("every k must lie in [1, 8]")
        if self.command == "check" and not 4 <= self.extra["classical_n"] <= 16:
            raise ValueError("--classical-n must lie in [4, 16]")


def _streams(seed: int):
    # One independent stream per experiment slot, so adding experiments never shifts others.
    return lambda slot: RngStream(seed, slot)


def run_fish(cfg: RunConfig) -> list[ExperimentReport]:
    s = _streams(cfg.seed)
    return [
        core.verify_ff(cfg.n, cfg.trials, s(1), workers=cfg.workers),
        core.verify_mostgood(cfg.n, cfg.trials, s(2), workers=cfg.workers),
    ]


def run_check(cfg: RunConfig) -> list[ExperimentReport]:
    s = _streams(cfg.seed)
    return [
        core.verify_fc(cfg.n, cfg.trials, s(3), workers=cfg.workers),
        core.verify_overlap(cfg.n, cfg.extra["overlap_trials"], s(4), workers=cfg.workers),
        core.verify_classical_fc(cfg.extra["classical_n"], cfg.extra["classical_trials"], s(5)),
    ]


def run_indep(cfg: RunConfig) -> list[ExperimentReport]:
    s = _streams(cfg.seed)
    reports = [core.verify_orthant_pairs(cfg.n, cfg.trials, s(6), workers=cfg.workers)]
    for k in cfg.extra["k"]:
        reports.append(core.verify_independence(cfg.n, k, cfg.extra["term_trials"], RngStream(cfg.seed, 7, (k,)),
                                                workers=cfg.workers))
    reports.append(core.verify_ratio_bound(2, cfg.extra["ratio_samples"], s(8)))
    return reports


def run_bias(cfg: RunConfig) -> list[ExperimentReport]:
    reports = []
    for solver in cfg.extra["solvers"]:
        for bias_on in (False, True):
            stream = RngStream(cfg.seed, 9, (int(bias_on), 0 if solver == "quantum" else 1))
            reports.append(core.run_bias_reduction(cfg.n, bias_on, cfg.trials, solver, stream, workers=cfg.workers))
    return reports


def run_alicebob(cfg: RunConfig) -> list[ExperimentReport]:
    reports = []
    for i, bob in enumerate(cfg.extra["bobs"]):
        reports.append(core.verify_alicebob(cfg.n, cfg.trials, bob, RngStream(cfg.seed, 10, (i,)),
                                            workers=cfg.workers))
        if cfg.extra["null"]:
            reports.append(core.verify_alicebob(cfg.n, cfg.trials, bob, RngStream(cfg.seed, 11, (i,)), null=True,
                                                workers=cfg.workers))
    return reports


def run_tvd(cfg: RunConfig) -> list[ExperimentReport]:
    return [core.verify_variation_distance(n) for n in range(2, cfg.n + 1)]


def run_constants(cfg: RunConfig) -> list[ExperimentReport]:
    return [core.verify_gaussian_tail_constants()]


def run_all(cfg: RunConfig) -> list[ExperimentReport]:
    reports = run_constants(cfg)
    steps = [
        ("fish", run_fish, {}),
        ("check", run_check, {"overlap_trials": 1_000, "classical_n": 12, "classical_trials": 2_000}),
        ("indep", run_indep, {"k": [2, 4, 8], "term_trials": 100_000, "ratio_samples": 500}),
        ("bias", run_bias, {"solvers": ["quantum"]}),
        ("alicebob", run_alicebob, {"bobs": ["greedy", "quantum"], "null": True}),
        ("tvd", run_tvd, {}),
    ]
    for name, fn, extra in steps:
        sub = RunConfig(name, seed=cfg.seed, workers=cfg.workers, extra=extra)
        sub.validate()
        reports.extend(fn(sub))
    return reports


RUNNERS: dict[str, Callable[[RunConfig], list[ExperimentReport]]] = {
    "fish": run_fish,
    "check": run_check,
    "indep": run_indep,
    "bias": run_bias,
    "alicebob": run_alicebob,
    "tvd": run_tvd,
    "constants": run_constants,
    "all": run_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default ${WORKERS_ENV}, else CPU count); results do not depend on it")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--timing", action="store_true", help="record wall-clock duration_ms (breaks byte-identity)")

    sized = argparse.ArgumentParser(add_help=False)
    sized.add_argument("--n", type=int, default=None, help="number of input bits (N = 2^n)")
    sized.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")

    parser = argparse.ArgumentParser(
        prog="forrelation",
        description="Seeded numerical checks of Fourier Fishing / Fourier Checking claims.",
        epilog=f"Environment: {WORKERS_ENV} sets the default worker count. "
               "Exit status: 0 all gating rows pass, 1 some row failed, 2 usage error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("fish", parents=[common, sized], help="FF-ALG success and good-tuple frequency")

    p = sub.add_parser("check", parents=[common, sized], help="FC-ALG expectations, overlap, classical checker")
    p.add_argument("--overlap-trials", type=int, default=1_000)
    p.add_argument("--classical-n", type=int, default=12)
    p.add_argument("--classical-trials", type=int, default=2_000)

    p = sub.add_parser("indep", parents=[common, sized], help="almost k-wise independence and subspace ratio")
    p.add_argument("--k", type=int, action="append", default=None, help="term order, repeatable (default 2 4 8)")
    p.add_argument("--term-trials", type=int, default=100_000, help="trials for the random-term sweep")
    p.add_argument("--ratio-samples", type=int, default=500)

    p = sub.add_parser("bias", parents=[common, sized], help="bias-detection reduction hit rates")
    p.add_argument("--solver", choices=("quantum", "greedy", "both"), default="quantum")

    p = sub.add_parser("alicebob", parents=[common, sized], help="hit rate per beta bin against the closed-form bound")
    p.add_argument("--bob", choices=("greedy", "quantum", "both"), default="both")
    p.add_argument("--null", action="store_true", help="also run the unbiased control")

    sub.add_parser("tvd", parents=[common, sized], help="exact variation distance between D and U (n <= 4)")
    sub.add_parser("constants", parents=[common], help="Gaussian tail constants by quadrature")
    sub.add_parser("all", parents=[common], help="full suite at default sizes")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {}
    if ns.command == "check":
        extra = {"overlap_trials": ns.overlap_trials, "classical_n": ns.classical_n,
                 "classical_trials": ns.classical_trials}
    elif ns.command == "indep":
        extra = {"k": ns.k or [2, 4, 8], "term_trials": ns.term_trials, "ratio_samples": ns.ratio_samples}
    elif ns.command == "bias":
        extra = {"solvers": ["quantum", "greedy"] if ns.solver == "both" else [ns.solver]}
    elif ns.command == "alicebob":
        extra = {"bobs": ["greedy", "quantum"] if ns.bob == "both" else [ns.bob], "null": ns.null}
    return RunConfig(ns.command, getattr(ns, "n", None), getattr(ns, "trials", None), ns.seed, ns.workers,
                     ns.fmt, ns.out, ns.timing, extra)


def render(reports: list[ExperimentReport], fmt: str, timing: bool = False) -> str:
    return dumps_json(reports, include_timing=timing) if fmt == "json" else dumps_csv(reports)


def exit_code(reports: list[ExperimentReport]) -> int:
    return 1 if aggregate(r.verdict for r in reports) is Verdict.FAIL else 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(ns)
    try:
        cfg.validate()
        reports = RUNNERS[cfg.command](cfg)
    except (ValueError, ForrelationError) as exc:
        print(f"forrelation {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    for r in reports:
        print(f"{r.experiment}: {r.verdict.value}", file=sys.stderr)
    text = render(reports, cfg.fmt, cfg.timing)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
