"""
Command-line driver.

    python src/main.py solve   --problem schrodinger --potential harmonic:omega=1 --grid 1,128,20 --count 10
    python src/main.py verify  --problem schrodinger --states output/states.csv
    python src/main.py momdist --problem hydrogen-radial [--analytic]
    python src/main.py demo

Exit codes: 0 success, 1 usage/config/state-file error, 2 physics-check failure.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from config import OUTPUTS, PROBLEMS, RunConfig, build_config
from errors import CheckFailure, ConfigError, PlaneWaveError, SolverError
from report import artifact_path, write_csv
from utils import (
    PipelineResult,
    compute_limits,
    configure_logging,
    run_demo_pipeline,
    run_momentum_pipeline,
    run_solve_pipeline,
    run_verify_pipeline,
)

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK = 2

ARTIFACT_FILES = {
    "report-json": "report.json",
    "amplitudes-csv": "amplitudes.csv",
    "momdist-csv": "momdist.csv",
    "states-csv": "states.csv",
    "demo-checks": "demo_checks.csv",
}


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------
# Parser
# ---------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", choices=PROBLEMS)
    common.add_argument("--potential", help="preset, e.g. harmonic:omega=1 or box:width=10")
    common.add_argument("--grid", help="dim,n,extent (n a power of two)")
    common.add_argument("--mass", type=float)
    common.add_argument("--charge", type=float, help="particle charge q (electron: -1)")
    common.add_argument("--c", type=float, help="speed of light in atomic units")
    common.add_argument("--count", type=int, help="number of states")
    common.add_argument("--outputs", help=f"comma list of {','.join(OUTPUTS)}")
    common.add_argument("--seed", type=int)
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--config", help="JSON config file; flags win on conflict")
    common.add_argument("--threads", type=int, help="cap on BLAS and FFT threads")
    common.add_argument("--log-level", dest="log_level")

    parser = CliParser(prog="planewave-qm", description="Plane-wave spectral eigensolver and checks")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve for eigenpairs and check them")
    verify = sub.add_parser("verify", parents=[common], help="re-check stored or freshly solved states")
    verify.add_argument("--states", help="states.csv from an earlier solve")
    momdist = sub.add_parser("momdist", parents=[common], help="hydrogen 1s momentum distribution")
    momdist.add_argument("--analytic", action="store_true", default=None, help="use the exact 1s function")
    sub.add_parser("demo", parents=[common], help="run the acceptance suite and print a table")
    return parser


def flags_from_args(args: argparse.Namespace) -> dict:
    skip = {"command", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


# ---------------------------------------------------
# Commands
# ---------------------------------------------------
def write_outputs(cfg: RunConfig, result: PipelineResult, always: Sequence[str] = ()) -> None:
    wanted = list(cfg.outputs) + [name for name in always if name not in cfg.outputs]
    for name in wanted:
        path = artifact_path(cfg.out_dir, ARTIFACT_FILES[name])
        if name == "report-json":
            result.report.write_json(path)
        elif name in result.frames:
            write_csv(result.frames[name], path)
        else:
            logger.warning("output %s is not produced by %s runs; skipped", name, cfg.problem)


def finish(result: PipelineResult) -> int:
    report = result.report
    if report.states:
        print("\nEigenstates:")
        print(report.summary_frame().to_string(index=False))
    if report.checks and report.command != "demo":
        print("\nChecks:")
        print(report.checks_frame().to_string(index=False))
    failures = report.failures()
    for line in failures:
        logger.error("check failed: %s", line)
    return EXIT_CHECK if failures else EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    result = run_solve_pipeline(cfg)
    write_outputs(cfg, result)
    return finish(result)


def cmd_verify(cfg: RunConfig) -> int:
    result = run_verify_pipeline(cfg)
    write_outputs(cfg, result)
    return finish(result)


def cmd_momdist(cfg: RunConfig) -> int:
    result = run_momentum_pipeline(cfg)
    write_outputs(cfg, result, always=("momdist-csv",))
    return finish(result)


def demo(cfg: RunConfig) -> int:
    print("\nRunning acceptance suite...")
    result = run_demo_pipeline(cfg)
    print(result.frames["demo-checks"].to_string(index=False))
    write_outputs(cfg, result, always=("amplitudes-csv", "momdist-csv", "demo-checks"))
    return finish(result)


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "momdist": cmd_momdist, "demo": demo}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(flags_from_args(args), args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(cfg.log_level)

    try:
        with compute_limits(cfg.threads):
            return COMMANDS[args.command](cfg)
    except (CheckFailure, SolverError) as exc:
        logger.error("%s", exc)
        return EXIT_CHECK
    except (PlaneWaveError, ValueError) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
