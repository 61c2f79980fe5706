import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config import OutputFormat, Subcommand, resolve_threads
from errors import ConfigError, JacobiDensityError
from pipeline import PipelineOrchestrator, StageResult
from run_config import RunConfig, apply_overrides, parse_config
from tools import ResultWriter

logger = logging.getLogger("jacobi_density")

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacobi-density",
        description="Limiting eigenvalue density of scaled asymptotically periodic Jacobi matrices")
    parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--output", help="output path (stdout when omitted)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat])
    parser.add_argument("--n", type=int, help="block count of the truncated matrix")
    parser.add_argument("--zmin", type=float)
    parser.add_argument("--zmax", type=float)
    parser.add_argument("--points", type=int, help="density grid size")
    parser.add_argument("--max-order", type=int, dest="moments_max", help="highest moment order")
    parser.add_argument("--ks-threshold", type=float, dest="ks_threshold")
    parser.add_argument("--threads", type=int, help="worker threads (default: JACOBI_DENSITY_THREADS or 1)")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", field="config", path=args.config) from exc
    return apply_overrides(
        parse_config(text),
        output=args.output, format=args.format, n=args.n,
        zmin=args.zmin, zmax=args.zmax, points=args.points,
        moments_max=args.moments_max, ks_threshold=args.ks_threshold,
    )


def write_result(subcommand: Subcommand, config: RunConfig, result: StageResult) -> None:
    if subcommand == Subcommand.PLOT:
        output = Path(config.output or "density.csv")
        ResultWriter(OutputFormat.CSV, str(output)).write(result.tables, result.primary)
        output.with_suffix(".gp").write_text(result.script)
        return
    extra = {"passed": result.passed, "messages": result.messages} if subcommand == Subcommand.VALIDATE else None
    ResultWriter(config.format, config.output).write(result.tables, result.primary, extra)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    subcommand = Subcommand(args.subcommand)
    try:
        config = load_config(args)
        orchestrator = PipelineOrchestrator(threads=resolve_threads(args.threads))
        result = asyncio.run(orchestrator.run(subcommand, config))
        write_result(subcommand, config, result)
    except JacobiDensityError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True, default=str) + "\n")
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_ERROR
    if not result.passed:
        logger.warning("; ".join(result.messages))
        return EXIT_VALIDATION_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
