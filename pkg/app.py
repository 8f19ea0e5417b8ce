import logging

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

import argparse
import os
import sys
from typing import Any, Dict, List, Optional

from core.errors import ConfigError, GrhsError
from utils.commands import CommandResult, command_registry
from utils.config import COMMANDS, RunConfig, build_run_config, load_defaults
from utils.reports import write_json

REPORT_SCHEMA = "report-v1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


#########################
# Command line
#########################

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grhs-lab",
        description="Verify, construct and probe gradient Ricci-harmonic solitons on warped products.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON run file; flags override its values")
    parser.add_argument("--gallery", help="gallery entry id or alias")
    parser.add_argument("--case", dest="case_id", type=int, choices=[1, 2, 3, 4], help="classified case")
    parser.add_argument("--tol", type=float, help="check tolerance (stepper tolerance for geodesics)")
    parser.add_argument("--grid", help="xi grid as a:b:count")
    parser.add_argument("--s-max", dest="s_max", type=float, help="geodesic parameter length")
    parser.add_argument("--seed", type=int, help="root seed for every random draw")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--variant", help="gallery variant, e.g. theta-free")
    parser.add_argument("--step", dest="steps", type=float, action="append", default=[],
                        help="finite-difference step (repeatable)")
    parser.add_argument("--count", type=int, help="number of probe geodesics")
    parser.add_argument("--sampler", choices=["generic", "transverse"])
    parser.add_argument("--system", choices=["levi-civita", "split", "flat-factor"])
    parser.add_argument("--sign", choices=["+", "-"])
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true")
    verbosity.add_argument("--quiet", action="store_true")
    return parser


def configure_logging(verbose: bool, quiet: bool):
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif quiet:
        logging.getLogger().setLevel(logging.WARNING)


#########################
# Run
#########################

def _report(command: str, exit_code: int, config: Optional[Dict[str, Any]], result: Dict[str, Any],
            outputs: List[str], error: Optional[BaseException] = None) -> Dict[str, Any]:
    report = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "exit_code": exit_code,
        "passed": exit_code == EXIT_OK,
        "config": config,
        "result": result,
        "outputs": [os.path.basename(p) for p in outputs],
    }
    if error is not None:
        report["error"] = {"type": type(error).__name__, "message": str(error)}
    return report


def write_report(out_dir: str, report: Dict[str, Any]) -> str:
    return write_json(os.path.join(out_dir, f"{report['command']}-report.json"), report, REPORT_SCHEMA)


def run(config: RunConfig) -> int:
    """
    Execute one command and write its report.

    Args:
        config: validated run configuration

    Returns:
        Exit status: 0 all checks passed, 1 a check failed, 2 configuration error,
        3 numerical failure
    """
    logger.info(f"Running {config.command}")
    handler = command_registry.get(config.command)
    outcome = CommandResult(False)
    error = None
    try:
        outcome = handler(config)
        exit_code = EXIT_OK if outcome.passed else EXIT_CHECK_FAILED
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        exit_code, error = EXIT_CONFIG, e
    except (GrhsError, ArithmeticError, ValueError) as e:
        logger.error(f"{config.command} failed: {e}")
        exit_code, error = EXIT_NUMERICAL, e

    report = _report(config.command, exit_code, config.to_json(), outcome.result, outcome.outputs, error)
    path = write_report(config.out, report)
    logger.info(f"{config.command} finished with exit status {exit_code}; report at {path}")
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    flags = vars(args)
    flags.pop("verbose")
    flags.pop("quiet")

    defaults = load_defaults()
    try:
        config = build_run_config(flags, defaults)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        report = _report(args.command, EXIT_CONFIG, None, {}, [], e)
        write_report(args.out or "out", report)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
