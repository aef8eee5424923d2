#!/usr/bin/env python
import argparse
import asyncio
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any

import yaml
from numpy.linalg import LinAlgError

if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent.parent))

from pytmmse import Simulator, const
from pytmmse.exceptions import ConfigurationError, PyTMMSEException
from pytmmse.harness import (
    RunConfiguration,
    complexity_tables,
    emit_complexity_csv,
    emit_results,
    run_selftest,
)
from pytmmse.harness._dict_tools import DictTool
from pytmmse.harness.config import default_output_dir

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_RUNTIME = 2


def get_arguments(argv: list[str] | None = None) -> dict[str, Any]:
    """Get parsed arguments."""
    parser = argparse.ArgumentParser(
        description="pyTMMSE: low-rank tensor MMSE equalization experiments",
        epilog=(
            f"Results go to --out, else the campaign's output key, else"
            f" ${const.OUTPUT_DIR_ENV}, else ./{const.DEFAULT_OUTPUT_DIR}."
            f" Exit codes: 0 success, 1 configuration error, 2 runtime error."
        ),
    )
    parser.add_argument(
        "--json", help="print output as json instead of yaml", action="store_true"
    )
    parser.add_argument("-v", "--verbose", help="debug logging", action="store_true")

    subparser = parser.add_subparsers(dest="command")

    simulate = subparser.add_parser("simulate", help="run Monte Carlo campaigns")
    source = simulate.add_mutually_exclusive_group()
    source.add_argument("--config", help="INI run configuration", metavar="PATH", type=Path)
    source.add_argument(
        "--shipped",
        help="bundled configuration (default: desk)",
        choices=("desk", "full"),
        default="desk",
    )
    simulate.add_argument("--seed", help="master seed", type=int)
    simulate.add_argument("--trials", help="trials per sweep point", type=int)
    simulate.add_argument("--workers", help="worker threads", type=int)
    simulate.add_argument("--sweep", help="replace the sweeps", metavar="VAR=v1,v2,...")
    simulate.add_argument("--out", help="output directory", metavar="PATH", type=Path)
    simulate.add_argument(
        "--no-plot", help="skip the plot-data files", action="store_true"
    )

    complexity = subparser.add_parser("complexity", help="print product-count tables")
    complexity.add_argument("--iterations", help="outer iterations I", type=int, default=2)
    complexity.add_argument(
        "--quadratic-solve-term",
        help="charge N_d^2 instead of N_d for the trailing block term",
        action="store_true",
    )
    complexity.add_argument("--keys", help="print as key format", action="store_true")
    complexity.add_argument("--out", help="also write a CSV", metavar="PATH", type=Path)

    selftest = subparser.add_parser("selftest", help="run the numerical oracle checks")
    selftest.add_argument("--seed", help="random seed", type=int, default=0)

    arguments = vars(parser.parse_args(argv))

    if arguments["command"] is None:
        parser.error("a command is required: simulate, complexity or selftest")

    return arguments


def load_configuration(args: dict[str, Any]) -> RunConfiguration:
    if args["config"] is not None:
        run_config = RunConfiguration.from_file(args["config"])
    else:
        run_config = RunConfiguration.shipped(args["shipped"])
    for key in ("seed", "trials", "workers"):
        if args[key] is not None:
            run_config.override(key, str(args[key]))
    if args["sweep"]:
        run_config.override_sweep(args["sweep"])
    return run_config


async def simulate(args: dict[str, Any]) -> dict[str, Any]:
    campaigns = load_configuration(args).campaigns()
    summary: dict[str, Any] = {}
    for campaign in campaigns:
        directory = args["out"] or campaign.output or default_output_dir()
        async with Simulator(campaign.workers) as simulator:
            rows = await simulator.run(campaign)
        written = await emit_results(rows, directory, campaign.name, not args["no_plot"])
        summary[campaign.name] = {
            "files": [str(path) for path in written],
            "rows": [row.as_dict() for row in rows],
        }
    return DictTool().load(summary).round_floats().get_result()


def complexity(args: dict[str, Any]) -> Any:
    rows = complexity_tables(
        args["iterations"], quadratic_solve_term=args["quadratic_solve_term"]
    )
    if args["out"]:
        emit_complexity_csv(rows, args["out"])
    data: dict[str, list[dict[str, Any]]] = {}
    for row in rows:
        data.setdefault(row.table, []).append(asdict(row))
    processor = DictTool().load(data)
    return processor.get_flat_result() if args["keys"] else processor.get_result()


async def main(argv: list[str] | None = None) -> int:
    args = get_arguments(argv)
    logging.basicConfig(level=logging.DEBUG if args["verbose"] else logging.INFO)
    writer = json if args["json"] else yaml

    try:
        match args:
            case {"command": "simulate"}:
                writer.dump(await simulate(args), sys.stdout, sort_keys=False)

            case {"command": "complexity"}:
                writer.dump(complexity(args), sys.stdout, sort_keys=False)

            case {"command": "selftest", "seed": seed}:
                results = run_selftest(seed)
                data = {r.name: {"passed": r.passed, "detail": r.detail} for r in results}
                writer.dump(data, sys.stdout, sort_keys=False)
                if not all(r.passed for r in results):
                    return EXIT_RUNTIME

    except ConfigurationError as error:
        _LOGGER.error("Configuration error: %s", error)
        return EXIT_CONFIGURATION
    except (PyTMMSEException, LinAlgError, OSError) as error:
        _LOGGER.error("%s: %s", error.__class__.__name__, error)
        return EXIT_RUNTIME
    return EXIT_OK


def start() -> None:
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        _LOGGER.info("Aborted by user")


if __name__ == "__main__":
    start()
