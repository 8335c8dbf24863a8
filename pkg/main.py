"""
frl - Command-line verification of Randers-changed (alpha, beta)-Finsler metrics
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
load_dotenv()

from pydantic import ValidationError

from agents.scenario_runner import COMMANDS, ScenarioRunner
from models.schemas import Scenario
from services.errors import InputError
from services.report_writer import format_report

logger = logging.getLogger("frl")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frl", description=__doc__.strip())
    commands = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub = commands.add_parser(command)
        sub.add_argument("--config", required=True, help="Scenario JSON document")
        sub.add_argument("--out", default=None, help="Report path; stdout when omitted")
        sub.add_argument("--seed", type=int, default=None, help="Override random_samples.seed")
        sub.add_argument("--tol-cond", type=float, default=None, help="Override the condition residual tolerance")
        sub.add_argument("--tol-direct", type=float, default=None, help="Override the direct residual tolerance")
        if command == "flatness":
            sub.add_argument("--projective", action="store_true", help="Projective flatness system only")
            sub.add_argument("--dual", action="store_true", help="Dual flatness system only")
    return parser


def load_scenario(path: str) -> Scenario:
    """Parse and validate a scenario document; diagnostics name the line or the field"""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read scenario ({exc.strerror})")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    try:
        return Scenario.model_validate(document)
    except ValidationError as exc:
        lines = [f"{path}: scenario does not match the schema"]
        for error in exc.errors():
            location = ".".join(str(part) for part in error["loc"]) or "<root>"
            lines.append(f"  {location}: {error['msg']}")
        raise InputError("\n".join(lines))


def apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    update = {}
    if args.seed is not None:
        if scenario.random_samples is None:
            logger.warning("--seed given but the scenario has no random_samples; ignored")
        else:
            update["random_samples"] = scenario.random_samples.model_copy(update={"seed": args.seed})
    tolerances = {}
    if args.tol_cond is not None:
        tolerances["tol_cond"] = args.tol_cond
    if args.tol_direct is not None:
        tolerances["tol_direct"] = args.tol_direct
    if tolerances:
        update["tolerances"] = scenario.tolerances.model_copy(update=tolerances)
    return scenario.model_copy(update=update) if update else scenario


def selected_modes(args: argparse.Namespace) -> Optional[List[str]]:
    if args.command != "flatness":
        return None
    modes = [mode for mode in ("projective", "dual") if getattr(args, mode)]
    return modes or None


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=os.getenv("FRL_LOG_LEVEL", "WARNING").upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        scenario = apply_overrides(load_scenario(args.config), args)
        runner = ScenarioRunner()
        report = runner.run(scenario, args.command, selected_modes(args), os.getenv("FRL_TIMESTAMP"))
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR

    text = format_report(report.model_dump(mode="json"))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)

    summary = report.summary
    logger.info("%s: %d samples, %d errors, %d failed checks", args.command,
                summary.samples, summary.errors, summary.failed_checks)
    return EXIT_OK if summary.all_passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
