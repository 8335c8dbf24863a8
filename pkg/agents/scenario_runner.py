"""
Scenario Runner - Dispatches a command over every sample and assembles the report
"""

import logging
import os
import uuid
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from agents.context import ScenarioContext, build_context, resolve_samples
from agents.flatness_agent import FlatnessAgent
from agents.inverse_agent import InverseAgent
from agents.minkowski_agent import MinkowskiAgent
from agents.tensor_agent import TensorAgent
from memory.shared_memory import SharedMemory
from models.schemas import MinkowskiResult, Report, ReportSummary, SampleResult, Scenario
from services.base_metrics import base_bundle
from services.errors import FinslerError, InputError
from services.randers_change import fbar

logger = logging.getLogger(__name__)

COMMANDS = ("tensors", "inverse-check", "flatness", "minkowski-check", "all")
MODES = ("projective", "dual")


class ScenarioRunner:
    """Runs one command of a scenario across its samples, in parallel, keyed by sample index"""

    def __init__(self, shared_memory: Optional[SharedMemory] = None, max_workers: Optional[int] = None):
        self.shared_memory = shared_memory or SharedMemory()
        self.max_workers = max_workers or int(os.getenv("FRL_THREADS", os.cpu_count() or 1))
        self.tensor_agent = TensorAgent()
        self.inverse_agent = InverseAgent()
        self.flatness_agent = FlatnessAgent()
        self.minkowski_agent = MinkowskiAgent()

    def run(self, scenario: Scenario, command: str, modes: Optional[Sequence[str]] = None,
            generated_at: Optional[str] = None) -> Report:
        if command not in COMMANDS:
            raise InputError(f"unknown command '{command}'; expected one of {', '.join(COMMANDS)}")
        modes = tuple(modes) if modes else MODES
        context = build_context(scenario)
        run_id = str(uuid.uuid4())

        samples: List[SampleResult] = []
        if command != "minkowski-check":
            points = resolve_samples(context)
            logger.info("run %s: %s on %d samples with %d workers", run_id, command, len(points), self.max_workers)
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                futures = [pool.submit(self._evaluate_sample, context, run_id, index, x, y, command, modes)
                           for index, (x, y) in enumerate(points)]
                for future in futures:
                    future.result()
            samples = self.shared_memory.get_run_results(run_id)
            logger.debug("shared memory after run %s: %s", run_id, self.shared_memory.get_statistics())

        minkowski = None
        if command == "minkowski-check" or (command == "all" and scenario.minkowski is not None):
            minkowski = self.minkowski_agent.evaluate(context)

        return Report(
            command=command,
            generated_at=generated_at,
            scenario=scenario.model_dump(mode="json"),
            samples=samples,
            minkowski=minkowski,
            summary=summarize(samples, minkowski),
        )

    def _evaluate_sample(self, context: ScenarioContext, run_id: str, index: int,
                         x: np.ndarray, y: np.ndarray, command: str, modes: Iterable[str]) -> None:
        result = SampleResult(index=index, x=x.tolist(), y=y.tolist(), status="ok")
        agent = "runner"
        try:
            bundle = base_bundle(context.metric, context.one_form, x, y)
            fbar(context.family, bundle.F, bundle.beta)
            if command in ("tensors", "all"):
                agent = "tensor"
                result.tensors, deltas = self.tensor_agent.evaluate(context, x, y)
                result.deltas.extend(deltas)
            if command in ("inverse-check", "all"):
                agent = "inverse"
                result.inverse, deltas = self.inverse_agent.evaluate(context, x, y)
                result.deltas.extend(deltas)
            if command in ("flatness", "all"):
                agent = "flatness"
                result.conditions, deltas = self.flatness_agent.evaluate(context, x, y, modes)
                result.deltas.extend(deltas)
        except FinslerError as exc:
            logger.warning("sample %d failed in %s agent: %s", index, agent, exc)
            result = SampleResult(index=index, x=x.tolist(), y=y.tolist(), status="error",
                                  error=str(exc), error_type=exc.error_type)
        else:
            if any(not delta.passed for delta in result.deltas):
                result.status = "failed"
        logger.debug("sample %d: status=%s with %d deltas", index, result.status, len(result.deltas))
        self.shared_memory.store_result(run_id, index, result)


def summarize(samples: List[SampleResult], minkowski: Optional[MinkowskiResult]) -> ReportSummary:
    failed = sum(1 for sample in samples for delta in sample.deltas if not delta.passed)
    if minkowski is not None and not minkowski.holds:
        failed += 1
    errors = sum(1 for sample in samples if sample.status == "error")

    verdicts: Dict[str, Counter] = {}
    for sample in samples:
        for condition in sample.conditions:
            verdicts.setdefault(condition.mode, Counter())[condition.verdict] += 1
    return ReportSummary(
        samples=len(samples),
        errors=errors,
        failed_checks=failed,
        verdicts={mode: dict(counts) for mode, counts in verdicts.items()},
        all_passed=failed == 0 and errors == 0,
    )
