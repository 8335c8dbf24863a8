"""
Shared Memory System - Thread-safe store of per-sample results shared by the agents
"""

import logging
import threading
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from models.schemas import SampleResult

logger = logging.getLogger(__name__)


@dataclass
class MemoryEntry:
    """Individual memory entry structure"""
    run_id: str
    index: int
    timestamp: str
    result: Optional[SampleResult] = None


class SharedMemory:
    """Lock-guarded per-run store keyed by sample index"""

    def __init__(self, max_runs: int = 32):
        self._memory: Dict[Tuple[str, int], MemoryEntry] = {}
        self._runs: Dict[str, List[int]] = {}
        self._lock = threading.RLock()
        self.max_runs = max_runs

        # Statistics
        self._stats = {
            "total_entries": 0,
            "active_runs": 0,
            "errors": 0,
            "last_cleanup": datetime.utcnow().isoformat()
        }

    def store_result(self, run_id: str, index: int, result: SampleResult) -> None:
        """Store (or replace) the result of one sample"""
        with self._lock:
            key = (run_id, index)
            entry = self._memory.get(key)
            if entry is None:
                entry = MemoryEntry(run_id=run_id, index=index, timestamp=datetime.utcnow().isoformat())
                self._memory[key] = entry
                self._runs.setdefault(run_id, []).append(index)
            entry.result = result
            if result.status == "error":
                self._stats["errors"] += 1
            self._update_stats()
            self._cleanup_if_needed()

    def get_result(self, run_id: str, index: int) -> Optional[SampleResult]:
        with self._lock:
            entry = self._memory.get((run_id, index))
            return entry.result if entry else None

    def get_run_results(self, run_id: str) -> List[SampleResult]:
        """Results of a run ordered by sample index, whatever order they were stored in"""
        with self._lock:
            indices = sorted(self._runs.get(run_id, []))
            return [self._memory[(run_id, i)].result for i in indices if self._memory[(run_id, i)].result]

    def clear_run(self, run_id: str) -> int:
        with self._lock:
            indices = self._runs.pop(run_id, [])
            for i in indices:
                self._memory.pop((run_id, i), None)
            self._update_stats()
            return len(indices)

    def get_statistics(self) -> Dict[str, Any]:
        with self._lock:
            return dict(self._stats)

    def _update_stats(self) -> None:
        self._stats["total_entries"] = len(self._memory)
        self._stats["active_runs"] = len(self._runs)

    def _cleanup_if_needed(self) -> None:
        # oldest runs go first; dicts keep insertion order
        while len(self._runs) > self.max_runs:
            oldest = next(iter(self._runs))
            logger.debug("evicting run %s from shared memory", oldest)
            self.clear_run(oldest)
            self._stats["last_cleanup"] = datetime.utcnow().isoformat()
