"""Run Tracer: per-phase timings for every revision of a run.

For each phase records:
  - phase name (parse, tokenize, map:<alg>, refine:<alg>, judge:<a>-<b>)
  - the revision it ran for
  - duration and a few counts (nodes, tokens, pairs, verdicts)

Each run produces one JSON file in the trace directory. Traces never feed
back into reports.
"""
from __future__ import annotations

import json
import logging
import time
from collections import defaultdict
from datetime import datetime
from pathlib import Path

from astjudge import config

log = logging.getLogger("astjudge.tracer")


class RunTracer:
    """Collects phase timings; save() writes them out."""

    def __init__(self, run_id: str | None = None, mode: str = "corpus",
                 trace_dir: Path | None = None):
        self.run_id = run_id or f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}"
        self.mode = mode
        self.trace_dir = Path(trace_dir) if trace_dir else config.TRACE_DIR
        self.start_time = time.time()
        self.entries: list[dict] = []
        self._current: dict | None = None

    # ═══════════════════════════════════════════════════════════════
    #  PUBLIC API
    # ═══════════════════════════════════════════════════════════════

    def begin_phase(self, phase: str, revision: str = ""):
        self._current = {
            "phase": phase,
            "revision": revision,
            "timestamp": datetime.now().isoformat(),
            "_t0": time.perf_counter(),
        }

    def end_phase(self, **counts):
        """Close the open phase, attaching any counts given."""
        if not self._current:
            return
        entry = self._current
        entry["duration_ms"] = round((time.perf_counter() - entry.pop("_t0")) * 1000, 3)
        entry.update(counts)
        self.entries.append(entry)
        self._current = None

    def record(self, phase: str, revision: str, duration_ms: float, **counts):
        """Add an already-timed phase (worker processes report this way)."""
        self.entries.append({"phase": phase, "revision": revision,
                             "duration_ms": round(duration_ms, 3), **counts})

    def merge(self, entries: list[dict]):
        """Append entries collected by another tracer, e.g. in a worker process."""
        self.entries.extend(entries)

    def save(self) -> Path:
        """Write the trace JSON and return its path."""
        trace = {
            "run_id": self.run_id,
            "mode": self.mode,
            "started": datetime.fromtimestamp(self.start_time).isoformat(),
            "completed": datetime.now().isoformat(),
            "total_duration_seconds": round(time.time() - self.start_time, 2),
            "revisions": len({e["revision"] for e in self.entries}),
            "phase_totals_ms": self._phase_totals(),
            "phases": self.entries,
        }
        self.trace_dir.mkdir(parents=True, exist_ok=True)
        path = self.trace_dir / f"{self.run_id}.json"
        path.write_text(json.dumps(trace, indent=2, ensure_ascii=False, default=str),
                        encoding="utf-8")
        log.info(f"[Tracer] Saved: {path}")
        log.info(f"[Tracer] {len(self.entries)} phases, "
                 f"{trace['total_duration_seconds']:.2f}s total")
        return path

    # ═══════════════════════════════════════════════════════════════
    #  HELPERS
    # ═══════════════════════════════════════════════════════════════

    def _phase_totals(self) -> dict[str, float]:
        """Summed duration per phase family (map:gt and map:ijm stay apart)."""
        totals: dict[str, float] = defaultdict(float)
        for entry in self.entries:
            totals[entry["phase"]] += entry.get("duration_ms", 0.0)
        return {k: round(v, 3) for k, v in sorted(totals.items())}
