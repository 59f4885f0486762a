"""Exhaustive scan progress monitoring."""

import time
from typing import Any, Dict

import structlog


class ScanMonitor:
    """Tracks scanned mask counts per run and reports progress on the log stream."""

    def __init__(self, report_every: int = 1 << 20):
        self.logger = structlog.get_logger(self.__class__.__name__)
        self.report_every = report_every
        self.runs: Dict[str, Dict[str, Any]] = {}

    def start_scan(self, run_id: str, total_masks: int, **context: Any) -> Dict[str, Any]:
        """Start monitoring a scan."""
        run = {
            "run_id": run_id,
            "start_time": time.monotonic(),
            "total_masks": total_masks,
            "masks_done": 0,
            "graphs_scanned": 0,
            "next_report": self.report_every,
            "context": context,
        }
        self.runs[run_id] = run
        self.logger.info("Scan started", run_id=run_id, total_masks=total_masks, **context)
        return run

    def record_chunk(self, run_id: str, masks_done: int, graphs_scanned: int):
        """Record a finished chunk of the mask range."""
        run = self.runs.get(run_id)
        if run is None:
            return
        run["masks_done"] += masks_done
        run["graphs_scanned"] += graphs_scanned
        if run["masks_done"] >= run["next_report"]:
            run["next_report"] += self.report_every
            self.logger.info(
                "Scan progress",
                run_id=run_id,
                masks_done=run["masks_done"],
                total_masks=run["total_masks"],
                graphs_scanned=run["graphs_scanned"],
            )

    def complete_scan(self, run_id: str) -> Dict[str, Any]:
        """Complete monitoring for a scan and return its statistics."""
        run = self.runs.pop(run_id, None)
        if run is None:
            return {}
        duration = time.monotonic() - run["start_time"]
        stats = {
            "run_id": run_id,
            "duration": duration,
            "masks_done": run["masks_done"],
            "graphs_scanned": run["graphs_scanned"],
            "rate": run["masks_done"] / duration if duration > 0 else 0.0,
        }
        self.logger.info("Scan completed", **stats)
        return stats
