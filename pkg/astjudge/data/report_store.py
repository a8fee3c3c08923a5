"""Report storage: writes corpus results for inspection and meta-analysis.

Three outputs per corpus run, all under one output directory:
  1. revisions/{revision}.json: one RevisionReport per revision
  2. summary.json: the CorpusReport (totals, per-project totals, revisions)
  3. runs_index.json: one row appended per run for cross-run analytics

Nested revision ids ("project/rev") keep their directory structure.
"""
from __future__ import annotations

import json
import logging
from datetime import datetime
from pathlib import Path

from astjudge import config
from astjudge.pipeline.reports import CorpusReport, RevisionReport, write_model

log = logging.getLogger("astjudge.store")

INDEX_SCHEMA_VERSION = 1
INDEX_NAME = "runs_index.json"
SUMMARY_NAME = "summary.json"


# ═══════════════════════════════════════════════════════════════
#  REPORTS
# ═══════════════════════════════════════════════════════════════

def store_revision(out_dir: Path, report: RevisionReport) -> Path:
    return write_model(out_dir / "revisions" / f"{report.revision}.json", report)


def store_corpus(report: CorpusReport, out_dir: Path | str | None = None) -> Path:
    """Write every revision report plus summary.json; returns the summary path."""
    out_dir = Path(out_dir) if out_dir else config.OUTPUT_DIR
    for rev in report.revisions:
        store_revision(out_dir, rev)
    path = write_model(out_dir / SUMMARY_NAME, report)
    log.info(f"[store] {len(report.revisions)} revision reports -> {out_dir}")
    return path


# ═══════════════════════════════════════════════════════════════
#  RUNS INDEX (cross-run analytics)
# ═══════════════════════════════════════════════════════════════

def index_run(run_id: str, report: CorpusReport, *, out_dir: Path | str | None = None,
              corpus: str = "", duration_seconds: float = 0.0) -> bool:
    """Append a run summary to the cross-run index.

    Returns False when run_id is already indexed.
    """
    out_dir = Path(out_dir) if out_dir else config.OUTPUT_DIR
    path = out_dir / INDEX_NAME
    if path.exists():
        index = json.loads(path.read_text(encoding="utf-8"))
    else:
        index = {"runs": [], "schema_version": INDEX_SCHEMA_VERSION}

    if run_id in {r["run_id"] for r in index["runs"]}:
        return False

    index["runs"].append({
        "run_id": run_id,
        "date": datetime.now().strftime("%Y-%m-%d %H:%M"),
        "corpus": corpus,
        "algorithms": list(report.algorithms),
        "revision_count": report.revision_count,
        "error_count": report.error_count,
        "flagged": {t.algorithm: t.flagged_revisions for t in report.totals},
        "inaccurate_statements": {t.algorithm: t.inaccurate_statements
                                  for t in report.totals},
        "duration_seconds": round(duration_seconds, 2),
    })
    out_dir.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(index, indent=2, ensure_ascii=False), encoding="utf-8")
    return True


def load_index(out_dir: Path | str | None = None) -> dict:
    path = (Path(out_dir) if out_dir else config.OUTPUT_DIR) / INDEX_NAME
    if not path.exists():
        return {"runs": [], "schema_version": INDEX_SCHEMA_VERSION}
    return json.loads(path.read_text(encoding="utf-8"))
