"""Report schema: pydantic models for everything the harness writes.

RevisionReport   one file revision: per-algorithm inaccurate statements,
                 per-pair inconsistency counts and flags, undecided residue
CorpusReport     totals, per-project totals and all revision reports
LabelEntry       one ground-truth statement with inaccurate mappings
EvalResult       tp / fp / fn with precision and recall (None when undefined)

All lists are sorted before a report is built so serialization is
byte-deterministic.
"""
from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from astjudge.errors import SchemaError
from astjudge.tree.interchange import parse_document

REPORT_SCHEMA_VERSION = 1


class _Doc(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VerdictDoc(_Doc):
    algorithm: str = ""
    granularity: str
    side: str
    element_id: int
    text: str
    range: tuple[int, int]
    line: int
    status: str
    decided_by: str
    evidence: str = ""
    against: str | None = None


class StatementDoc(_Doc):
    side: str
    range: tuple[int, int]
    line: int
    label: str
    statement_text: str
    verdicts: list[VerdictDoc] = Field(default_factory=list)


class AlgorithmReport(_Doc):
    algorithm: str
    flagged: bool
    inaccurate_statements: list[StatementDoc] = Field(default_factory=list)


class StatementKeyDoc(_Doc):
    side: str
    range: tuple[int, int]


class PairReport(_Doc):
    a: str
    b: str
    inconsistent_statement_count: int
    flagged: dict[str, list[StatementKeyDoc]] = Field(default_factory=dict)


class RevisionReport(_Doc):
    revision: str
    project: str | None = None
    error: str | None = None
    per_algorithm: list[AlgorithmReport] = Field(default_factory=list)
    pairs: list[PairReport] = Field(default_factory=list)
    undecided: list[VerdictDoc] = Field(default_factory=list)

    def algorithm(self, name: str) -> AlgorithmReport | None:
        for entry in self.per_algorithm:
            if entry.algorithm == name:
                return entry
        return None


class AlgorithmTotals(_Doc):
    algorithm: str
    inaccurate_statements: int = 0
    flagged_revisions: int = 0
    flagged_ratio: float = 0.0


class ProjectSummary(_Doc):
    project: str
    revisions: int
    totals: list[AlgorithmTotals] = Field(default_factory=list)


class CorpusReport(_Doc):
    schema_version: int = REPORT_SCHEMA_VERSION
    algorithms: list[str]
    revision_count: int = 0
    error_count: int = 0
    totals: list[AlgorithmTotals] = Field(default_factory=list)
    by_project: list[ProjectSummary] = Field(default_factory=list)
    revisions: list[RevisionReport] = Field(default_factory=list)


class LabelEntry(BaseModel):
    model_config = ConfigDict(extra="ignore")

    revision: str
    algorithm: str
    side: str
    statement_range: tuple[int, int]


class EvalResult(_Doc):
    algorithm: str
    tp: int
    fp: int
    fn: int
    precision: float | None = None
    recall: float | None = None


# ── serialization ──

def dumps_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2,
                      ensure_ascii=False) + "\n"


def write_model(path: Path, model: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_model(model), encoding="utf-8")
    return path


class _LabelFile(BaseModel):
    labels: list[LabelEntry]


def load_labels(doc: bytes | str | list | dict) -> list[LabelEntry]:
    """Labels file: a JSON list of entries, or {"labels": [...]}."""
    if isinstance(doc, (bytes, str)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SchemaError(f"schema: labels: {e.msg}") from e
    if isinstance(doc, list):
        doc = {"labels": doc}
    return parse_document(doc, _LabelFile).labels


def load_corpus_report(doc: bytes | str | dict) -> CorpusReport:
    return parse_document(doc, CorpusReport)
