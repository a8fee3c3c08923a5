"""Evaluation of detected statements against ground-truth labels.

A statement is identified by (revision, side, start, end). For each
algorithm:
    tp = detected and labeled
    fp = detected, not labeled
    fn = labeled, not detected
precision = tp / (tp + fp) and recall = tp / (tp + fn); either is None when
its denominator is zero.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from astjudge.pipeline.reports import (
    CorpusReport,
    EvalResult,
    LabelEntry,
    RevisionReport,
)

StatementKey = tuple[str, str, int, int]


def eval_counts(algorithm: str, tp: int, fp: int, fn: int) -> EvalResult:
    precision = tp / (tp + fp) if tp + fp > 0 else None
    recall = tp / (tp + fn) if tp + fn > 0 else None
    return EvalResult(algorithm=algorithm, tp=tp, fp=fp, fn=fn,
                      precision=precision, recall=recall)


def _revisions(report: CorpusReport | RevisionReport) -> list[RevisionReport]:
    if isinstance(report, RevisionReport):
        return [report]
    return list(report.revisions)


def detected_statements(report: CorpusReport | RevisionReport
                        ) -> dict[str, set[StatementKey]]:
    """Flagged statements per algorithm (union over all algorithm pairs)."""
    out: dict[str, set[StatementKey]] = {}
    for rev in _revisions(report):
        for entry in rev.per_algorithm:
            keys = out.setdefault(entry.algorithm, set())
            for stmt in entry.inaccurate_statements:
                keys.add((rev.revision, stmt.side, *stmt.range))
    return out


def labeled_statements(labels: Iterable[LabelEntry]) -> dict[str, set[StatementKey]]:
    out: dict[str, set[StatementKey]] = {}
    for label in labels:
        out.setdefault(label.algorithm, set()).add(
            (label.revision, label.side, *label.statement_range))
    return out


def evaluate(detected: Mapping[str, set[StatementKey]],
             labels: Iterable[LabelEntry] | Mapping[str, set[StatementKey]],
             revisions: Iterable[str] | None = None) -> dict[str, EvalResult]:
    """Per-algorithm EvalResult.

    Args:
        detected: statement keys flagged per algorithm
        labels: label entries, or keys already grouped per algorithm
        revisions: when given, only statements of these revisions count
            (labels for revisions that were not judged are ignored)
    """
    truth = labels if isinstance(labels, Mapping) else labeled_statements(labels)
    keep = set(revisions) if revisions is not None else None
    out = {}
    for alg in sorted(set(detected) | set(truth)):
        found = set(detected.get(alg, ()))
        wanted = set(truth.get(alg, ()))
        if keep is not None:
            found = {k for k in found if k[0] in keep}
            wanted = {k for k in wanted if k[0] in keep}
        out[alg] = eval_counts(alg, len(found & wanted), len(found - wanted),
                               len(wanted - found))
    return out


def evaluate_report(report: CorpusReport | RevisionReport,
                    labels: Iterable[LabelEntry]) -> dict[str, EvalResult]:
    revs = [r.revision for r in _revisions(report) if r.error is None]
    return evaluate(detected_statements(report), list(labels), revs)


def evaluate_pairwise(report: CorpusReport | RevisionReport,
                      labels: Iterable[LabelEntry]) -> dict[str, EvalResult]:
    """EvalResult per (pair, algorithm), keyed "a-b:alg", from flags raised
    by that pair alone."""
    truth = labeled_statements(labels)
    detected: dict[tuple[str, str], set[StatementKey]] = {}
    revs = []
    for rev in _revisions(report):
        if rev.error is not None:
            continue
        revs.append(rev.revision)
        for pair in rev.pairs:
            for alg in (pair.a, pair.b):
                keys = detected.setdefault((f"{pair.a}-{pair.b}", alg), set())
                for stmt in pair.flagged.get(alg, []):
                    keys.add((rev.revision, stmt.side, *stmt.range))
    out = {}
    for (pair_name, alg), found in sorted(detected.items()):
        result = evaluate({alg: found}, {alg: truth.get(alg, set())}, revs)[alg]
        out[f"{pair_name}:{alg}"] = result
    return out
