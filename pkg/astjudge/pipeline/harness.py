"""Harness: runs mappers and the judge over revisions and corpora.

Flow per revision:
  1. parse (source text) or load (AST interchange) both files
  2. tokenize both Asts
  3. map: run each built-in mapper, or load its mapping document
  4. refine every mapping to statement and token mappings
  5. judge every unordered algorithm pair
  6. union the Inaccurate statements per algorithm

Corpus layout (one level of project nesting allowed):
    <root>/<revision>/before.java   after.java   [mapping.<alg>.json]
    <root>/<project>/<revision>/...
before/after may also be before.ast.json / after.ast.json.
"""
from __future__ import annotations

import itertools
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from tqdm import tqdm

from astjudge.config import JudgeConfig
from astjudge.errors import AstJudgeError, ConfigError, RevisionError
from astjudge.mappers import MAPPERS, NodeMappingSet, load_external_mappings
from astjudge.pipeline.judge import (
    PairJudgement,
    StatementRef,
    Verdict,
    judge_pair,
    union_verdicts,
)
from astjudge.pipeline.refine import RefinedMappings, refine
from astjudge.pipeline.reports import (
    AlgorithmReport,
    AlgorithmTotals,
    CorpusReport,
    PairReport,
    ProjectSummary,
    RevisionReport,
    StatementDoc,
    StatementKeyDoc,
    VerdictDoc,
)
from astjudge.pipeline.tokenizer import TokenList, tokenize
from astjudge.pipeline.tracer import RunTracer
from astjudge.tree.interchange import load_ast
from astjudge.tree.model import Ast
from astjudge.tree.parser import parse_source

log = logging.getLogger("astjudge.harness")

AST_SUFFIX = ".ast.json"
MAPPING_PREFIX = "mapping."


# ═══════════════════════════════════════════════════════════════
#  REVISIONS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Revision:
    """One file revision. before/after are source text or a file path."""

    id: str
    before: str | Path
    after: str | Path
    externals: dict[str, Path | dict] = field(default_factory=dict)
    project: str | None = None


def _find_side(directory: Path, stem: str) -> Path | None:
    ast_doc = directory / f"{stem}{AST_SUFFIX}"
    if ast_doc.is_file():
        return ast_doc
    for p in sorted(directory.glob(f"{stem}.*")):
        if p.is_file() and not p.name.endswith(AST_SUFFIX):
            return p
    return None


def _is_revision_dir(directory: Path) -> bool:
    return (_find_side(directory, "before") is not None
            and _find_side(directory, "after") is not None)


def _revision_from_dir(directory: Path, rev_id: str,
                       project: str | None) -> Revision:
    externals = {}
    for p in sorted(directory.glob(f"{MAPPING_PREFIX}*.json")):
        alg = p.name[len(MAPPING_PREFIX):-len(".json")]
        if alg:
            externals[alg] = p
    return Revision(rev_id, _find_side(directory, "before"),
                    _find_side(directory, "after"), externals, project)


def discover_revisions(root: Path | str) -> list[Revision]:
    """Revision directories under root, ordered by id.

    Raises:
        RevisionError: if root is not a directory.
    """
    root = Path(root)
    if not root.is_dir():
        raise RevisionError(f"corpus root not found: {root}")
    out: list[Revision] = []
    for child in sorted(p for p in root.iterdir() if p.is_dir()):
        if _is_revision_dir(child):
            out.append(_revision_from_dir(child, child.name, None))
            continue
        for grandchild in sorted(p for p in child.iterdir() if p.is_dir()):
            if _is_revision_dir(grandchild):
                out.append(_revision_from_dir(
                    grandchild, f"{child.name}/{grandchild.name}", child.name))
    return sorted(out, key=lambda r: r.id)


def load_side(spec: str | Path) -> Ast:
    """Parse source text, or read a source file / AST interchange document."""
    if isinstance(spec, Path):
        if not spec.is_file():
            raise RevisionError(f"missing file: {spec}")
        if spec.name.endswith(AST_SUFFIX):
            return load_ast(spec.read_bytes())
        return parse_source(spec.read_text(encoding="utf-8"))
    return parse_source(spec)


def _external_doc(spec: Path | dict) -> bytes | dict:
    if isinstance(spec, Path):
        if not spec.is_file():
            raise RevisionError(f"missing mapping document: {spec}")
        return spec.read_bytes()
    return spec


def check_algorithms(algorithms: Sequence[str]) -> list[str]:
    """Validate an algorithm list: at least two, no duplicates.

    Raises:
        ConfigError: on fewer than two names or a repeated name.
    """
    names = [a.strip() for a in algorithms if a and a.strip()]
    if len(names) < 2:
        raise ConfigError("at least two algorithms are needed to judge")
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate algorithm in {names}")
    return names


# ═══════════════════════════════════════════════════════════════
#  ANALYSIS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class RevisionAnalysis:
    revision: Revision
    src: Ast
    dst: Ast
    src_tokens: TokenList
    dst_tokens: TokenList
    refined: dict[str, RefinedMappings]
    judgements: tuple[PairJudgement, ...]

    @property
    def algorithms(self) -> list[str]:
        return list(self.refined)

    def flagged(self, algorithm: str) -> set[StatementRef]:
        return union_verdicts(algorithm, (j for j in self.judgements
                                          if algorithm in (j.a, j.b)))

    def verdicts(self, algorithm: str) -> list[Verdict]:
        seen: dict = {}
        for j in self.judgements:
            for v in j.verdicts:
                if v.algorithm == algorithm:
                    cur = seen.get(v.element)
                    if cur is None or (v.inaccurate and not cur.inaccurate):
                        seen[v.element] = v
        return sorted(seen.values())


class _Phases:
    """Tracer adapter that is a no-op without a tracer."""

    def __init__(self, tracer: RunTracer | None, revision: str):
        self.tracer = tracer
        self.revision = revision

    def begin(self, phase: str):
        if self.tracer:
            self.tracer.begin_phase(phase, self.revision)

    def end(self, **counts):
        if self.tracer:
            self.tracer.end_phase(**counts)


def _mapping_for(alg: str, rev: Revision, src: Ast, dst: Ast,
                 cfg: JudgeConfig, use_external: bool) -> NodeMappingSet:
    external = rev.externals.get(alg)
    if external is not None and (use_external or alg not in MAPPERS):
        return load_external_mappings(_external_doc(external), src, dst,
                                      algorithm=alg)
    if alg in MAPPERS:
        mapping = MAPPERS[alg](src, dst, cfg.mapper)
        if mapping.algorithm != alg:
            mapping = replace(mapping, algorithm=alg)
        return mapping
    raise RevisionError(f"no mapper or mapping document for algorithm '{alg}' "
                        f"in revision {rev.id}")


def analyze_revision(rev: Revision, algorithms: Sequence[str],
                     cfg: JudgeConfig | None = None, *,
                     use_external: bool = False,
                     tracer: RunTracer | None = None) -> RevisionAnalysis:
    """Full in-memory result for one revision; raises AstJudgeError on bad input."""
    cfg = cfg or JudgeConfig()
    algorithms = check_algorithms(algorithms)
    phases = _Phases(tracer, rev.id)

    phases.begin("parse")
    src = load_side(rev.before)
    dst = load_side(rev.after)
    phases.end(src_nodes=len(src), dst_nodes=len(dst))

    phases.begin("tokenize")
    src_tokens = tokenize(src)
    dst_tokens = tokenize(dst)
    phases.end(src_tokens=len(src_tokens), dst_tokens=len(dst_tokens))

    refined: dict[str, RefinedMappings] = {}
    for alg in algorithms:
        phases.begin(f"map:{alg}")
        mapping = _mapping_for(alg, rev, src, dst, cfg, use_external)
        phases.end(pairs=len(mapping))
        phases.begin(f"refine:{alg}")
        refined[alg] = refine(src, dst, src_tokens, dst_tokens, mapping)
        phases.end(statement_pairs=len(refined[alg].statements),
                   token_pairs=len(refined[alg].tokens))

    judgements = []
    for a, b in itertools.combinations(algorithms, 2):
        phases.begin(f"judge:{a}-{b}")
        result = judge_pair(refined[a], refined[b], cfg)
        judgements.append(result)
        phases.end(inconsistent=len(result.inconsistent),
                   verdicts=len(result.verdicts))

    return RevisionAnalysis(rev, src, dst, src_tokens, dst_tokens, refined,
                            tuple(judgements))


# ═══════════════════════════════════════════════════════════════
#  REPORTS
# ═══════════════════════════════════════════════════════════════

def _verdict_doc(analysis: RevisionAnalysis, v: Verdict) -> VerdictDoc:
    e = v.element
    ast = analysis.src if e.side == "src" else analysis.dst
    if e.granularity == "statement":
        node = ast[e.id]
        start, end, text = node.start, node.end, node.label
    else:
        token = (analysis.src_tokens if e.side == "src" else analysis.dst_tokens)[e.id]
        start, end, text = token.start, token.end, token.text
    return VerdictDoc(granularity=e.granularity, side=e.side, element_id=e.id,
                      text=text, range=(start, end), line=ast.line_of(start),
                      status=v.status.value, decided_by=v.decided_by,
                      evidence=v.evidence, algorithm=v.algorithm,
                      against=v.against)


def _statement_key(analysis: RevisionAnalysis, ref: StatementRef) -> tuple:
    ast = analysis.src if ref.side == "src" else analysis.dst
    node = ast[ref.id]
    return (ref.side, node.start, node.end, ref.id)


def _statement_doc(analysis: RevisionAnalysis, ref: StatementRef,
                   verdicts: list[Verdict]) -> StatementDoc:
    ast = analysis.src if ref.side == "src" else analysis.dst
    node = ast[ref.id]
    return StatementDoc(side=ref.side, range=(node.start, node.end),
                        line=ast.line_of(node.start), label=node.label,
                        statement_text=ast.text(ref.id),
                        verdicts=[_verdict_doc(analysis, v) for v in verdicts])


def build_report(analysis: RevisionAnalysis) -> RevisionReport:
    per_algorithm = []
    undecided: list[VerdictDoc] = []
    for alg in sorted(analysis.algorithms):
        verdicts = analysis.verdicts(alg)
        by_stmt: dict[StatementRef, list[Verdict]] = {}
        for v in verdicts:
            if v.inaccurate:
                by_stmt.setdefault(v.statement, []).append(v)
            else:
                undecided.append(_verdict_doc(analysis, v))
        flagged = analysis.flagged(alg)
        statements = [_statement_doc(analysis, ref, by_stmt.get(ref, []))
                      for ref in sorted(flagged,
                                        key=lambda r: _statement_key(analysis, r))]
        per_algorithm.append(AlgorithmReport(algorithm=alg, flagged=bool(flagged),
                                             inaccurate_statements=statements))

    pairs = []
    for j in sorted(analysis.judgements, key=lambda j: (j.a, j.b)):
        flagged = {}
        for alg in sorted((j.a, j.b)):
            refs = sorted(j.flagged(alg), key=lambda r: _statement_key(analysis, r))
            flagged[alg] = [StatementKeyDoc(side=r.side,
                                            range=_statement_key(analysis, r)[1:3])
                            for r in refs]
        pairs.append(PairReport(a=j.a, b=j.b,
                                inconsistent_statement_count=len(j.inconsistent),
                                flagged=flagged))

    undecided.sort(key=lambda d: (d.against or "", d.side, d.range, d.granularity,
                                  d.element_id, d.decided_by))
    rev = analysis.revision
    return RevisionReport(revision=rev.id, project=rev.project,
                          per_algorithm=per_algorithm, pairs=pairs,
                          undecided=undecided)


def run_revision(rev: Revision, algorithms: Sequence[str],
                 cfg: JudgeConfig | None = None, *, use_external: bool = False,
                 tracer: RunTracer | None = None) -> RevisionReport:
    """Report for one revision. Input errors are recorded, not raised."""
    try:
        analysis = analyze_revision(rev, algorithms, cfg,
                                    use_external=use_external, tracer=tracer)
    except ConfigError:
        raise
    except AstJudgeError as e:
        log.warning(f"[{rev.id}] {type(e).__name__}: {e}")
        return RevisionReport(revision=rev.id, project=rev.project,
                              error=f"{type(e).__name__}: {e}")
    return build_report(analysis)


# ═══════════════════════════════════════════════════════════════
#  CORPUS
# ═══════════════════════════════════════════════════════════════

def _totals(reports: Iterable[RevisionReport],
            algorithms: Sequence[str]) -> list[AlgorithmTotals]:
    reports = [r for r in reports if r.error is None]
    out = []
    for alg in sorted(algorithms):
        statements = flagged = 0
        for r in reports:
            entry = r.algorithm(alg)
            if entry is None:
                continue
            statements += len(entry.inaccurate_statements)
            flagged += entry.flagged
        ratio = flagged / len(reports) if reports else 0.0
        out.append(AlgorithmTotals(algorithm=alg, inaccurate_statements=statements,
                                   flagged_revisions=flagged, flagged_ratio=ratio))
    return out


def aggregate(reports: Sequence[RevisionReport],
              algorithms: Sequence[str]) -> CorpusReport:
    """Corpus report from revision reports; totals are plain sums."""
    reports = sorted(reports, key=lambda r: r.revision)
    projects: dict[str, list[RevisionReport]] = {}
    for r in reports:
        if r.project is not None:
            projects.setdefault(r.project, []).append(r)
    return CorpusReport(
        algorithms=sorted(algorithms),
        revision_count=len(reports),
        error_count=sum(r.error is not None for r in reports),
        totals=_totals(reports, algorithms),
        by_project=[ProjectSummary(project=p, revisions=len(rs),
                                   totals=_totals(rs, algorithms))
                    for p, rs in sorted(projects.items())],
        revisions=list(reports),
    )


def _run_one(args: tuple) -> tuple[RevisionReport, float, list[dict]]:
    rev, algorithms, cfg, use_external, trace = args
    worker_tracer = RunTracer(mode="worker") if trace else None
    t0 = time.perf_counter()
    report = run_revision(rev, algorithms, cfg, use_external=use_external,
                          tracer=worker_tracer)
    entries = worker_tracer.entries if worker_tracer else []
    return report, (time.perf_counter() - t0) * 1000, entries


def run_corpus(root: Path | str, algorithms: Sequence[str],
               cfg: JudgeConfig | None = None, *, jobs: int = 1,
               use_external: bool = False, progress: bool = True,
               tracer: RunTracer | None = None) -> CorpusReport:
    """Judge every revision under root.

    Parallel and sequential runs produce identical reports: results are
    ordered by revision id before aggregation.
    """
    cfg = cfg or JudgeConfig()
    algorithms = check_algorithms(algorithms)
    revisions = discover_revisions(root)
    log.info(f"[corpus] {len(revisions)} revisions under {root}, "
             f"algorithms {','.join(algorithms)}, jobs {jobs}")

    bar = tqdm(total=len(revisions), desc="revisions", unit="rev",
               disable=not progress or not sys.stderr.isatty(), file=sys.stderr)
    reports: list[RevisionReport] = []
    if jobs <= 1 or len(revisions) <= 1:
        for rev in revisions:
            t0 = time.perf_counter()
            reports.append(run_revision(rev, algorithms, cfg,
                                        use_external=use_external, tracer=tracer))
            if tracer:
                tracer.record("revision", rev.id, (time.perf_counter() - t0) * 1000)
            bar.update(1)
    else:
        work = [(rev, algorithms, cfg, use_external, tracer is not None)
                for rev in revisions]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rev, (report, ms, entries) in zip(revisions, pool.map(_run_one, work)):
                reports.append(report)
                if tracer:
                    tracer.merge(entries)
                    tracer.record("revision", rev.id, ms)
                bar.update(1)
    bar.close()

    corpus = aggregate(reports, algorithms)
    log.info(f"[corpus] done: {corpus.revision_count} revisions, "
             f"{corpus.error_count} errors")
    return corpus
