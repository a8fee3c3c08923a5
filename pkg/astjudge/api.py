"""FastAPI wrapper for the judge: one revision per request.

The caller posts the before/after source text (and optionally external
mapping documents); the service maps, refines and judges it in-process and
returns the same RevisionReport the corpus runner writes.

Endpoints:
    GET  /health     status, version, built-in algorithms
    POST /judge      {before, after, algorithms, config?, mappings?} → RevisionReport
    POST /tokens     {source} → token rows
    POST /evaluate   {report, labels} → EvalResult per algorithm

Input errors (syntax, schema, config) come back as 422 with the message.

Usage:
    python -m astjudge.api               # Starts on ASTJUDGE_API_PORT (8900)
    python -m astjudge.api --port 9000
"""
from __future__ import annotations

import logging
import sys

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from astjudge import __version__, config
from astjudge.errors import AstJudgeError
from astjudge.mappers import MAPPERS
from astjudge.pipeline.evaluate import evaluate_report
from astjudge.pipeline.harness import Revision, analyze_revision, build_report
from astjudge.pipeline.reports import (
    CorpusReport,
    EvalResult,
    RevisionReport,
    load_labels,
)
from astjudge.pipeline.tokenizer import tokenize
from astjudge.tree.parser import parse_source

log = logging.getLogger("astjudge.api")

app = FastAPI(
    title="AST Mapping Judge API",
    description="Differential judging of AST mappings for one file revision",
    version=__version__,
)


# ═══════════════════════════════════════════════════════════════
#  REQUEST / RESPONSE MODELS
# ═══════════════════════════════════════════════════════════════

class ConfigOverrides(BaseModel):
    """Per-request tuning. Ranges are checked by config.load_config."""

    model_config = ConfigDict(extra="forbid")

    min_subtree_height: int | None = None
    dice_threshold: float | None = None
    name_similarity_threshold: float | None = None
    nit_names_only: bool | None = None

class JudgeRequest(BaseModel):
    before: str
    after: str
    algorithms: list[str] = Field(default_factory=lambda: list(config.DEFAULT_ALGORITHMS))
    config: ConfigOverrides = Field(default_factory=ConfigOverrides)
    mappings: dict[str, dict] = Field(default_factory=dict)
    revision: str = "request"

class TokensRequest(BaseModel):
    source: str

class TokenRow(BaseModel):
    index: int
    kind: str
    text: str
    range: tuple[int, int]
    drn: int

class EvaluateRequest(BaseModel):
    report: dict
    labels: list[dict] | dict


def _unprocessable(e: AstJudgeError) -> HTTPException:
    log.info(f"[API] rejected: {type(e).__name__}: {e}")
    return HTTPException(422, f"{type(e).__name__}: {e}")


# ═══════════════════════════════════════════════════════════════
#  API ENDPOINTS
# ═══════════════════════════════════════════════════════════════

@app.get("/health")
def health():
    return {"status": "ok", "version": __version__, "algorithms": sorted(MAPPERS)}


@app.post("/judge", response_model=RevisionReport)
def judge(req: JudgeRequest):
    try:
        cfg = config.load_config(**req.config.model_dump(exclude_none=True))
        rev = Revision(req.revision, req.before, req.after, externals=dict(req.mappings))
        analysis = analyze_revision(rev, req.algorithms, cfg,
                                    use_external=bool(req.mappings))
    except AstJudgeError as e:
        raise _unprocessable(e) from e
    return build_report(analysis)


@app.post("/tokens", response_model=list[TokenRow])
def tokens(req: TokensRequest):
    try:
        token_list = tokenize(parse_source(req.source))
    except AstJudgeError as e:
        raise _unprocessable(e) from e
    return [TokenRow(index=t.index, kind=str(t.kind), text=t.text,
                     range=t.range, drn=t.drn) for t in token_list]


@app.post("/evaluate", response_model=dict[str, EvalResult])
def evaluate(req: EvaluateRequest):
    try:
        labels = load_labels(req.labels)
        if "revisions" in req.report:
            report = CorpusReport.model_validate(req.report)
        else:
            report = RevisionReport.model_validate(req.report)
    except AstJudgeError as e:
        raise _unprocessable(e) from e
    except ValueError as e:
        raise HTTPException(422, f"report: {e}") from e
    return evaluate_report(report, labels)


# ═══════════════════════════════════════════════════════════════
#  ENTRYPOINT
# ═══════════════════════════════════════════════════════════════

def serve(host: str | None = None, port: int | None = None):
    import uvicorn
    host = host or config.API_HOST
    port = port or config.API_PORT
    log.info(f"[API] AST Mapping Judge v{__version__} on http://{host}:{port} "
             f"(docs at /docs)")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    config.setup_logging()
    port = None
    if "--port" in sys.argv:
        idx = sys.argv.index("--port")
        if idx + 1 < len(sys.argv):
            port = int(sys.argv[idx + 1])
    serve(port=port)
