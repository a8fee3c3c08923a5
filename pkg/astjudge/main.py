"""astdiff-judge: differential judging of AST mapping algorithms.

Subcommands:
  run         map, refine and judge a corpus (or one before/after pair)
  eval        precision / recall of a report against labeled statements
  dump-tokens token list of one source file or AST interchange document
  gen-synth   synthetic corpus with ground-truth and corrupted mappings
  serve       HTTP API (FastAPI + uvicorn)

Usage:
    astdiff-judge run --corpus DIR --algorithms gt,mtd,ijm --jobs 8 --out report.json
    astdiff-judge run --before A.java --after B.java --format text --statement src:12
    astdiff-judge run --corpus DIR --algorithms truth,corrupt --external --store output/
    astdiff-judge eval --report report.json --labels labels.json [--pairwise]
    astdiff-judge dump-tokens Foo.java
    astdiff-judge gen-synth --seed 7 --count 200 --out synth/
    astdiff-judge serve --port 8900

Exit codes: 0 success, 1 some revision failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from astjudge import __version__, config
from astjudge.errors import AstJudgeError, ConfigError

log = logging.getLogger("astjudge.cli")

EXIT_OK = 0
EXIT_REVISION_ERROR = 1
EXIT_USAGE = 2


def _emit(text: str, out: str | None):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        log.info(f"[cli] wrote {path}")
    else:
        sys.stdout.write(text)


def _algorithms(value: str) -> list[str]:
    return [a.strip() for a in value.split(",") if a.strip()]


# ═══════════════════════════════════════════════════════════════
#  RUN
# ═══════════════════════════════════════════════════════════════

def _single_revision(args):
    from astjudge.pipeline.harness import Revision, discover_revisions

    if args.before or args.after:
        if not (args.before and args.after):
            raise ConfigError("--before and --after go together")
        return Revision("single", Path(args.before), Path(args.after))
    revisions = [r for r in discover_revisions(args.corpus) if r.id == args.revision]
    if not revisions:
        raise ConfigError(f"revision '{args.revision}' not found under {args.corpus}")
    return revisions[0]


def cmd_run(args) -> int:
    from astjudge.data.report_store import index_run, store_corpus
    from astjudge.pipeline.harness import (
        aggregate,
        analyze_revision,
        build_report,
        discover_revisions,
        run_corpus,
        run_revision,
    )
    from astjudge.pipeline.render import render_text
    from astjudge.pipeline.reports import RevisionReport, dumps_model
    from astjudge.pipeline.tracer import RunTracer

    cfg = config.load_config(
        args.config,
        min_subtree_height=args.min_height,
        dice_threshold=args.dice_threshold,
        name_similarity_threshold=args.name_threshold,
        nit_names_only=True if args.nit_names_only else None,
    )
    algorithms = _algorithms(args.algorithms)
    single = bool(args.before or args.after or args.revision)
    if not single and not args.corpus:
        raise ConfigError("give --corpus DIR or --before/--after")
    if args.statement and not single:
        raise ConfigError("--statement needs a single revision (--revision or --before/--after)")

    tracer = RunTracer(mode="single" if single else "corpus") if args.trace else None
    t0 = time.time()

    if args.format == "text":
        revisions = [_single_revision(args)] if single else discover_revisions(args.corpus)
        chunks, reports = [], []
        for rev in revisions:
            try:
                analysis = analyze_revision(rev, algorithms, cfg,
                                            use_external=args.external, tracer=tracer)
            except ConfigError:
                raise
            except AstJudgeError as e:
                if args.statement:
                    raise
                log.warning(f"[{rev.id}] {type(e).__name__}: {e}")
                error = f"{type(e).__name__}: {e}"
                chunks.append(f"revision {rev.id}\n  error: {error}\n")
                reports.append(RevisionReport(revision=rev.id, project=rev.project,
                                              error=error))
                continue
            chunks.append(render_text(analysis, args.statement))
            reports.append(build_report(analysis))
        corpus = aggregate(reports, algorithms)
        _emit("\n".join(chunks), args.out)
    elif single:
        report = run_revision(_single_revision(args), algorithms, cfg,
                              use_external=args.external, tracer=tracer)
        corpus = aggregate([report], algorithms)
        _emit(dumps_model(report), args.out)
    else:
        corpus = run_corpus(args.corpus, algorithms, cfg, jobs=args.jobs,
                            use_external=args.external, progress=not args.quiet,
                            tracer=tracer)
        _emit(dumps_model(corpus), args.out)

    if args.store:
        store_corpus(corpus, args.store)
        run_id = tracer.run_id if tracer else f"run_{time.strftime('%Y%m%d_%H%M%S')}"
        index_run(run_id, corpus, out_dir=args.store, corpus=str(args.corpus or ""),
                  duration_seconds=time.time() - t0)
    if tracer:
        tracer.save()

    for rev in corpus.revisions:
        if rev.error:
            log.warning(f"[cli] {rev.revision}: {rev.error}")
    return EXIT_REVISION_ERROR if corpus.error_count else EXIT_OK


# ═══════════════════════════════════════════════════════════════
#  EVAL / TOKENS / SYNTH / SERVE
# ═══════════════════════════════════════════════════════════════

def _read(path: str) -> bytes:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {p}")
    return p.read_bytes()


def cmd_eval(args) -> int:
    from astjudge.pipeline.evaluate import evaluate_pairwise, evaluate_report
    from astjudge.pipeline.reports import RevisionReport, load_corpus_report, load_labels
    from astjudge.tree.interchange import parse_document

    try:
        raw = json.loads(_read(args.report))
    except json.JSONDecodeError as e:
        raise ConfigError(f"report {args.report}: {e.msg}") from e
    if isinstance(raw, dict) and "revisions" in raw:
        report = load_corpus_report(raw)
    else:
        report = parse_document(raw, RevisionReport)
    labels = load_labels(_read(args.labels))
    results = evaluate_pairwise(report, labels) if args.pairwise \
        else evaluate_report(report, labels)

    if args.format == "text":
        lines = [f"{'algorithm':<24} {'tp':>5} {'fp':>5} {'fn':>5} {'precision':>10} {'recall':>8}"]
        for name, r in results.items():
            p = f"{r.precision:.2f}" if r.precision is not None else "n/a"
            rc = f"{r.recall:.2f}" if r.recall is not None else "n/a"
            lines.append(f"{name:<24} {r.tp:>5} {r.fp:>5} {r.fn:>5} {p:>10} {rc:>8}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        doc = {name: r.model_dump(mode="json") for name, r in results.items()}
        _emit(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", args.out)
    return EXIT_OK


def cmd_dump_tokens(args) -> int:
    from astjudge.pipeline.harness import load_side
    from astjudge.pipeline.tokenizer import dump_tokens, tokenize

    _emit(dump_tokens(tokenize(load_side(Path(args.file)))), args.out)
    return EXIT_OK


def cmd_gen_synth(args) -> int:
    from astjudge.pipeline.synth import generate_corpus

    if args.count < 1:
        raise ConfigError("--count must be at least 1")
    labels = generate_corpus(args.out, seed=args.seed, count=args.count)
    print(f"  [gen-synth] {args.count} revisions -> {args.out} (labels: {labels})")
    return EXIT_OK


def cmd_serve(args) -> int:
    from astjudge.api import serve

    serve(args.host, args.port)
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════
#  PARSER
# ═══════════════════════════════════════════════════════════════

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="astdiff-judge",
        description="Differential judging of AST mapping algorithms")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--quiet", action="store_true", help="Warnings only, no progress bar")
    ap.add_argument("--log-level", default=None, help="Override ASTJUDGE_LOG_LEVEL")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Judge a corpus or one revision")
    run.add_argument("--corpus", help="Corpus root directory")
    run.add_argument("--revision", help="Only this revision id of the corpus")
    run.add_argument("--before", help="Source file (or .ast.json) before the change")
    run.add_argument("--after", help="Source file (or .ast.json) after the change")
    run.add_argument("--algorithms", default=",".join(config.DEFAULT_ALGORITHMS),
                     help="Comma-separated algorithm names (at least two)")
    run.add_argument("--external", action="store_true",
                     help="Prefer mapping.<alg>.json documents over built-in mappers")
    run.add_argument("--jobs", type=int, default=config.JOBS)
    run.add_argument("--format", choices=("json", "text"), default="json")
    run.add_argument("--statement", help="SIDE:LINE for the text view of one statement")
    run.add_argument("--out", help="Write the report here instead of stdout")
    run.add_argument("--store", help="Also write revisions/, summary.json and runs_index.json here")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--trace", action="store_true", help="Save a per-phase timing trace")
    run.add_argument("--min-height", type=int, default=None)
    run.add_argument("--dice-threshold", type=float, default=None)
    run.add_argument("--name-threshold", type=float, default=None)
    run.add_argument("--nit-names-only", action="store_true")
    run.set_defaults(func=cmd_run)

    ev = sub.add_parser("eval", help="Precision and recall against labels")
    ev.add_argument("--report", required=True)
    ev.add_argument("--labels", required=True)
    ev.add_argument("--pairwise", action="store_true",
                    help="Score each algorithm pair separately")
    ev.add_argument("--format", choices=("json", "text"), default="json")
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    dt = sub.add_parser("dump-tokens", help="Print the token list of a file")
    dt.add_argument("file")
    dt.add_argument("--out")
    dt.set_defaults(func=cmd_dump_tokens)

    gs = sub.add_parser("gen-synth", help="Generate a synthetic labeled corpus")
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("--count", type=int, default=200)
    gs.add_argument("--out", required=True)
    gs.set_defaults(func=cmd_gen_synth)

    sv = sub.add_parser("serve", help="Run the HTTP API")
    sv.add_argument("--host", default=config.API_HOST)
    sv.add_argument("--port", type=int, default=config.API_PORT)
    sv.set_defaults(func=cmd_serve)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config.setup_logging("WARNING" if args.quiet else args.log_level)
    try:
        return args.func(args)
    except ConfigError as e:
        log.error(f"[cli] {e}")
        print(f"astdiff-judge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AstJudgeError as e:
        log.error(f"[cli] {type(e).__name__}: {e}")
        print(f"astdiff-judge: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_REVISION_ERROR


if __name__ == "__main__":
    sys.exit(main())
