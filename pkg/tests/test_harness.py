"""Revision discovery, corpus runs, reports, storage and tracing."""
import json
from pathlib import Path

import pytest

from astjudge.errors import ConfigError, RevisionError
from astjudge.data.report_store import index_run, load_index, store_corpus
from astjudge.mappers import map_topdown_bottomup
from astjudge.mappers.external import save_mappings
from astjudge.pipeline.harness import (
    Revision,
    aggregate,
    analyze_revision,
    build_report,
    check_algorithms,
    discover_revisions,
    load_side,
    run_corpus,
    run_revision,
)
from astjudge.pipeline.reports import dumps_model
from astjudge.pipeline.synth import generate_corpus
from astjudge.pipeline.tracer import RunTracer
from astjudge.tree.interchange import dumps_ast
from astjudge.tree.parser import parse_source

from conftest import body, golden, skeleton_pairs, subtree_pairs


def _write_revision(directory: Path, before: str, after: str) -> Path:
    directory.mkdir(parents=True)
    (directory / "before.java").write_text(before, encoding="utf-8")
    (directory / "after.java").write_text(after, encoding="utf-8")
    return directory


@pytest.fixture
def corpus(tmp_path) -> Path:
    root = tmp_path / "corpus"
    _write_revision(root / "r1", *golden("motivating"))
    _write_revision(root / "proj" / "r2", *golden("leaf_rename"))
    _write_revision(root / "proj" / "r3", "class A {\n  int x = ;\n}", "class A { }")
    return root


class TestDiscovery:

    def test_nested_projects(self, corpus):
        revisions = discover_revisions(corpus)
        assert [r.id for r in revisions] == ["proj/r2", "proj/r3", "r1"]
        assert [r.project for r in revisions] == ["proj", "proj", None]
        assert revisions[2].before == corpus / "r1" / "before.java"

    def test_mapping_documents_found(self, corpus):
        before, after = golden("motivating")
        m = map_topdown_bottomup(parse_source(before), parse_source(after))
        (corpus / "r1" / "mapping.gt2.json").write_text(json.dumps(save_mappings(m)))
        (r1,) = [r for r in discover_revisions(corpus) if r.id == "r1"]
        assert r1.externals == {"gt2": corpus / "r1" / "mapping.gt2.json"}

    def test_missing_root(self, tmp_path):
        with pytest.raises(RevisionError):
            discover_revisions(tmp_path / "nope")

    def test_interchange_side(self, tmp_path):
        ast = parse_source(golden("motivating")[0])
        path = tmp_path / "before.ast.json"
        path.write_text(dumps_ast(ast), encoding="utf-8")
        assert load_side(path).same_structure(ast)


class TestRevision:

    def test_check_algorithms(self):
        with pytest.raises(ConfigError):
            check_algorithms(["gt"])
        with pytest.raises(ConfigError):
            check_algorithms(["gt", "gt"])
        assert check_algorithms(["gt", " ijm "]) == ["gt", "ijm"]

    def test_config_error_propagates(self):
        with pytest.raises(ConfigError):
            run_revision(Revision("x", *golden("motivating")), ["gt"])

    def test_syntax_error_recorded(self, corpus):
        (bad,) = [r for r in discover_revisions(corpus) if r.id == "proj/r3"]
        report = run_revision(bad, ["gt", "ijm"])
        assert report.error.startswith("SourceSyntaxError")
        assert report.per_algorithm == []

    def test_unknown_algorithm_recorded(self):
        report = run_revision(Revision("x", *golden("motivating")), ["gt", "nosuch"])
        assert "no mapper" in report.error

    def test_external_document_preferred_on_request(self):
        before, after = golden("motivating")
        src, dst = parse_source(before), parse_source(after)
        identity = {"format_version": 1, "algorithm": "gt",
                    "pairs": [{"src": i, "dst": i} for i in range(15)]}
        rev = Revision("x", before, after, externals={"gt": identity})
        built_in = analyze_revision(rev, ["gt", "ijm"])
        external = analyze_revision(rev, ["gt", "ijm"], use_external=True)
        assert built_in.refined["gt"].nodes.pairs == map_topdown_bottomup(src, dst).pairs
        assert external.refined["gt"].nodes.dst_of(6) == 6
        assert external.flagged("gt") == set()

    def test_report_for_motivating(self):
        analysis = analyze_revision(Revision("m", *golden("motivating")),
                                    ["gt", "mtd", "ijm"])
        report = build_report(analysis)
        gt = report.algorithm("gt")
        assert gt.flagged
        assert {(s.side, s.line, s.label) for s in gt.inaccurate_statements} >= {
            ("src", 2, "FieldDeclaration"), ("dst", 2, "FieldDeclaration")}
        assert [(p.a, p.b) for p in report.pairs] == [("gt", "ijm"), ("gt", "mtd"),
                                                        ("mtd", "ijm")]
        assert all(s.verdicts for s in gt.inaccurate_statements)
        assert dumps_model(report) == dumps_model(build_report(analysis))

    def test_undecided_names_both_algorithms(self):
        before = "class A { void f() { foo(a); } }"
        after = "class A { void f() { foo(a); foo(b); } }"
        src, dst = parse_source(before), parse_source(after)
        skeleton = skeleton_pairs(src, dst)
        (s1,) = body(src)
        d1, d2 = body(dst)

        def doc(alg, d):
            pairs = skeleton + subtree_pairs(src, s1, dst, d)
            return {"format_version": 1, "algorithm": alg,
                    "pairs": [{"src": s, "dst": t} for s, t in pairs]}

        rev = Revision("u", before, after,
                       externals={"A": doc("A", d1), "B": doc("B", d2)})
        report = build_report(analyze_revision(rev, ["A", "B"], use_external=True))
        rows = {(u.algorithm, u.against, u.side, u.element_id, u.decided_by)
                for u in report.undecided}
        assert ("A", "B", "dst", d2, "sim-two-condition") in rows
        data = json.loads(dumps_model(report))
        assert data["undecided"]
        for entry in data["undecided"]:
            assert {entry["algorithm"], entry["against"]} == {"A", "B"}


class TestCorpus:

    def test_aggregate_counts(self, corpus):
        report = run_corpus(corpus, ["gt", "ijm"], progress=False)
        assert report.revision_count == 3
        assert report.error_count == 1
        assert [p.project for p in report.by_project] == ["proj"]
        assert report.by_project[0].revisions == 2
        gt = {t.algorithm: t for t in report.totals}["gt"]
        assert gt.flagged_revisions >= 1
        assert 0.0 < gt.flagged_ratio <= 1.0

    def test_aggregate_is_plain_sum(self, corpus):
        report = run_corpus(corpus, ["gt", "ijm"], progress=False)
        again = aggregate(list(reversed(report.revisions)), ["ijm", "gt"])
        assert dumps_model(again) == dumps_model(report)

    def test_jobs_do_not_change_report(self, tmp_path):
        root = tmp_path / "synth"
        generate_corpus(root, seed=3, count=8)
        sequential = run_corpus(root, ["gt", "mtd", "ijm"], progress=False)
        parallel = run_corpus(root, ["gt", "mtd", "ijm"], jobs=2, progress=False)
        assert dumps_model(sequential) == dumps_model(parallel)

    def test_parallel_run_collects_worker_phases(self, tmp_path):
        root = tmp_path / "synth"
        generate_corpus(root, seed=3, count=4)
        sequential = RunTracer(trace_dir=tmp_path)
        parallel = RunTracer(trace_dir=tmp_path)
        run_corpus(root, ["gt", "ijm"], progress=False, tracer=sequential)
        run_corpus(root, ["gt", "ijm"], jobs=2, progress=False, tracer=parallel)

        def shape(tracer):
            return sorted((e["revision"], e["phase"]) for e in tracer.entries)

        assert shape(parallel) == shape(sequential)
        phases = {e["phase"] for e in parallel.entries}
        assert {"parse", "map:gt", "refine:ijm", "judge:gt-ijm", "revision"} <= phases
        assert parallel.save().is_file()


class TestStorage:

    def test_store_and_index(self, corpus, tmp_path):
        report = run_corpus(corpus, ["gt", "ijm"], progress=False)
        out = tmp_path / "out"
        summary = store_corpus(report, out)
        assert summary == out / "summary.json"
        assert (out / "revisions" / "proj" / "r2.json").is_file()
        assert (out / "revisions" / "r1.json").is_file()

        assert index_run("run_a", report, out_dir=out, corpus=str(corpus),
                         duration_seconds=1.234)
        assert not index_run("run_a", report, out_dir=out)
        assert index_run("run_b", report, out_dir=out)
        index = load_index(out)
        assert index["schema_version"] == 1
        assert [r["run_id"] for r in index["runs"]] == ["run_a", "run_b"]
        row = index["runs"][0]
        assert row["revision_count"] == 3
        assert row["error_count"] == 1
        assert row["duration_seconds"] == 1.23
        assert set(row["flagged"]) == {"gt", "ijm"}

    def test_empty_index(self, tmp_path):
        assert load_index(tmp_path) == {"runs": [], "schema_version": 1}


class TestTracer:

    def test_phases_recorded(self, tmp_path):
        tracer = RunTracer(run_id="t1", mode="single", trace_dir=tmp_path)
        analyze_revision(Revision("m", *golden("motivating")), ["gt", "ijm"],
                         tracer=tracer)
        phases = [e["phase"] for e in tracer.entries]
        assert phases == ["parse", "tokenize", "map:gt", "refine:gt", "map:ijm",
                          "refine:ijm", "judge:gt-ijm"]
        assert tracer.entries[0]["src_nodes"] == 23
        path = tracer.save()
        trace = json.loads(path.read_text(encoding="utf-8"))
        assert path == tmp_path / "t1.json"
        assert trace["revisions"] == 1
        assert set(trace["phase_totals_ms"]) == set(phases)

    def test_end_without_begin(self, tmp_path):
        tracer = RunTracer(trace_dir=tmp_path)
        tracer.end_phase(x=1)
        tracer.record("revision", "r1", 2.5)
        assert tracer.entries == [{"phase": "revision", "revision": "r1",
                                   "duration_ms": 2.5}]
