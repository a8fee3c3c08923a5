"""Synthetic corpus: generated files, ground truth, and judge quality on it."""
import json

import pytest

from astjudge.mappers import load_external_mappings
from astjudge.pipeline.evaluate import evaluate_report
from astjudge.pipeline.harness import analyze_revision, discover_revisions, load_side, run_corpus
from astjudge.pipeline.judge import step1_rules
from astjudge.pipeline.reports import load_labels
from astjudge.pipeline.synth import CORRUPT, TRUTH, generate_corpus


class TestGeneration:

    def test_layout(self, tmp_path):
        labels = generate_corpus(tmp_path, seed=1, count=5)
        assert labels == tmp_path / "labels.json"
        revs = discover_revisions(tmp_path)
        assert [r.id for r in revs] == ["r0000", "r0001", "r0002", "r0003", "r0004"]
        for r in revs:
            assert set(r.externals) == {TRUTH, CORRUPT}
            truth = json.loads((tmp_path / r.id / "truth.json").read_text(encoding="utf-8"))
            assert set(truth) == {"edits", "statement_pairs", "token_pairs"}

    def test_same_seed_same_corpus(self, tmp_path):
        generate_corpus(tmp_path / "a", seed=4, count=6)
        generate_corpus(tmp_path / "b", seed=4, count=6)
        for name in ("labels.json", "r0003/before.java", "r0003/after.java",
                     "r0003/mapping.corrupt.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_mappings_are_valid(self, tmp_path):
        generate_corpus(tmp_path, seed=2, count=20)
        for r in discover_revisions(tmp_path):
            src, dst = load_side(r.before), load_side(r.after)
            for alg in (TRUTH, CORRUPT):
                m = load_external_mappings(r.externals[alg].read_bytes(), src, dst)
                assert m.dst_of(src.root) == dst.root

    def test_truth_tokens_follow_refined_truth(self, tmp_path):
        generate_corpus(tmp_path, seed=5, count=4)
        for r in discover_revisions(tmp_path):
            analysis = analyze_revision(r, [TRUTH, CORRUPT], use_external=True)
            truth = json.loads((tmp_path / r.id / "truth.json").read_text(encoding="utf-8"))
            expected = sorted(analysis.refined[TRUTH].tokens.pairs)
            assert [tuple(p) for p in truth["token_pairs"]] == expected
            assert len(truth["statement_pairs"]) == len(analysis.refined[TRUTH].statements)

    def test_labels_name_corrupted_statements(self, synth_corpus):
        labels = load_labels((synth_corpus / "labels.json").read_bytes())
        assert labels
        assert {e.algorithm for e in labels} == {CORRUPT}
        assert {e.side for e in labels} == {"src", "dst"}


class TestJudgeOnSynth:

    @pytest.fixture(scope="class")
    def report(self, synth_corpus):
        return run_corpus(synth_corpus, [TRUTH, CORRUPT], use_external=True, progress=False)

    def test_no_errors(self, report):
        assert report.revision_count == 200
        assert report.error_count == 0

    def test_corrupted_statements_found(self, report, synth_corpus):
        labels = load_labels((synth_corpus / "labels.json").read_bytes())
        result = evaluate_report(report, labels)[CORRUPT]
        assert result.precision >= 0.95
        assert result.recall >= 0.9

    def test_step1_verdicts_always_flag(self, synth_corpus):
        for rev in discover_revisions(synth_corpus):
            analysis = analyze_revision(rev, [TRUTH, CORRUPT, "gt"], use_external=True)
            for alg, refined in analysis.refined.items():
                assert {v.statement for v in step1_rules(refined)} <= analysis.flagged(alg)

    def test_adding_an_algorithm_only_adds_flags(self, synth_corpus):
        for rev in discover_revisions(synth_corpus):
            two = analyze_revision(rev, [TRUTH, CORRUPT], use_external=True)
            three = analyze_revision(rev, [TRUTH, CORRUPT, "mtd"], use_external=True)
            for alg in (TRUTH, CORRUPT):
                assert two.flagged(alg) <= three.flagged(alg)
