"""Worked examples: one golden revision per measure, checked for measure values and verdicts."""
from astjudge.pipeline.judge import (
    ElementRef,
    StatementRef,
    Status,
    determine_inaccurate,
    judge_pair,
    step1_rules,
)
from astjudge.pipeline.measures import MeasureVector, statement_measures, token_measures

from conftest import (
    body,
    golden_revision,
    nodes_of,
    outside_bodies,
    skeleton_pairs,
    subtree_pairs,
    token_index,
)


def _decided(result, algorithm, element):
    return {v.decided_by for v in result.verdicts
            if v.algorithm == algorithm and v.element == element and v.inaccurate}


# ═══════════════════════════════════════════════════════════════
#  STATEMENT MEASURES
# ═══════════════════════════════════════════════════════════════

class TestNitZero:
    """A call mapped onto another call with every token renamed."""

    def _algorithms(self):
        rev = golden_revision("nit_zero")
        names_only = rev.refined("A", [(0, 0), (1, 1), (3, 3), (4, 4)])
        full = rev.refined("B", rev.identity())
        return names_only, full

    def test_measures(self):
        a, b = self._algorithms()
        assert statement_measures(a, 1, 1) == MeasureVector(nit=0, pm=True, llcs=2)
        assert statement_measures(b, 1, 1) == MeasureVector(nit=2, pm=True, llcs=4)

    def test_step1_flags_without_competitor(self):
        a, b = self._algorithms()
        verdicts = step1_rules(a)
        assert {(v.element, v.decided_by) for v in verdicts} == {
            (ElementRef("statement", "src", 1), "NIT"),
            (ElementRef("statement", "dst", 1), "NIT"),
        }
        assert step1_rules(b) == []

    def test_verdict(self):
        a, b = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("A") == {StatementRef("src", 1), StatementRef("dst", 1)}
        assert result.flagged("B") == set()
        assert _decided(result, "A", ElementRef("statement", "src", 1)) == {"NIT"}


class TestNitFiveFour:
    """One call, two candidates: five identical tokens against four."""

    def _algorithms(self):
        rev = golden_revision("nit_five_four")
        skeleton = skeleton_pairs(rev.src, rev.dst)
        (s,) = body(rev.src)
        d1, d2 = body(rev.dst)
        a = rev.refined("A", skeleton + subtree_pairs(rev.src, s, rev.dst, d1))
        b = rev.refined("B", skeleton + subtree_pairs(rev.src, s, rev.dst, d2))
        return a, b, s, d1, d2

    def test_measures(self):
        a, b, s, d1, d2 = self._algorithms()
        assert statement_measures(a, s, d1) == MeasureVector(nit=5, pm=True, llcs=7)
        assert statement_measures(b, s, d2) == MeasureVector(nit=4, pm=True, llcs=7)

    def test_verdict(self):
        a, b, s, d1, d2 = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("B") == {StatementRef("src", s), StatementRef("dst", d1)}
        assert result.flagged("A") == set()
        assert _decided(result, "B", ElementRef("statement", "src", s)) == {"NIT"}
        (undecided,) = result.undecided("A")
        assert undecided.element == ElementRef("statement", "dst", d2)
        assert undecided.decided_by == "sim-two-condition"


class TestBlockAndParents:
    """The same call in two methods; only one of them is the mapped method."""

    def _revision(self):
        rev = golden_revision("block_pm")
        src_outer = outside_bodies(rev.src)
        dst_outer = outside_bodies(rev.dst)
        (s,) = body(rev.src, "testFilterSet")
        (d1,) = body(rev.dst, "testFilterSet")
        (d2,) = body(rev.dst, "testFilterAll")
        return rev, src_outer, dst_outer, s, d1, d2

    def _algorithms(self):
        rev, src_outer, dst_outer, s, d1, d2 = self._revision()
        skeleton = list(zip(src_outer, dst_outer[:len(src_outer)]))
        a = rev.refined("A", skeleton + subtree_pairs(rev.src, s, rev.dst, d1))
        b = rev.refined("B", skeleton + subtree_pairs(rev.src, s, rev.dst, d2))
        return a, b, s, d1, d2

    def test_measures(self):
        a, b, s, d1, d2 = self._algorithms()
        assert statement_measures(a, s, d1) == MeasureVector(nit=5, pm=True, llcs=5)
        assert statement_measures(b, s, d2) == MeasureVector(nit=5, pm=False, llcs=5)

    def test_verdict(self):
        a, b, s, d1, d2 = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("B") == {StatementRef("src", s), StatementRef("dst", d1)}
        assert result.flagged("A") == set()
        element = ElementRef("statement", "src", s)
        assert [(v.algorithm, v.decided_by, v.status)
                for v in determine_inaccurate(element, a, b)] == [
            ("B", "PM", Status.INACCURATE), ("B", "PM", Status.INACCURATE)]

    def test_block_follows_its_method(self):
        rev, src_outer, dst_outer, s, d1, d2 = self._revision()
        (block,) = nodes_of(rev.src, "Block")
        block2 = nodes_of(rev.dst, "Block")[1]
        pairs = (list(zip(src_outer[:6], dst_outer[:6])) + [(block, block2)]
                 + subtree_pairs(rev.src, s, rev.dst, d2))
        moved = rev.refined("C", pairs)
        assert {(v.element, v.decided_by) for v in step1_rules(moved)} == {
            (ElementRef("statement", "src", block), "PM-block"),
            (ElementRef("statement", "dst", block2), "PM-block"),
        }
        a, *_ = self._algorithms()
        assert step1_rules(a) == []


# ═══════════════════════════════════════════════════════════════
#  TOKEN MEASURES
# ═══════════════════════════════════════════════════════════════

class TestTypeMismatch:
    """A returned variable mapped onto the name of a call on it."""

    def _algorithms(self):
        rev = golden_revision("type_value")
        skeleton = skeleton_pairs(rev.src, rev.dst)
        (ret_s,) = body(rev.src)
        (ret_d,) = body(rev.dst)
        (value_s,) = nodes_of(rev.src, "SimpleName", "value")
        (value_d,) = nodes_of(rev.dst, "SimpleName", "value")
        (byte_value,) = nodes_of(rev.dst, "SimpleName", "byteValue")
        a = rev.refined("A", skeleton + [(ret_s, ret_d), (value_s, byte_value)])
        b = rev.refined("B", skeleton + [(ret_s, ret_d), (value_s, value_d)])
        return a, b, ret_s, ret_d

    def test_measures(self):
        a, b, ret_s, ret_d = self._algorithms()
        value = token_index(a, "src", "value")
        assert token_measures(a, value, token_index(a, "dst", "byteValue")) == \
            MeasureVector(llcs=3, type_ok=False, stmt_ok=True, val_ok=False)
        assert token_measures(b, value, token_index(b, "dst", "value")) == \
            MeasureVector(llcs=3, type_ok=True, stmt_ok=True, val_ok=True)
        assert statement_measures(a, ret_s, ret_d) == MeasureVector(nit=2, pm=True, llcs=3)

    def test_step1_type_rule(self):
        a, b, *_ = self._algorithms()
        assert {(v.element, v.decided_by) for v in step1_rules(a)} == {
            (ElementRef("token", "src", token_index(a, "src", "value")), "TYPE"),
            (ElementRef("token", "dst", token_index(a, "dst", "byteValue")), "TYPE"),
        }
        assert step1_rules(b) == []

    def test_verdict(self):
        a, b, ret_s, ret_d = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("A") == {StatementRef("src", ret_s), StatementRef("dst", ret_d)}
        assert result.flagged("B") == set()
        target = ElementRef("token", "dst", token_index(a, "dst", "byteValue"))
        assert _decided(result, "A", target) == {"TYPE"}


class TestStatementMembership:
    """The argument of an extended call, mapped by one algorithm only."""

    def _algorithms(self):
        rev = golden_revision("stmt_value_pair")
        skeleton = skeleton_pairs(rev.src, rev.dst)
        (es_s,) = body(rev.src)
        (es_d,) = body(rev.dst)
        call = [(es_s, es_d),
                (nodes_of(rev.src, "MethodInvocation")[0],
                 nodes_of(rev.dst, "MethodInvocation")[0]),
                (nodes_of(rev.src, "SimpleName", "store")[0],
                 nodes_of(rev.dst, "SimpleName", "store")[0])]
        value = (nodes_of(rev.src, "SimpleName", "value")[0],
                 nodes_of(rev.dst, "SimpleName", "value")[0])
        a = rev.refined("A", skeleton + call + [value])
        b = rev.refined("B", skeleton + call)
        return a, b, es_s, es_d

    def test_measures(self):
        a, b, es_s, es_d = self._algorithms()
        assert token_measures(a, token_index(a, "src", "value"),
                              token_index(a, "dst", "value")) == \
            MeasureVector(llcs=5, type_ok=True, stmt_ok=True, val_ok=True)
        assert b.tokens.partner("src", token_index(b, "src", "value")) is None
        assert statement_measures(a, es_s, es_d).nit == 5
        assert statement_measures(b, es_s, es_d).nit == 4

    def test_verdict(self):
        a, b, es_s, es_d = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("B") == {StatementRef("src", es_s), StatementRef("dst", es_d)}
        assert result.flagged("A") == set()
        for side in ("src", "dst"):
            element = ElementRef("token", side, token_index(a, side, "value"))
            assert _decided(result, "B", element) == {"STMT"}


class TestValueMismatch:
    """The same receiver, two calls; one algorithm keeps the call name."""

    def _algorithms(self):
        rev = golden_revision("val_getbytes")
        skeleton = skeleton_pairs(rev.src, rev.dst)
        (es,) = body(rev.src)
        (es2,) = body(rev.dst)
        outer = [(es, es2),
                 (nodes_of(rev.src, "MethodInvocation")[0],
                  nodes_of(rev.dst, "MethodInvocation")[0]),
                 (nodes_of(rev.src, "SimpleName", "put")[0],
                  nodes_of(rev.dst, "SimpleName", "put")[0])]
        inner = nodes_of(rev.src, "MethodInvocation")[1]
        write, get = nodes_of(rev.dst, "MethodInvocation")[1:]
        a = rev.refined("A", skeleton + outer + subtree_pairs(rev.src, inner, rev.dst, get))
        b = rev.refined("B", skeleton + outer + subtree_pairs(rev.src, inner, rev.dst, write))
        return a, b, es, es2

    def test_measures(self):
        a, b, *_ = self._algorithms()
        get_s = token_index(a, "src", "getBytes")
        assert token_measures(a, get_s, token_index(a, "dst", "getBytes")) == \
            MeasureVector(llcs=9, type_ok=True, stmt_ok=True, val_ok=True)
        assert token_measures(b, get_s, token_index(b, "dst", "writeBytes")) == \
            MeasureVector(llcs=9, type_ok=True, stmt_ok=True, val_ok=False)

    def test_verdict(self):
        a, b, es, es2 = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("B") == {StatementRef("src", es), StatementRef("dst", es2)}
        assert result.flagged("A") == set()
        element = ElementRef("token", "src", token_index(a, "src", "getBytes"))
        assert [(v.algorithm, v.decided_by)
                for v in determine_inaccurate(element, a, b) if v.element == element] \
            == [("B", "VAL")]
        receiver = ElementRef("token", "src", token_index(a, "src", "s"))
        assert {v.status for v in result.verdicts if v.element == receiver} == {Status.UNDECIDED}


class TestTokenOrder:
    """Two `Filterable` type names; one algorithm crosses them."""

    def _algorithms(self):
        rev = golden_revision("llcs_filterable")
        skeleton = skeleton_pairs(rev.src, rev.dst)
        (vds_s,) = body(rev.src)
        (vds_d,) = body(rev.dst)
        st1, st2 = nodes_of(rev.src, "SimpleType")
        st1_d, st2_d = nodes_of(rev.dst, "SimpleType")
        common = [(vds_s, vds_d),
                  (nodes_of(rev.src, "VariableDeclarationFragment")[0],
                   nodes_of(rev.dst, "VariableDeclarationFragment")[0]),
                  (nodes_of(rev.src, "SimpleName", "runner")[0],
                   nodes_of(rev.dst, "SimpleName", "runner")[0])]
        straight = (subtree_pairs(rev.src, st1, rev.dst, st1_d)
                    + subtree_pairs(rev.src, st2, rev.dst, st2_d))
        crossed = (subtree_pairs(rev.src, st1, rev.dst, st2_d)
                   + subtree_pairs(rev.src, st2, rev.dst, st1_d))
        a = rev.refined("A", skeleton + common + straight)
        b = rev.refined("B", skeleton + common + crossed)
        return a, b, vds_s, vds_d

    def test_measures(self):
        a, b, vds_s, vds_d = self._algorithms()
        assert statement_measures(a, vds_s, vds_d) == MeasureVector(nit=5, pm=True, llcs=5)
        assert statement_measures(b, vds_s, vds_d) == MeasureVector(nit=5, pm=True, llcs=3)
        first = token_index(a, "src", "Filterable")
        assert token_measures(b, first, token_index(b, "dst", "Filterable", 1)) == \
            MeasureVector(llcs=3, type_ok=True, stmt_ok=True, val_ok=True)

    def test_verdict(self):
        a, b, vds_s, vds_d = self._algorithms()
        result = judge_pair(a, b)
        assert result.flagged("B") == {StatementRef("src", vds_s), StatementRef("dst", vds_d)}
        assert result.flagged("A") == set()
        for side in ("src", "dst"):
            for nth in (0, 1):
                element = ElementRef("token", side, token_index(a, side, "Filterable", nth))
                assert _decided(result, "B", element) == {"LLCS"}
        assert step1_rules(b) == []
