"""Statement and token mappings derived from node mappings."""
import random
from functools import lru_cache

from astjudge.mappers import NodeMappingSet, map_leaf_first, map_topdown_bottomup
from astjudge.pipeline.refine import group_by_statement, pair_sequences, refine
from astjudge.pipeline.tokenizer import tokenize
from astjudge.tree.interchange import load_ast

from conftest import token_index


def _lcs_length(a, b):
    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))
    return go(0, 0)


def _gap_zip(a, b, anchors):
    out = []
    bounds = [(-1, -1), *anchors, (len(a), len(b))]
    for (pi, pj), (qi, qj) in zip(bounds, bounds[1:]):
        out.extend(zip(range(pi + 1, qi), range(pj + 1, qj)))
    return out


class TestPairSequences:

    def test_random_against_reference(self):
        rng = random.Random(5)
        for _ in range(500):
            a = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
            b = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
            pairs = pair_sequences(a, b)
            equal = [(i, j) for i, j in pairs if a[i] == b[j]]
            assert len(equal) == _lcs_length(tuple(a), tuple(b))
            for (i0, j0), (i1, j1) in zip(pairs, pairs[1:]):
                assert i0 < i1 and j0 < j1
            assert sorted(set(pairs) - set(equal)) == sorted(_gap_zip(a, b, equal))

    def test_type_arguments(self):
        assert pair_sequences(["HashMap", "Integer", "Integer"],
                              ["Map", "Integer", "Integer"]) == [(0, 0), (1, 1), (2, 2)]

    def test_unequal_residue_front_to_back(self):
        assert pair_sequences(["x", "=", "y", "z"], ["x", "=", "w"]) == [(0, 0), (1, 1), (2, 2)]

    def test_swapped_keeps_first(self):
        assert pair_sequences(["a", "b"], ["b", "a"]) == [(0, 1)]

    def test_empty(self):
        assert pair_sequences([], ["a"]) == []


class TestRefine:

    def test_statement_mappings_follow_node_pairs(self, motivating):
        r = refine(motivating.src, motivating.dst, motivating.src_tokens,
                   motivating.dst_tokens,
                   map_topdown_bottomup(motivating.src, motivating.dst))
        assert (1, 1) in r.statements.pairs
        assert (4, 4) in r.statements.pairs
        assert r.statements.unmapped_dst == {15, 18, 19}
        assert r.statements.partner("dst", 4) == 4

    def test_tokens_follow_misplaced_type(self, motivating):
        r = motivating.refined("gt", map_topdown_bottomup(motivating.src, motivating.dst))
        src_hashmap = token_index(r, "src", "HashMap")
        dst_hashmap = token_index(r, "dst", "HashMap")
        assert r.tokens.partner("src", src_hashmap) == dst_hashmap
        assert r.tokens.partner("src", token_index(r, "src", "<")) == \
            token_index(r, "dst", "<", 1)
        assert r.src_tokens.statement_of(src_hashmap) == 4
        assert r.dst_tokens.statement_of(dst_hashmap) == 19
        assert (src_hashmap, dst_hashmap) in r.tokens.within(4, 19)

    def test_singleton_tokens_map_despite_text(self, leaf_rename):
        r = leaf_rename.refined("mtd", map_leaf_first(leaf_rename.src, leaf_rename.dst))
        assert r.tokens.partner("src", token_index(r, "src", "counter")) == \
            token_index(r, "dst", "counters")
        assert r.tokens.partner("src", token_index(r, "src", "counter", 1)) == \
            token_index(r, "dst", "counters", 1)

    def test_mapper_mistakes_kept(self, motivating):
        r = motivating.refined("x", [(0, 0), (1, 1), (8, 8)])
        assert r.tokens.partner("src", token_index(r, "src", "HashMap")) == \
            token_index(r, "dst", "Map")
        assert r.statements.pairs == {(1, 1)}

    def test_no_node_pairs_no_tokens(self, motivating):
        r = refine(motivating.src, motivating.dst, motivating.src_tokens,
                   motivating.dst_tokens, NodeMappingSet.build("none", []))
        assert len(r.tokens) == 0
        assert len(r.statements) == 0

    def test_group_by_statement(self, motivating):
        mapping = map_topdown_bottomup(motivating.src, motivating.dst)
        groups = {g.statement: g for g in group_by_statement(motivating.src, mapping)}
        assert set(range(4, 23)) == groups[4].own_nodes
        assert (6, 23) in groups[4].grouped_pairs
        assert all(s in groups[4].own_nodes for s, _ in groups[4].grouped_pairs)


def _field_doc(type_text: str) -> dict:
    source = f"{type_text} m;"
    n = len(type_text)
    return {
        "header": {"format_version": 1, "block_label": "Block",
                   "statement_labels": ["FieldDeclaration"]},
        "nodes": [
            {"id": 0, "label": "CompilationUnit", "start": 0, "end": len(source),
             "children": [1]},
            {"id": 1, "label": "FieldDeclaration", "start": 0, "end": len(source),
             "children": [2, 3]},
            {"id": 2, "label": "ParameterizedType", "value": type_text,
             "start": 0, "end": n},
            {"id": 3, "label": "SimpleName", "value": "m", "start": n + 1, "end": n + 2},
        ],
        "source": source,
    }


class TestValueCells:

    def test_multi_token_value_pairs_residue_between_anchors(self):
        src = load_ast(_field_doc("HashMap<Integer,Integer>"))
        dst = load_ast(_field_doc("Map<Integer,Integer>"))
        src_tokens, dst_tokens = tokenize(src), tokenize(dst)
        assert [src_tokens[i].text for i in src_tokens.of_node(2).value] == \
            ["HashMap", "<", "Integer", ",", "Integer", ">"]
        mapping = NodeMappingSet.build("x", [(0, 0), (1, 1), (2, 2), (3, 3)], src, dst)
        r = refine(src, dst, src_tokens, dst_tokens, mapping)
        assert r.tokens.partner("src", 0) == 0
        assert dst_tokens[0].text == "Map"
        assert sorted(r.tokens.pairs) == [(i, i) for i in range(8)]

    def test_value_and_other_cells_pair_separately(self, motivating):
        r = motivating.refined("x", [(0, 0), (1, 1), (4, 4), (6, 6)])
        lt = token_index(r, "src", "<")
        assert r.src_tokens[lt].in_node_value
        assert r.tokens.partner("src", lt) == token_index(r, "dst", "<")
        assert r.tokens.partner("src", token_index(r, "src", "HashMap")) is None
