"""Refine: node mappings to statement and token mappings.

Flow:
  1. group_by_statement: each statement owns the nodes it encloses directly
     (not through a nested statement), and the node pairs touching them
  2. derive_statement_mappings: a statement pair is mapped iff the node
     pair itself is mapped
  3. derive_token_mappings: every mapped node pair pairs its directly
     relevant tokens. Two singleton lists map directly; otherwise value and
     non-value tokens are paired separately, identical texts first (longest
     common subsequence), then the runs between mapped anchors

The mapper's output is taken as is, mistakes included.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from astjudge.mappers.base import NodeMappingSet
from astjudge.pipeline.tokenizer import TokenList
from astjudge.tree.model import Ast

StatementKey = tuple[int | None, int | None]


# ═══════════════════════════════════════════════════════════════
#  TYPES
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class StatementGroup:
    statement: int
    own_nodes: frozenset[int]
    grouped_pairs: frozenset[tuple[int, int]]


@dataclass(frozen=True, eq=False)
class StatementMappingSet:
    pairs: frozenset[tuple[int, int]]
    src_to_dst: Mapping[int, int] = field(repr=False)
    dst_to_src: Mapping[int, int] = field(repr=False)
    unmapped_src: frozenset[int] = frozenset()
    unmapped_dst: frozenset[int] = frozenset()

    def partner(self, side: str, stmt: int) -> int | None:
        return self.src_to_dst.get(stmt) if side == "src" else self.dst_to_src.get(stmt)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class TokenMappingSet:
    pairs: frozenset[tuple[int, int]]
    src_to_dst: Mapping[int, int] = field(repr=False)
    dst_to_src: Mapping[int, int] = field(repr=False)
    per_statement: Mapping[StatementKey, tuple[tuple[int, int], ...]] = field(repr=False)

    def partner(self, side: str, token: int) -> int | None:
        return self.src_to_dst.get(token) if side == "src" else self.dst_to_src.get(token)

    def within(self, src_stmt: int | None, dst_stmt: int | None) -> tuple[tuple[int, int], ...]:
        return self.per_statement.get((src_stmt, dst_stmt), ())

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class RefinedMappings:
    """Node, statement and token mappings of one algorithm on one revision."""

    algorithm: str
    src: Ast
    dst: Ast
    src_tokens: TokenList
    dst_tokens: TokenList
    nodes: NodeMappingSet
    statements: StatementMappingSet
    tokens: TokenMappingSet

    def ast(self, side: str) -> Ast:
        return self.src if side == "src" else self.dst

    def token_list(self, side: str) -> TokenList:
        return self.src_tokens if side == "src" else self.dst_tokens


# ═══════════════════════════════════════════════════════════════
#  STATEMENTS
# ═══════════════════════════════════════════════════════════════

def group_by_statement(ast: Ast, mapping: NodeMappingSet,
                       side: str = "src") -> list[StatementGroup]:
    own: dict[int, set[int]] = {stmt: set() for stmt in ast.statements()}
    for nid in ast.preorder:
        stmt = ast.enclosing_statement(nid)
        if stmt is not None:
            own[stmt].add(nid)
    groups = []
    for stmt in ast.statements():
        nodes = own[stmt]
        pairs = frozenset((s, d) for s, d in mapping.pairs
                          if (s if side == "src" else d) in nodes)
        groups.append(StatementGroup(stmt, frozenset(nodes), pairs))
    return groups


def derive_statement_mappings(src: Ast, dst: Ast,
                              mapping: NodeMappingSet) -> StatementMappingSet:
    s2d = {s: d for s, d in mapping.pairs
           if src.is_statement(s) and dst.is_statement(d)}
    d2s = {d: s for s, d in s2d.items()}
    return StatementMappingSet(
        pairs=frozenset(s2d.items()),
        src_to_dst=s2d,
        dst_to_src=d2s,
        unmapped_src=frozenset(s for s in src.statements() if s not in s2d),
        unmapped_dst=frozenset(d for d in dst.statements() if d not in d2s),
    )


# ═══════════════════════════════════════════════════════════════
#  TOKENS
# ═══════════════════════════════════════════════════════════════

def _lcs_anchors(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Leftmost longest common subsequence of equal texts.

    On ties the dst side advances first, so [a, b] / [b, a] keeps a <-> a.
    """
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                dp[i][j] = dp[i + 1][j + 1] + 1
            else:
                dp[i][j] = max(dp[i + 1][j], dp[i][j + 1])
    out = []
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            out.append((i, j))
            i += 1
            j += 1
        elif dp[i][j + 1] >= dp[i + 1][j]:
            j += 1
        else:
            i += 1
    return out


def pair_sequences(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Pair two token-text lists: identical texts in order, then the runs
    between consecutive anchors (list ends count as anchors), front to back."""
    anchors = _lcs_anchors(a, b)
    out = list(anchors)
    bounds = [(-1, -1), *anchors, (len(a), len(b))]
    for (pi, pj), (qi, qj) in zip(bounds, bounds[1:]):
        gap_a = range(pi + 1, qi)
        gap_b = range(pj + 1, qj)
        out.extend(zip(gap_a, gap_b))
    return sorted(out)


def _pair_cell(src_tokens: TokenList, dst_tokens: TokenList,
               a: tuple[int, ...], b: tuple[int, ...]) -> Iterable[tuple[int, int]]:
    if not a or not b:
        return ()
    texts_a = [src_tokens[i].text for i in a]
    texts_b = [dst_tokens[j].text for j in b]
    return [(a[i], b[j]) for i, j in pair_sequences(texts_a, texts_b)]


def derive_token_mappings(src_tokens: TokenList, dst_tokens: TokenList,
                          mapping: NodeMappingSet) -> TokenMappingSet:
    pairs: list[tuple[int, int]] = []
    for s, d in mapping:
        a = src_tokens.of_node(s)
        b = dst_tokens.of_node(d)
        if len(a.value) == len(b.value) == 1 and not a.other and not b.other:
            pairs.append((a.value[0], b.value[0]))
        elif len(a.other) == len(b.other) == 1 and not a.value and not b.value:
            pairs.append((a.other[0], b.other[0]))
        else:
            pairs.extend(_pair_cell(src_tokens, dst_tokens, a.value, b.value))
            pairs.extend(_pair_cell(src_tokens, dst_tokens, a.other, b.other))

    pairs.sort()
    per_statement: dict[StatementKey, list[tuple[int, int]]] = {}
    for i, j in pairs:
        key = (src_tokens.statement_of(i), dst_tokens.statement_of(j))
        per_statement.setdefault(key, []).append((i, j))
    return TokenMappingSet(
        pairs=frozenset(pairs),
        src_to_dst=dict(pairs),
        dst_to_src={j: i for i, j in pairs},
        per_statement={k: tuple(v) for k, v in per_statement.items()},
    )


def refine(src: Ast, dst: Ast, src_tokens: TokenList, dst_tokens: TokenList,
           mapping: NodeMappingSet) -> RefinedMappings:
    return RefinedMappings(
        algorithm=mapping.algorithm,
        src=src,
        dst=dst,
        src_tokens=src_tokens,
        dst_tokens=dst_tokens,
        nodes=mapping,
        statements=derive_statement_mappings(src, dst, mapping),
        tokens=derive_token_mappings(src_tokens, dst_tokens, mapping),
    )
