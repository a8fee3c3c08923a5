"""Shared mapper machinery.

  NodeMappingSet    immutable, validated result of any mapper
  MappingStore      mutable pair store used while a mapper runs
  TreePair          src/dst Asts plus shared subtree-isomorphism keys
  match_identical_subtrees / contested / bottom_up / recover
                    the greedy phases the built-in mappers are assembled from
"""
from __future__ import annotations

import heapq
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from astjudge.config import MapperConfig
from astjudge.errors import SchemaError
from astjudge.tree.model import Ast

log = logging.getLogger("astjudge.mappers")

Accept = Callable[[int, int], bool]
Include = Callable[[str, int], bool]


def _always(*_args) -> bool:
    return True


# ═══════════════════════════════════════════════════════════════
#  MAPPING SETS
# ═══════════════════════════════════════════════════════════════

@dataclass(frozen=True, eq=False)
class NodeMappingSet:
    algorithm: str
    pairs: frozenset[tuple[int, int]]
    src_to_dst: Mapping[int, int] = field(repr=False)
    dst_to_src: Mapping[int, int] = field(repr=False)

    @classmethod
    def build(cls, algorithm: str, pairs: Iterable[tuple[int, int]],
              src: Ast | None = None, dst: Ast | None = None) -> "NodeMappingSet":
        """Validate and freeze a pair collection.

        Raises:
            SchemaError: "unknown node", "src mapped twice", "dst mapped twice"
                or "label mismatch", naming the offending pair.
        """
        s2d: dict[int, int] = {}
        d2s: dict[int, int] = {}
        for s, d in sorted(set(pairs)):
            if src is not None and not 0 <= s < len(src):
                raise SchemaError(f"unknown node: src {s}")
            if dst is not None and not 0 <= d < len(dst):
                raise SchemaError(f"unknown node: dst {d}")
            if s in s2d:
                raise SchemaError(f"src mapped twice: {s} -> {s2d[s]} and {d}")
            if d in d2s:
                raise SchemaError(f"dst mapped twice: {d} <- {d2s[d]} and {s}")
            if src is not None and dst is not None and src.label(s) != dst.label(d):
                raise SchemaError(f"label mismatch: src {s} {src.label(s)} / "
                                  f"dst {d} {dst.label(d)}")
            s2d[s] = d
            d2s[d] = s
        return cls(algorithm, frozenset(s2d.items()), s2d, d2s)

    def dst_of(self, s: int) -> int | None:
        return self.src_to_dst.get(s)

    def src_of(self, d: int) -> int | None:
        return self.dst_to_src.get(d)

    def partner(self, side: str, nid: int) -> int | None:
        return self.src_to_dst.get(nid) if side == "src" else self.dst_to_src.get(nid)

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return self.src_to_dst.get(pair[0]) == pair[1]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))


class MappingStore:
    """Mutable, injective, label-preserving pair store."""

    def __init__(self, src: Ast, dst: Ast):
        self.src = src
        self.dst = dst
        self.s2d: dict[int, int] = {}
        self.d2s: dict[int, int] = {}

    def has_src(self, s: int) -> bool:
        return s in self.s2d

    def has_dst(self, d: int) -> bool:
        return d in self.d2s

    def dst_of(self, s: int) -> int | None:
        return self.s2d.get(s)

    def add(self, s: int, d: int):
        if s in self.s2d or d in self.d2s:
            raise ValueError(f"node already mapped: {s} / {d}")
        if self.src.label(s) != self.dst.label(d):
            raise ValueError(f"label mismatch: {s} / {d}")
        self.s2d[s] = d
        self.d2s[d] = s

    def add_subtrees(self, s: int, d: int):
        """Map two isomorphic subtrees node by node in preorder."""
        for a, b in zip(self.src.subtree(s), self.dst.subtree(d)):
            if a not in self.s2d and b not in self.d2s:
                self.add(a, b)

    def freeze(self, algorithm: str) -> NodeMappingSet:
        return NodeMappingSet.build(algorithm, self.s2d.items(),
                                    self.src, self.dst)


# ═══════════════════════════════════════════════════════════════
#  TREE PAIR + SIMILARITY
# ═══════════════════════════════════════════════════════════════

class TreePair:
    """Two Asts with subtree keys drawn from one interner.

    Equal keys mean isomorphic subtrees: same labels, values and shape.
    """

    def __init__(self, src: Ast, dst: Ast):
        self.src = src
        self.dst = dst
        interner: dict[tuple, int] = {}
        self.src_keys = self._keys(src, interner)
        self.dst_keys = self._keys(dst, interner)
        self.src_classes: dict[int, list[int]] = {}
        for nid in src.preorder:
            self.src_classes.setdefault(self.src_keys[nid], []).append(nid)

    @staticmethod
    def _keys(ast: Ast, interner: dict[tuple, int]) -> list[int]:
        keys = [0] * len(ast)
        for nid in ast.postorder:
            node = ast[nid]
            shape = (node.label, node.value,
                     tuple(keys[c] for c in node.children))
            keys[nid] = interner.setdefault(shape, len(interner))
        return keys

    def isomorphic(self, s: int, d: int) -> bool:
        return self.src_keys[s] == self.dst_keys[d]

    def src_isomorphs(self, d: int) -> list[int]:
        """Src nodes whose subtree is isomorphic to dst node d, in preorder."""
        return self.src_classes.get(self.dst_keys[d], [])

    def ast(self, side: str) -> Ast:
        return self.src if side == "src" else self.dst


def edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


@lru_cache(maxsize=1 << 16)
def similarity(a: str, b: str) -> float:
    """Normalized edit similarity in [0, 1]; two empty strings score 1."""
    if a == b:
        return 1.0
    longest = max(len(a), len(b))
    return 1.0 - edit_distance(a, b) / longest


# ═══════════════════════════════════════════════════════════════
#  PHASE 1: IDENTICAL SUBTREES (greedy top-down)
# ═══════════════════════════════════════════════════════════════

def _push(heap: list, ast: Ast, nid: int):
    heapq.heappush(heap, (-ast.height[nid], nid))


def _pop_tallest(heap: list) -> list[int]:
    height = heap[0][0]
    out = []
    while heap and heap[0][0] == height:
        out.append(heapq.heappop(heap)[1])
    return out


def contested(pair: TreePair, s: int, d: int, min_height: int,
              include: Include = _always,
              matchable: Accept = _always) -> list[tuple[int, int]]:
    """Claims on the inside of d by src subtrees outside s.

    Walks d's subtree top-down; for every node n of height >= min_height that
    is isomorphic to some src subtree x outside s, yields (x, n) and does not
    descend below n.
    """
    src, dst = pair.src, pair.dst
    claims: list[tuple[int, int]] = []
    stack = list(reversed(dst.children(d)))
    while stack:
        n = stack.pop()
        if dst.height[n] < min_height:
            continue
        outside = [x for x in pair.src_isomorphs(n)
                   if x != s and not src.is_descendant(x, s)
                   and include("src", x) and matchable(x, n)]
        if outside:
            claims.extend((x, n) for x in outside)
        else:
            stack.extend(reversed(dst.children(n)))
    return claims


def _subtrees_free(pair: TreePair, store: MappingStore, s: int, d: int) -> bool:
    return (not any(store.has_src(n) for n in pair.src.subtree(s))
            and not any(store.has_dst(n) for n in pair.dst.subtree(d)))


def match_identical_subtrees(pair: TreePair, store: MappingStore,
                             min_height: int, src_roots: Iterable[int],
                             dst_roots: Iterable[int],
                             include: Include = _always,
                             matchable: Accept = _always):
    """Greedily map maximal isomorphic subtrees of height >= min_height.

    Subtrees are visited tallest first. A pair that is the only candidate on
    both sides is mapped at once, unless part of the dst subtree is also
    isomorphic to a src subtree elsewhere (see contested); such pairs and
    their claims join the ambiguous candidates. Ambiguous candidates are
    mapped afterwards in (src id, dst id) order while both subtrees are still
    entirely free.
    include filters which children get pushed when a node is opened;
    matchable can veto an isomorphic pair.
    """
    src, dst = pair.src, pair.dst
    src_heap: list = []
    dst_heap: list = []
    for n in src_roots:
        _push(src_heap, src, n)
    for n in dst_roots:
        _push(dst_heap, dst, n)

    def open_src(n: int):
        for c in src.children(n):
            if include("src", c):
                _push(src_heap, src, c)

    def open_dst(n: int):
        for c in dst.children(n):
            if include("dst", c):
                _push(dst_heap, dst, c)

    ambiguous: set[tuple[int, int]] = set()
    while src_heap and dst_heap:
        hs, hd = -src_heap[0][0], -dst_heap[0][0]
        if min(hs, hd) < min_height:
            break
        if hs > hd:
            for n in _pop_tallest(src_heap):
                open_src(n)
            continue
        if hd > hs:
            for n in _pop_tallest(dst_heap):
                open_dst(n)
            continue
        h1 = _pop_tallest(src_heap)
        h2 = _pop_tallest(dst_heap)
        candidates = [(s, d) for s in h1 for d in h2
                      if pair.isomorphic(s, d) and matchable(s, d)]
        per_src = Counter(s for s, _ in candidates)
        per_dst = Counter(d for _, d in candidates)
        for s, d in candidates:
            if per_src[s] == 1 and per_dst[d] == 1:
                claims = contested(pair, s, d, min_height, include, matchable)
                if not claims:
                    store.add_subtrees(s, d)
                    continue
                log.debug(f"contested {s} -> {d}: {len(claims)} claims")
                ambiguous.update(claims)
            ambiguous.add((s, d))
        for s in h1:
            if s not in per_src:
                open_src(s)
        for d in h2:
            if d not in per_dst:
                open_dst(d)

    for s, d in sorted(ambiguous):
        if _subtrees_free(pair, store, s, d):
            store.add_subtrees(s, d)


# ═══════════════════════════════════════════════════════════════
#  PHASE 2: BOTTOM-UP + RECOVERY
# ═══════════════════════════════════════════════════════════════

def dice(pair: TreePair, store: MappingStore, s: int, d: int) -> float:
    """Dice coefficient over mapped descendants of s and d."""
    src, dst = pair.src, pair.dst
    desc_s = src.descendants(s)
    total = len(desc_s) + dst.size[d] - 1
    if total == 0:
        return 0.0
    common = 0
    for c in desc_s:
        m = store.dst_of(c)
        if m is not None and dst.is_descendant(m, d):
            common += 1
    return 2.0 * common / total


def recover(pair: TreePair, store: MappingStore, s: int, d: int,
            accept: Accept = _always, include: Include = _always,
            on_pair: Callable[[int, int], None] | None = None):
    """Map remaining same-label children of a mapped pair in order, recursively.

    Each free src child takes the first free dst child with the same label
    that accept() allows.
    """
    src, dst = pair.src, pair.dst
    stack = [(s, d)]
    while stack:
        a, b = stack.pop()
        free_dst = [c for c in dst.children(b)
                    if not store.has_dst(c) and include("dst", c)]
        for c in src.children(a):
            if store.has_src(c) or not include("src", c):
                continue
            for k in free_dst:
                if store.has_dst(k) or src.label(c) != dst.label(k):
                    continue
                if accept(c, k):
                    store.add(c, k)
                    if on_pair is not None:
                        on_pair(c, k)
                    stack.append((c, k))
                    break


def bottom_up(pair: TreePair, store: MappingStore, cfg: MapperConfig,
              src_order: Iterable[int], dst_allowed: Callable[[int], bool],
              accept: Accept = _always, skip: Callable[[int], bool] | None = None,
              on_map: Callable[[int, int], None] | None = None):
    """Map free inner src nodes to same-label dst ancestors of their mapped
    descendants' partners, best dice first (ties: smallest dst id)."""
    src, dst = pair.src, pair.dst
    for s in src_order:
        if store.has_src(s) or src[s].is_leaf or (skip and skip(s)):
            continue
        label = src.label(s)
        seen: set[int] = set()
        candidates: list[int] = []
        for c in src.descendants(s):
            m = store.dst_of(c)
            if m is None:
                continue
            for a in dst.ancestors(m):
                if a in seen:
                    break
                seen.add(a)
                if (dst.label(a) == label and not store.has_dst(a)
                        and dst_allowed(a)):
                    candidates.append(a)
        best, best_score = None, -1.0
        for d in sorted(candidates):
            score = dice(pair, store, s, d)
            if score >= cfg.dice_threshold and score > best_score and accept(s, d):
                best, best_score = d, score
        if best is not None:
            log.debug(f"bottom-up {label} {s} -> {best} (dice {best_score:.2f})")
            store.add(s, best)
            if on_map is not None:
                on_map(s, best)
