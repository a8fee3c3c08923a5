"""Name-aware, declaration-partitioned mapper (IJM style).

Flow:
  1. split both trees into regions, one per top-level type and one per
     member of such a type (a node belongs to its nearest region declaration
     ancestor-or-self; nodes above every declaration form the root region)
  2. pair regions: a src declaration takes the free same-label dst
     declaration with the most similar name, provided their enclosing
     regions are paired too
  3. inside each region pair run the top-down / bottom-up procedure, with
     the extra rule that valued nodes only map when their values are similar
     enough; a type reference (unit) is compared on its whole text and, once
     mapped, maps its members in order
"""
from __future__ import annotations

import logging
import re

from astjudge.config import MapperConfig
from astjudge.mappers.base import (
    MappingStore,
    NodeMappingSet,
    TreePair,
    bottom_up,
    match_identical_subtrees,
    recover,
    similarity,
)
from astjudge.tree.labels import NAME_LABELS, TYPE_LABELS, StatementKind
from astjudge.tree.model import Ast

log = logging.getLogger("astjudge.mappers")

ALGORITHM = "ijm"

_WS = re.compile(r"\s+")


class _Regions:
    """Declaration regions and unit structure of one tree.

    Regions open at top-level types and their direct members only; a member
    of a nested type stays inside the nested type's region.
    """

    def __init__(self, ast: Ast):
        self.ast = ast
        n = len(ast)
        self.decl_of: list[int | None] = [None] * n
        self.has_decl_below = [False] * n
        self.unit_of: list[int | None] = [None] * n
        top_level: set[int] = set()
        for nid in ast.preorder:
            node = ast[nid]
            outer = self.decl_of[node.parent] if node.parent is not None else None
            if self._opens_region(nid, outer, top_level):
                self.decl_of[nid] = nid
                if outer is None:
                    top_level.add(nid)
            else:
                self.decl_of[nid] = outer
            parent_unit = self.unit_of[node.parent] if node.parent is not None else None
            if parent_unit is not None:
                self.unit_of[nid] = parent_unit
            elif node.label in TYPE_LABELS:
                self.unit_of[nid] = nid
        self.declarations = [nid for nid in ast.preorder
                             if self.decl_of[nid] == nid]
        for nid in ast.postorder:
            parent = ast.parent(nid)
            if parent is not None and (self.has_decl_below[nid]
                                       or self.decl_of[nid] == nid):
                self.has_decl_below[parent] = True

    def _opens_region(self, nid: int, outer: int | None, top_level: set[int]) -> bool:
        if self.ast.statement_kind(nid) is not StatementKind.DECLARATION:
            return False
        return outer is None or outer in top_level

    def region_of(self, nid: int) -> int | None:
        return self.decl_of[nid]

    def enclosing_region(self, decl: int) -> int | None:
        parent = self.ast.parent(decl)
        return None if parent is None else self.decl_of[parent]

    def region_root(self, region: int | None) -> int | None:
        if region is not None:
            return region
        return self.ast.root if self.decl_of[self.ast.root] is None else None

    def is_unit_root(self, nid: int) -> bool:
        return self.unit_of[nid] == nid

    def in_unit_below_root(self, nid: int) -> bool:
        unit = self.unit_of[nid]
        return unit is not None and unit != nid

    def decl_name(self, decl: int) -> str:
        ast = self.ast
        for c in ast.children(decl):
            if ast.label(c) in NAME_LABELS:
                return ast.value(c)
        for c in ast.children(decl):
            if ast.label(c) == "VariableDeclarationFragment":
                for g in ast.children(c):
                    if ast.label(g) in NAME_LABELS:
                        return ast.value(g)
        return ""


def _compact(text: str) -> str:
    return _WS.sub("", text)


def _pair_regions(src_r: _Regions, dst_r: _Regions,
                  threshold: float) -> list[tuple[int | None, int | None]]:
    """Region pairs in src preorder, the root region first."""
    pairs: list[tuple[int | None, int | None]] = [(None, None)]
    partner: dict[int | None, int | None] = {None: None}
    taken: set[int] = set()
    src, dst = src_r.ast, dst_r.ast
    for s in src_r.declarations:
        outer = src_r.enclosing_region(s)
        if outer not in partner:
            continue
        want = partner[outer]
        name = src_r.decl_name(s)
        best, best_score = None, -1.0
        for d in dst_r.declarations:
            if (d in taken or dst.label(d) != src.label(s)
                    or dst_r.enclosing_region(d) != want):
                continue
            score = similarity(name, dst_r.decl_name(d))
            if score >= threshold and score > best_score:
                best, best_score = d, score
        if best is not None:
            taken.add(best)
            partner[s] = best
            pairs.append((s, best))
    return pairs


def map_name_aware(src: Ast, dst: Ast,
                   cfg: MapperConfig | None = None) -> NodeMappingSet:
    cfg = cfg or MapperConfig()
    pair = TreePair(src, dst)
    store = MappingStore(src, dst)
    src_r, dst_r = _Regions(src), _Regions(dst)
    threshold = cfg.name_similarity_threshold

    def accept(s: int, d: int) -> bool:
        if src_r.is_unit_root(s) or dst_r.is_unit_root(d):
            return similarity(_compact(src.text(s)),
                              _compact(dst.text(d))) >= threshold
        if src.value(s) or dst.value(d):
            return similarity(src.value(s), dst.value(d)) >= threshold
        return True

    def map_unit(s: int, d: int):
        if not src_r.is_unit_root(s):
            return
        members = dst.descendants(d)
        j = 0
        for a in src.descendants(s):
            if store.has_src(a):
                continue
            for k in range(j, len(members)):
                b = members[k]
                if not store.has_dst(b) and dst.label(b) == src.label(a):
                    store.add(a, b)
                    j = k + 1
                    break

    region_pairs = _pair_regions(src_r, dst_r, threshold)
    log.debug(f"[ijm] {len(region_pairs)} region pairs")

    for rs, rd in region_pairs:
        root_s, root_d = src_r.region_root(rs), dst_r.region_root(rd)
        if root_s is None or root_d is None:
            continue
        if (not store.has_src(root_s) and not store.has_dst(root_d)
                and src.label(root_s) == dst.label(root_d)):
            store.add(root_s, root_d)

        def include(side: str, nid: int, rs=rs, rd=rd) -> bool:
            if side == "src":
                return src_r.region_of(nid) == rs
            return dst_r.region_of(nid) == rd

        def matchable(s: int, d: int) -> bool:
            return not src_r.has_decl_below[s] and not dst_r.has_decl_below[d]

        match_identical_subtrees(
            pair, store, cfg.min_subtree_height,
            [c for c in src.children(root_s) if include("src", c)],
            [c for c in dst.children(root_d) if include("dst", c)],
            include=include, matchable=matchable)

        def after_map(s: int, d: int, include=include):
            map_unit(s, d)
            recover(pair, store, s, d, accept, include, on_pair=map_unit)

        order = [n for n in src.postorder
                 if n != root_s and src_r.region_of(n) == rs]
        bottom_up(pair, store, cfg, order,
                  dst_allowed=lambda d, rd=rd, root_d=root_d:
                      d != root_d and dst_r.region_of(d) == rd,
                  accept=accept, skip=src_r.in_unit_below_root,
                  on_map=after_map)

        if store.dst_of(root_s) == root_d:
            recover(pair, store, root_s, root_d, accept, include,
                    on_pair=map_unit)

    log.debug(f"[ijm] total: {len(store.s2d)} pairs")
    return store.freeze(ALGORITHM)
