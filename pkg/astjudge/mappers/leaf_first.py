"""Leaf-first mapper (MTD style).

Flow:
  1. prune: map identical subtrees exactly like the top-down phase
  2. leaves, src preorder: best value similarity among free same-label dst
     leaves, accepted at name_similarity_threshold
  3. inner nodes, src postorder: best dice over mapped leaves, accepted at
     dice_threshold
  4. roots
"""
from __future__ import annotations

import logging

from astjudge.config import MapperConfig
from astjudge.mappers.base import (
    MappingStore,
    NodeMappingSet,
    TreePair,
    match_identical_subtrees,
    similarity,
)
from astjudge.tree.model import Ast

log = logging.getLogger("astjudge.mappers")

ALGORITHM = "mtd"


def _leaf_dice(src: Ast, dst: Ast, store: MappingStore,
               src_leaves: list[int], d: int) -> float:
    dst_leaves = dst.leaves(d)
    total = len(src_leaves) + len(dst_leaves)
    if total == 0:
        return 0.0
    common = 0
    for leaf in src_leaves:
        m = store.dst_of(leaf)
        if m is not None and (m == d or dst.is_descendant(m, d)):
            common += 1
    return 2.0 * common / total


def map_leaf_first(src: Ast, dst: Ast,
                   cfg: MapperConfig | None = None) -> NodeMappingSet:
    cfg = cfg or MapperConfig()
    pair = TreePair(src, dst)
    store = MappingStore(src, dst)

    match_identical_subtrees(pair, store, cfg.min_subtree_height,
                             [src.root], [dst.root])

    # ── leaves ──
    free_dst_leaves: dict[str, list[int]] = {}
    for d in dst.preorder:
        if dst[d].is_leaf and not store.has_dst(d) and d != dst.root:
            free_dst_leaves.setdefault(dst.label(d), []).append(d)
    for s in src.preorder:
        if not src[s].is_leaf or store.has_src(s) or s == src.root:
            continue
        best, best_score = None, -1.0
        value = src.value(s)
        for d in free_dst_leaves.get(src.label(s), ()):
            if store.has_dst(d):
                continue
            score = similarity(value, dst.value(d))
            if score >= cfg.name_similarity_threshold and score > best_score:
                best, best_score = d, score
        if best is not None:
            store.add(s, best)
    log.debug(f"[mtd] after leaves: {len(store.s2d)} pairs")

    # ── inner nodes ──
    for s in src.postorder:
        if s == src.root or src[s].is_leaf or store.has_src(s):
            continue
        label = src.label(s)
        leaves = src.leaves(s)
        seen: set[int] = set()
        candidates: list[int] = []
        for leaf in leaves:
            m = store.dst_of(leaf)
            if m is None:
                continue
            for a in dst.ancestors(m):
                if a in seen:
                    break
                seen.add(a)
                if a != dst.root and dst.label(a) == label and not store.has_dst(a):
                    candidates.append(a)
        best, best_score = None, -1.0
        for d in sorted(candidates):
            score = _leaf_dice(src, dst, store, leaves, d)
            if score >= cfg.dice_threshold and score > best_score:
                best, best_score = d, score
        if best is not None:
            store.add(s, best)

    if (not store.has_src(src.root) and not store.has_dst(dst.root)
            and src.label(src.root) == dst.label(dst.root)):
        store.add(src.root, dst.root)

    log.debug(f"[mtd] total: {len(store.s2d)} pairs")
    return store.freeze(ALGORITHM)
