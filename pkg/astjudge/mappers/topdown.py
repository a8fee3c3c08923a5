"""Top-down then bottom-up mapper (GT style).

Flow:
  1. map maximal identical subtrees, tallest first
  2. bottom-up: map free inner nodes to the candidate with the best dice
     score over mapped descendants, then recover their remaining children
  3. map the two roots when their labels agree, then recover below them
"""
from __future__ import annotations

import logging

from astjudge.config import MapperConfig
from astjudge.mappers.base import (
    MappingStore,
    NodeMappingSet,
    TreePair,
    bottom_up,
    match_identical_subtrees,
    recover,
)
from astjudge.tree.model import Ast

log = logging.getLogger("astjudge.mappers")

ALGORITHM = "gt"


def map_topdown_bottomup(src: Ast, dst: Ast,
                         cfg: MapperConfig | None = None) -> NodeMappingSet:
    cfg = cfg or MapperConfig()
    pair = TreePair(src, dst)
    store = MappingStore(src, dst)

    match_identical_subtrees(pair, store, cfg.min_subtree_height,
                             [src.root], [dst.root])
    log.debug(f"[gt] identical subtrees: {len(store.s2d)} pairs")

    def after_map(s: int, d: int):
        recover(pair, store, s, d)

    bottom_up(pair, store, cfg,
              (n for n in src.postorder if n != src.root),
              dst_allowed=lambda d: d != dst.root,
              on_map=after_map)

    if (not store.has_src(src.root) and not store.has_dst(dst.root)
            and src.label(src.root) == dst.label(dst.root)):
        store.add(src.root, dst.root)
    if store.dst_of(src.root) == dst.root:
        recover(pair, store, src.root, dst.root)

    log.debug(f"[gt] total: {len(store.s2d)} pairs")
    return store.freeze(ALGORITHM)
