"""Node mappers. MAPPERS is the registry of built-in algorithms by name."""
from __future__ import annotations

from typing import Callable

from astjudge.config import MapperConfig
from astjudge.mappers.base import MappingStore, NodeMappingSet, TreePair, similarity
from astjudge.mappers.external import load_external_mappings, save_mappings
from astjudge.mappers.leaf_first import map_leaf_first
from astjudge.mappers.name_aware import map_name_aware
from astjudge.mappers.topdown import map_topdown_bottomup
from astjudge.tree.model import Ast

Mapper = Callable[[Ast, Ast, MapperConfig], NodeMappingSet]

MAPPERS: dict[str, Mapper] = {
    "gt": map_topdown_bottomup,
    "mtd": map_leaf_first,
    "ijm": map_name_aware,
}

__all__ = [
    "MAPPERS",
    "Mapper",
    "MappingStore",
    "NodeMappingSet",
    "TreePair",
    "load_external_mappings",
    "map_leaf_first",
    "map_name_aware",
    "map_topdown_bottomup",
    "save_mappings",
    "similarity",
]
