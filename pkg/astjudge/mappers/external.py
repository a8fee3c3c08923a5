"""Mapping interchange documents: node mappings computed by other tools.

    {"format_version": 1, "algorithm": "gumtree", "pairs": [{"src": 3, "dst": 5}, ...]}

Ids refer to the nodes of the two AST interchange documents (or of the Asts
parsed from the revision's sources, which number nodes in preorder).
"""
from __future__ import annotations

import json

from pydantic import BaseModel, ConfigDict

from astjudge.errors import SchemaError
from astjudge.mappers.base import NodeMappingSet
from astjudge.tree.interchange import parse_document
from astjudge.tree.model import Ast

FORMAT_VERSION = 1


class MappingPairDoc(BaseModel):
    model_config = ConfigDict(extra="ignore")

    src: int
    dst: int


class MappingDocument(BaseModel):
    model_config = ConfigDict(extra="ignore")

    format_version: int
    algorithm: str
    pairs: list[MappingPairDoc]


def load_external_mappings(doc: bytes | str | dict, src: Ast, dst: Ast,
                           algorithm: str | None = None) -> NodeMappingSet:
    """Validate a mapping document against the two Asts.

    Raises:
        SchemaError: on a malformed document, a wrong format version, an
            unknown node id, a node mapped twice or a label mismatch.
    """
    parsed: MappingDocument = parse_document(doc, MappingDocument)
    if parsed.format_version != FORMAT_VERSION:
        raise SchemaError(f"format version: expected {FORMAT_VERSION}, "
                          f"got {parsed.format_version}")
    seen_src: dict[int, int] = {}
    seen_dst: dict[int, int] = {}
    for p in parsed.pairs:
        if p.src in seen_src and seen_src[p.src] != p.dst:
            raise SchemaError(f"src mapped twice: {p.src} -> "
                              f"{seen_src[p.src]} and {p.dst}")
        if p.dst in seen_dst and seen_dst[p.dst] != p.src:
            raise SchemaError(f"dst mapped twice: {p.dst} <- "
                              f"{seen_dst[p.dst]} and {p.src}")
        seen_src[p.src] = p.dst
        seen_dst[p.dst] = p.src
    return NodeMappingSet.build(algorithm or parsed.algorithm,
                                ((p.src, p.dst) for p in parsed.pairs),
                                src, dst)


def save_mappings(mapping: NodeMappingSet) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "algorithm": mapping.algorithm,
        "pairs": [{"src": s, "dst": d} for s, d in mapping],
    }


def dumps_mappings(mapping: NodeMappingSet) -> str:
    return json.dumps(save_mappings(mapping), indent=2, ensure_ascii=False)
