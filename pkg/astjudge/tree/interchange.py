"""AST interchange documents: JSON trees produced by other parsers.

Document shape:
    {
      "header": {"format_version": 1, "statement_labels": [...], "block_label": "Block"},
      "nodes": [{"id": 0, "label": "...", "value": "...", "start": 0, "end": 10,
                 "children": [1, 2]}, ...],
      "source": "full text"
    }

load_ast validates every tree invariant and raises SchemaError naming the
first one violated. save_ast is its inverse.
"""
from __future__ import annotations

import json
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from astjudge.errors import SchemaError
from astjudge.tree.labels import StatementTable
from astjudge.tree.model import Ast, AstNode

FORMAT_VERSION = 1


class AstHeader(BaseModel):
    model_config = ConfigDict(extra="ignore")

    format_version: int
    statement_labels: list[str]
    block_label: str


class AstNodeDoc(BaseModel):
    model_config = ConfigDict(extra="ignore")

    id: int
    label: str
    value: str = ""
    start: int
    end: int
    children: list[int] = Field(default_factory=list)


class AstDocument(BaseModel):
    model_config = ConfigDict(extra="ignore")

    header: AstHeader
    nodes: list[AstNodeDoc]
    source: str


def parse_document(doc: bytes | str | dict, model: type[BaseModel]) -> Any:
    """Validate raw JSON (bytes, text or already-decoded) against a model."""
    try:
        if isinstance(doc, (bytes, str)):
            return model.model_validate_json(doc)
        return model.model_validate(doc)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise SchemaError(f"schema: {where}: {first['msg']}") from e


def load_ast(doc: bytes | str | dict) -> Ast:
    """Build an Ast from an interchange document.

    Raises:
        SchemaError: "format version", "duplicate id", "dense ids",
            "unknown child", "multiple parents", "no root", "multiple roots",
            "cycle", "range bounds", "range nesting", "child order" or
            "value not in range".
    """
    parsed: AstDocument = parse_document(doc, AstDocument)
    header = parsed.header
    if header.format_version != FORMAT_VERSION:
        raise SchemaError(f"format version: expected {FORMAT_VERSION}, "
                          f"got {header.format_version}")

    by_id: dict[int, AstNodeDoc] = {}
    for node in parsed.nodes:
        if node.id in by_id:
            raise SchemaError(f"duplicate id: {node.id}")
        by_id[node.id] = node
    n = len(by_id)
    if set(by_id) != set(range(n)):
        raise SchemaError("dense ids: node ids must be 0..N-1")

    parent: dict[int, int] = {}
    for node in parsed.nodes:
        for c in node.children:
            if c not in by_id:
                raise SchemaError(f"unknown child: node {node.id} lists {c}")
            if c in parent:
                raise SchemaError(f"multiple parents: node {c}")
            parent[c] = node.id

    roots = [nid for nid in range(n) if nid not in parent]
    if not roots:
        raise SchemaError("no root: every node has a parent")
    if len(roots) > 1:
        raise SchemaError(f"multiple roots: {roots}")
    root = roots[0]

    seen = set()
    stack = [root]
    while stack:
        cur = stack.pop()
        if cur in seen:
            raise SchemaError(f"cycle: node {cur} reached twice")
        seen.add(cur)
        stack.extend(by_id[cur].children)
    if len(seen) != n:
        raise SchemaError("cycle: some nodes are unreachable from the root")

    source = parsed.source
    for node in parsed.nodes:
        if not (0 <= node.start <= node.end <= len(source)):
            raise SchemaError(f"range bounds: node {node.id} "
                              f"[{node.start}, {node.end})")
    for node in parsed.nodes:
        prev_start = -1
        for c in node.children:
            child = by_id[c]
            if child.start < node.start or child.end > node.end:
                raise SchemaError(f"range nesting: child {c} of node {node.id}")
            if child.start < prev_start:
                raise SchemaError(f"child order: children of node {node.id}")
            prev_start = child.start
        if node.value and node.value not in source[node.start:node.end]:
            raise SchemaError(f"value not in range: node {node.id} "
                              f"{node.value!r}")

    nodes = tuple(
        AstNode(nid, by_id[nid].label, by_id[nid].value, by_id[nid].start,
                by_id[nid].end, parent.get(nid), tuple(by_id[nid].children))
        for nid in range(n)
    )
    table = StatementTable.from_header(header.statement_labels,
                                       header.block_label)
    return Ast(nodes, root, source, table)


def save_ast(ast: Ast) -> dict:
    """Serialize an Ast to an interchange document (a JSON-ready dict)."""
    return {
        "header": {
            "format_version": FORMAT_VERSION,
            "statement_labels": ast.table.statement_labels,
            "block_label": ast.table.block_label,
        },
        "nodes": [
            {
                "id": node.id,
                "label": node.label,
                "value": node.value,
                "start": node.start,
                "end": node.end,
                "children": list(node.children),
            }
            for node in ast.nodes
        ],
        "source": ast.source,
    }


def dumps_ast(ast: Ast) -> str:
    return json.dumps(save_ast(ast), indent=2, ensure_ascii=False)
