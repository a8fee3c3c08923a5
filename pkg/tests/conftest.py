"""Shared fixtures and tree helpers for the astjudge test suite."""
from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from astjudge.mappers.base import NodeMappingSet
from astjudge.pipeline.refine import RefinedMappings, refine
from astjudge.pipeline.tokenizer import tokenize
from astjudge.tree.interchange import load_ast
from astjudge.tree.model import Ast
from astjudge.tree.parser import parse_source

GOLDEN_DIR = Path(__file__).parent / "golden"


def golden(name: str) -> tuple[str, str]:
    """(before, after) source text of a golden scenario."""
    d = GOLDEN_DIR / name
    return ((d / "before.java").read_text(encoding="utf-8"),
            (d / "after.java").read_text(encoding="utf-8"))


# ── tree helpers ──

def nodes_of(ast: Ast, label: str, value: str | None = None) -> list[int]:
    """Node ids with this label (and value), in preorder."""
    return [n for n in ast.preorder if ast.label(n) == label
            and (value is None or ast.value(n) == value)]


def body(ast: Ast, method: str | None = None) -> list[int]:
    """Statements of a method body (the first method when no name is given)."""
    for md in nodes_of(ast, "MethodDeclaration"):
        names = [c for c in ast.children(md) if ast.label(c) == "SimpleName"]
        if method is None or ast.value(names[0]) == method:
            return list(ast.children(ast.children(md)[-1]))
    raise LookupError(method)


def outside_bodies(ast: Ast) -> list[int]:
    inner: set[int] = set()
    for block in nodes_of(ast, "Block"):
        for c in ast.children(block):
            inner.update(ast.subtree(c))
    return [n for n in ast.preorder if n not in inner]


def subtree_pairs(src: Ast, s: int, dst: Ast, d: int) -> list[tuple[int, int]]:
    a, b = src.subtree(s), dst.subtree(d)
    assert [src.label(n) for n in a] == [dst.label(n) for n in b]
    return list(zip(a, b))


def skeleton_pairs(src: Ast, dst: Ast) -> list[tuple[int, int]]:
    """Pairs for everything outside method bodies (same shape on both sides)."""
    a, b = outside_bodies(src), outside_bodies(dst)
    assert [src.label(n) for n in a] == [dst.label(n) for n in b]
    return list(zip(a, b))


def token_index(refined: RefinedMappings, side: str, text: str, nth: int = 0) -> int:
    hits = [t.index for t in refined.token_list(side) if t.text == text]
    return hits[nth]


class Revision2:
    """Two parsed sides with cached token lists; builds refined mappings."""

    def __init__(self, before: str | Ast, after: str | Ast):
        self.src = before if isinstance(before, Ast) else parse_source(before)
        self.dst = after if isinstance(after, Ast) else parse_source(after)
        self.src_tokens = tokenize(self.src)
        self.dst_tokens = tokenize(self.dst)

    def refined(self, algorithm: str, pairs) -> RefinedMappings:
        mapping = NodeMappingSet.build(algorithm, pairs, self.src, self.dst)
        return refine(self.src, self.dst, self.src_tokens, self.dst_tokens, mapping)

    def identity(self) -> list[tuple[int, int]]:
        return subtree_pairs(self.src, self.src.root, self.dst, self.dst.root)


def golden_revision(name: str) -> Revision2:
    """A golden scenario; `<side>.ast.json` documents win over `<side>.java`."""
    d = GOLDEN_DIR / name
    sides = []
    for stem in ("before", "after"):
        doc = d / f"{stem}.ast.json"
        sides.append(load_ast(doc.read_bytes()) if doc.is_file()
                     else parse_source((d / f"{stem}.java").read_text(encoding="utf-8")))
    return Revision2(*sides)


# ── fixtures ──

@pytest.fixture
def motivating() -> Revision2:
    return Revision2(*golden("motivating"))


@pytest.fixture
def leaf_rename() -> Revision2:
    return Revision2(*golden("leaf_rename"))


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory) -> Path:
    """A generated corpus shared by the corpus-level suites."""
    from astjudge.pipeline.synth import generate_corpus

    root = tmp_path_factory.mktemp("synth")
    generate_corpus(root, seed=11, count=200)
    return root
