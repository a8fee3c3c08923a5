"""Tokenizer: turns an Ast back into its ordered token list.

Flow:
  1. scan the Ast's source into lexemes (comments and whitespace dropped,
     string literals kept whole)
  2. attach each lexeme to its directly relevant node (drn), the deepest node
     whose range contains it
  3. split every node's tokens into value tokens (inside the node's value
     text) and non-value tokens (keywords, punctuation)
  4. classify each token: one of the four name kinds when the drn is a name
     node, Structural(drn label) otherwise

The result depends only on the Ast, so every mapper's output is refined
against the same token list.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from astjudge.tree.labels import (
    CALL_LABELS,
    DECLARATION_NAME_PARENTS,
    NAME_LABELS,
    TYPE_LABELS,
)
from astjudge.tree.lexer import scan
from astjudge.tree.model import Ast

_CALL_PAREN = re.compile(r"\s*\(")

TYPE_POSITION_PARENTS = TYPE_LABELS | {"MarkerAnnotation"}


class TokenCategory(str, Enum):
    VARIABLE_NAME = "VariableName"
    TYPE_NAME = "TypeName"
    METHOD_NAME = "MethodName"
    DECLARATION_NAME = "DeclarationName"
    STRUCTURAL = "Structural"


@dataclass(frozen=True, slots=True)
class TokenKind:
    category: TokenCategory
    label: str = ""

    @property
    def is_name(self) -> bool:
        return self.category is not TokenCategory.STRUCTURAL

    def __str__(self) -> str:
        if self.category is TokenCategory.STRUCTURAL:
            return f"Structural({self.label})"
        return self.category.value


@dataclass(frozen=True, slots=True)
class Token:
    index: int
    text: str
    start: int
    end: int
    drn: int
    in_node_value: bool
    kind: TokenKind

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True, slots=True)
class DrnTokens:
    """Directly relevant tokens of one node, in file order."""

    value: tuple[int, ...] = ()
    other: tuple[int, ...] = ()

    @property
    def all(self) -> tuple[int, ...]:
        return tuple(sorted(self.value + self.other))


_EMPTY = DrnTokens()


@dataclass(frozen=True, eq=False)
class TokenList:
    ast: Ast
    tokens: tuple[Token, ...]
    by_drn: dict[int, DrnTokens] = field(repr=False)
    by_statement: dict[int | None, tuple[int, ...]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, index: int) -> Token:
        return self.tokens[index]

    def __iter__(self):
        return iter(self.tokens)

    def of_node(self, nid: int) -> DrnTokens:
        return self.by_drn.get(nid, _EMPTY)

    def statement_of(self, index: int) -> int | None:
        """Enclosing statement of a token (through its drn)."""
        return self.ast.enclosing_statement(self.tokens[index].drn)

    def in_statement(self, stmt: int) -> list[int]:
        """Token indices whose enclosing statement is exactly stmt."""
        return list(self.by_statement.get(stmt, ()))


# ═══════════════════════════════════════════════════════════════
#  DIRECTLY RELEVANT NODES
# ═══════════════════════════════════════════════════════════════

def directly_relevant_node(ast: Ast, token_range: tuple[int, int]) -> int:
    """Deepest node whose range contains token_range.

    Raises:
        ValueError: if not even the root contains the range.
    """
    start, end = token_range
    root = ast[ast.root]
    if not (root.start <= start and end <= root.end):
        raise ValueError(f"no node contains [{start}, {end})")
    cur = ast.root
    while True:
        for c in ast.children(cur):
            child = ast[c]
            if child.start <= start and end <= child.end:
                cur = c
                break
        else:
            return cur


def _value_span(ast: Ast, nid: int) -> tuple[int, int] | None:
    node = ast[nid]
    if not node.value:
        return None
    at = ast.source.find(node.value, node.start, node.end)
    if at < 0:
        return None
    return (at, at + len(node.value))


# ═══════════════════════════════════════════════════════════════
#  TOKEN KINDS
# ═══════════════════════════════════════════════════════════════

def _first_name_child(ast: Ast, nid: int) -> int | None:
    for c in ast.children(nid):
        if ast.label(c) in NAME_LABELS:
            return c
    return None


def _kind_of_drn(ast: Ast, drn: int) -> TokenKind:
    label = ast.label(drn)
    if label not in NAME_LABELS:
        return TokenKind(TokenCategory.STRUCTURAL, label)
    parent = ast.parent(drn)
    if parent is None:
        return TokenKind(TokenCategory.VARIABLE_NAME)
    parent_label = ast.label(parent)
    if (parent_label in DECLARATION_NAME_PARENTS
            and _first_name_child(ast, parent) == drn):
        return TokenKind(TokenCategory.DECLARATION_NAME)
    if (parent_label in CALL_LABELS
            and _CALL_PAREN.match(ast.source, ast[drn].end)):
        return TokenKind(TokenCategory.METHOD_NAME)
    if parent_label in TYPE_POSITION_PARENTS or parent_label.endswith("Type"):
        return TokenKind(TokenCategory.TYPE_NAME)
    return TokenKind(TokenCategory.VARIABLE_NAME)


def token_kind(ast: Ast, token: Token) -> TokenKind:
    """Classify a token from the syntactic position of its drn."""
    return _kind_of_drn(ast, token.drn)


# ═══════════════════════════════════════════════════════════════
#  TOKENIZE
# ═══════════════════════════════════════════════════════════════

def tokenize(ast: Ast) -> TokenList:
    tokens: list[Token] = []
    value_cells: dict[int, list[int]] = {}
    other_cells: dict[int, list[int]] = {}
    spans: dict[int, tuple[int, int] | None] = {}

    for lx in scan(ast.source, strict=False):
        try:
            drn = directly_relevant_node(ast, (lx.start, lx.end))
        except ValueError:
            drn = ast.root
        if drn not in spans:
            spans[drn] = _value_span(ast, drn)
        span = spans[drn]
        in_value = span is not None and span[0] <= lx.start and lx.end <= span[1]
        index = len(tokens)
        tokens.append(Token(index, lx.text, lx.start, lx.end, drn, in_value,
                            _kind_of_drn(ast, drn)))
        cells = value_cells if in_value else other_cells
        cells.setdefault(drn, []).append(index)

    by_drn = {
        nid: DrnTokens(tuple(value_cells.get(nid, ())),
                       tuple(other_cells.get(nid, ())))
        for nid in set(value_cells) | set(other_cells)
    }
    by_statement: dict[int | None, list[int]] = {}
    for t in tokens:
        by_statement.setdefault(ast.enclosing_statement(t.drn), []).append(t.index)
    return TokenList(ast, tuple(tokens), by_drn,
                     {k: tuple(v) for k, v in by_statement.items()})


def dump_tokens(tokens: TokenList) -> str:
    """One line per token: index, kind, text, range, drn."""
    lines = []
    for t in tokens:
        lines.append(f"{t.index}\t{t.kind}\t{t.text}\t[{t.start},{t.end})\t{t.drn}")
    return "\n".join(lines) + ("\n" if lines else "")
