"""AST model: labeled ordered rooted trees over a source text.

Ast values are immutable. Everything the mappers and the judge need repeatedly
(traversal orders, heights, subtree sizes, enclosing statements) is computed
once at construction.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterator

from astjudge.tree.labels import DEFAULT_TABLE, StatementKind, StatementTable


@dataclass(frozen=True, slots=True)
class AstNode:
    id: int
    label: str
    value: str
    start: int
    end: int
    parent: int | None
    children: tuple[int, ...]

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True, eq=False)
class Ast:
    nodes: tuple[AstNode, ...]
    root: int
    source: str
    table: StatementTable = DEFAULT_TABLE

    preorder: tuple[int, ...] = field(init=False, repr=False)
    postorder: tuple[int, ...] = field(init=False, repr=False)
    pre_index: tuple[int, ...] = field(init=False, repr=False)
    size: tuple[int, ...] = field(init=False, repr=False)
    height: tuple[int, ...] = field(init=False, repr=False)
    kinds: tuple[StatementKind, ...] = field(init=False, repr=False)
    enclosing: tuple[int | None, ...] = field(init=False, repr=False)
    _line_starts: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.nodes)
        preorder: list[int] = []
        stack = [self.root]
        while stack:
            cur = stack.pop()
            preorder.append(cur)
            stack.extend(reversed(self.nodes[cur].children))

        pre_index = [0] * n
        for i, nid in enumerate(preorder):
            pre_index[nid] = i

        size = [1] * n
        height = [1] * n
        postorder: list[int] = []
        # reverse preorder visits children before parents
        for nid in reversed(preorder):
            node = self.nodes[nid]
            for c in node.children:
                size[nid] += size[c]
                height[nid] = max(height[nid], height[c] + 1)
        _postorder(self.nodes, self.root, postorder)

        kinds = tuple(self.table.kind(node.label) for node in self.nodes)
        enclosing: list[int | None] = [None] * n
        for nid in preorder:
            if kinds[nid] is not StatementKind.NON_STATEMENT:
                enclosing[nid] = nid
            else:
                parent = self.nodes[nid].parent
                enclosing[nid] = enclosing[parent] if parent is not None else None

        line_starts = [0]
        for i, ch in enumerate(self.source):
            if ch == "\n":
                line_starts.append(i + 1)

        object.__setattr__(self, "preorder", tuple(preorder))
        object.__setattr__(self, "postorder", tuple(postorder))
        object.__setattr__(self, "pre_index", tuple(pre_index))
        object.__setattr__(self, "size", tuple(size))
        object.__setattr__(self, "height", tuple(height))
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "enclosing", tuple(enclosing))
        object.__setattr__(self, "_line_starts", tuple(line_starts))

    # ── node access ──

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, nid: int) -> AstNode:
        return self.nodes[nid]

    def label(self, nid: int) -> str:
        return self.nodes[nid].label

    def value(self, nid: int) -> str:
        return self.nodes[nid].value

    def parent(self, nid: int) -> int | None:
        return self.nodes[nid].parent

    def children(self, nid: int) -> tuple[int, ...]:
        return self.nodes[nid].children

    def text(self, nid: int) -> str:
        node = self.nodes[nid]
        return self.source[node.start:node.end]

    # ── traversal ──

    def subtree(self, nid: int) -> tuple[int, ...]:
        """Preorder ids of the subtree rooted at nid, nid included."""
        i = self.pre_index[nid]
        return self.preorder[i:i + self.size[nid]]

    def descendants(self, nid: int) -> tuple[int, ...]:
        i = self.pre_index[nid]
        return self.preorder[i + 1:i + self.size[nid]]

    def is_descendant(self, nid: int, ancestor: int) -> bool:
        """Strict descendant test in O(1) via preorder intervals."""
        a = self.pre_index[ancestor]
        return a < self.pre_index[nid] < a + self.size[ancestor]

    def ancestors(self, nid: int) -> Iterator[int]:
        parent = self.nodes[nid].parent
        while parent is not None:
            yield parent
            parent = self.nodes[parent].parent

    def leaves(self, nid: int) -> list[int]:
        return [d for d in self.subtree(nid) if not self.nodes[d].children]

    # ── statements ──

    def statement_kind(self, nid: int) -> StatementKind:
        return self.kinds[nid]

    def is_statement(self, nid: int) -> bool:
        return self.kinds[nid] is not StatementKind.NON_STATEMENT

    def enclosing_statement(self, nid: int) -> int | None:
        return self.enclosing[nid]

    def statements(self) -> list[int]:
        """Statement node ids ordered by range start (ties by id)."""
        ids = [nid for nid in self.preorder if self.is_statement(nid)]
        return sorted(ids, key=lambda nid: (self.nodes[nid].start, nid))

    # ── positions ──

    def line_of(self, offset: int) -> int:
        """1-based line number of a character offset."""
        return bisect.bisect_right(self._line_starts, offset)

    def column_of(self, offset: int) -> int:
        line = self.line_of(offset)
        return offset - self._line_starts[line - 1] + 1

    def same_structure(self, other: "Ast") -> bool:
        """Label/value/child-shape equality, ignoring ranges and ids."""
        if len(self) != len(other):
            return False
        for a, b in zip(self.preorder, other.preorder):
            na, nb = self.nodes[a], other.nodes[b]
            if (na.label, na.value, len(na.children)) != \
                    (nb.label, nb.value, len(nb.children)):
                return False
        return True


def _postorder(nodes: tuple[AstNode, ...], root: int, out: list[int]):
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        nid, expanded = stack.pop()
        if expanded:
            out.append(nid)
            continue
        stack.append((nid, True))
        for c in reversed(nodes[nid].children):
            stack.append((c, False))


def statement_kind(ast: Ast, node: int) -> StatementKind:
    """Classify a node from its label through the Ast's statement table."""
    return ast.statement_kind(node)


def enclosing_statement(ast: Ast, node: int) -> int | None:
    """Nearest ancestor-or-self statement; None above the outermost one."""
    return ast.enclosing_statement(node)
