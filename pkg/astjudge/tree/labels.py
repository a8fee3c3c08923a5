"""Label catalog: hardcoded node-label tables.

Statement classification, name-kind classification and the reduced-type units
of the name-aware mapper are all driven by plain label tables kept here, not by
code. Interchange documents from other parsers may replace the statement table
through their header (see StatementTable.from_header).

Flow:
  1. parser / interchange loader builds an Ast with a StatementTable
  2. StatementTable.kind(label) → StatementKind
  3. tokenizer consults NAME_LABELS / TYPE_LABELS / DECLARATION_NAME_PARENTS
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class StatementKind(str, Enum):
    ORDINARY = "OrdinaryStatement"
    DECLARATION = "Declaration"
    BLOCK = "Block"
    NON_STATEMENT = "NonStatement"


# ═══════════════════════════════════════════════════════════════
#  STATEMENT LABELS (closure of the JDT labels the grammar produces)
# ═══════════════════════════════════════════════════════════════

DEFAULT_BLOCK_LABEL = "Block"

DECLARATION_LABELS = (
    "TypeDeclaration",
    "FieldDeclaration",
    "MethodDeclaration",
)

ORDINARY_STATEMENT_LABELS = (
    "VariableDeclarationStatement",
    "ExpressionStatement",
    "ReturnStatement",
    "IfStatement",
    "ForStatement",
    "WhileStatement",
)

# ═══════════════════════════════════════════════════════════════
#  NAME / TYPE LABELS
# ═══════════════════════════════════════════════════════════════

NAME_LABELS = frozenset({"SimpleName", "QualifiedName"})

TYPE_LABELS = frozenset({
    "SimpleType",
    "ParameterizedType",
    "ArrayType",
    "PrimitiveType",
    "QualifiedType",
})

# parents whose name child is the declared name
DECLARATION_NAME_PARENTS = frozenset({
    "TypeDeclaration",
    "MethodDeclaration",
    "VariableDeclarationFragment",
    "SingleVariableDeclaration",
})

CALL_LABELS = frozenset({"MethodInvocation"})


@dataclass(frozen=True)
class StatementTable:
    """Label → StatementKind lookup; labels not listed are NonStatement."""

    declaration_labels: frozenset[str]
    ordinary_labels: frozenset[str]
    block_label: str = DEFAULT_BLOCK_LABEL

    def kind(self, label: str) -> StatementKind:
        if label == self.block_label:
            return StatementKind.BLOCK
        if label in self.declaration_labels:
            return StatementKind.DECLARATION
        if label in self.ordinary_labels:
            return StatementKind.ORDINARY
        return StatementKind.NON_STATEMENT

    @property
    def statement_labels(self) -> list[str]:
        """Non-block statement labels, sorted (the interchange header form)."""
        return sorted(self.declaration_labels | self.ordinary_labels)

    @classmethod
    def from_header(cls, statement_labels: list[str],
                    block_label: str) -> "StatementTable":
        """Build a table from an interchange header.

        Header labels known to the default table keep their kind; unknown
        labels ending in "Declaration" are declarations, the rest ordinary.
        """
        decls, ordinary = set(), set()
        for label in statement_labels:
            if label == block_label:
                continue
            if label in DECLARATION_LABELS or label.endswith("Declaration"):
                decls.add(label)
            else:
                ordinary.add(label)
        return cls(frozenset(decls), frozenset(ordinary), block_label)


DEFAULT_TABLE = StatementTable(
    declaration_labels=frozenset(DECLARATION_LABELS),
    ordinary_labels=frozenset(ORDINARY_STATEMENT_LABELS),
    block_label=DEFAULT_BLOCK_LABEL,
)
