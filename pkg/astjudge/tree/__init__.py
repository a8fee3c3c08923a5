"""AST core: tree model, statement labels, parser and interchange format."""
from astjudge.tree.interchange import load_ast, save_ast
from astjudge.tree.labels import StatementKind, StatementTable
from astjudge.tree.model import Ast, AstNode, enclosing_statement, statement_kind
from astjudge.tree.parser import parse_source

__all__ = [
    "Ast", "AstNode", "StatementKind", "StatementTable",
    "enclosing_statement", "load_ast", "parse_source", "save_ast",
    "statement_kind",
]
