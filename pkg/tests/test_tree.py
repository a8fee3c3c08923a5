"""AST core: parser output, Ast queries and the interchange format."""
import json

import pytest

from astjudge.errors import SchemaError, SourceSyntaxError
from astjudge.tree.interchange import dumps_ast, load_ast, save_ast
from astjudge.tree.labels import StatementKind
from astjudge.tree.parser import parse_source

from conftest import golden, nodes_of


class TestParser:

    def test_motivating_before_preorder(self):
        ast = parse_source(golden("motivating")[0])
        labels = [ast.label(n) for n in ast.preorder]
        assert labels[:7] == ["CompilationUnit", "TypeDeclaration", "Modifier",
                              "SimpleName", "FieldDeclaration", "Modifier",
                              "ParameterizedType"]
        assert len(ast) == 23
        assert ast.label(15) == "ClassInstanceCreation"
        assert ast.value(8) == "HashMap"
        assert ast.label(13) == "VariableDeclarationFragment"

    def test_ids_are_preorder(self):
        ast = parse_source(golden("motivating")[1])
        assert list(ast.preorder) == list(range(len(ast)))

    def test_operators_carry_no_value(self):
        ast = parse_source("class A { void f() { x = a + b; y++; } }")
        for label in ("InfixExpression", "Assignment", "PostfixExpression"):
            (nid,) = nodes_of(ast, label)
            assert ast.value(nid) == ""

    def test_statement_kinds(self):
        ast = parse_source(golden("leaf_rename")[0])
        kinds = {ast.label(n): ast.statement_kind(n) for n in ast.statements()}
        assert kinds["TypeDeclaration"] is StatementKind.DECLARATION
        assert kinds["MethodDeclaration"] is StatementKind.DECLARATION
        assert kinds["Block"] is StatementKind.BLOCK
        assert kinds["VariableDeclarationStatement"] is StatementKind.ORDINARY
        assert kinds["ExpressionStatement"] is StatementKind.ORDINARY

    def test_enclosing_statement(self):
        ast = parse_source(golden("motivating")[0])
        (fd,) = nodes_of(ast, "FieldDeclaration")
        for n in ast.subtree(fd):
            assert ast.enclosing_statement(n) == fd
        assert ast.enclosing_statement(ast.root) is None

    def test_ranges_nest(self):
        ast = parse_source(golden("motivating")[1])
        for n in ast.preorder:
            for c in ast.children(n):
                assert ast[n].start <= ast[c].start <= ast[c].end <= ast[n].end

    def test_local_declaration_vs_assignment(self):
        ast = parse_source("class A { void f() { int a = b + 1; total = total + a; log(a); } }")
        labels = [ast.label(n) for n in ast.children(nodes_of(ast, "Block")[0])]
        assert labels == ["VariableDeclarationStatement", "ExpressionStatement",
                          "ExpressionStatement"]

    def test_syntax_error_position(self):
        with pytest.raises(SourceSyntaxError) as info:
            parse_source("class A {\n  int x = ;\n}")
        assert info.value.line == 2
        assert isinstance(info.value, SyntaxError)

    def test_line_of(self):
        ast = parse_source(golden("motivating")[1])
        (es,) = nodes_of(ast, "ExpressionStatement")
        assert ast.line_of(ast[es].start) == 4


class TestInterchange:

    def test_save_then_load_keeps_structure(self):
        ast = parse_source(golden("motivating")[1])
        again = load_ast(dumps_ast(ast))
        assert again.same_structure(ast)
        assert [again[n].range for n in again.preorder] == [ast[n].range for n in ast.preorder]
        assert again.statements() == ast.statements()

    def _doc(self, **changes):
        doc = save_ast(parse_source("class A { int x; }"))
        doc.update(changes)
        return doc

    def test_multiple_roots(self):
        doc = self._doc()
        doc["nodes"][0]["children"] = []
        with pytest.raises(SchemaError, match="multiple roots"):
            load_ast(doc)

    def test_range_nesting(self):
        doc = self._doc()
        doc["nodes"][1]["end"] = len(doc["source"]) + 1
        with pytest.raises(SchemaError, match="range"):
            load_ast(doc)

    def test_value_not_in_range(self):
        doc = self._doc()
        names = [n for n in doc["nodes"] if n["label"] == "SimpleName"]
        names[0]["value"] = "Zebra"
        with pytest.raises(SchemaError, match="value not in range"):
            load_ast(doc)

    def test_format_version(self):
        doc = self._doc()
        doc["header"]["format_version"] = 99
        with pytest.raises(SchemaError, match="format version"):
            load_ast(doc)

    def test_malformed_json(self):
        with pytest.raises(SchemaError):
            load_ast(b"{not json")

    def test_header_statement_labels(self):
        doc = {
            "header": {"format_version": 1, "block_label": "Suite",
                       "statement_labels": ["ExprStmt", "FunctionDeclaration"]},
            "nodes": [
                {"id": 0, "label": "Module", "start": 0, "end": 5, "children": [1]},
                {"id": 1, "label": "ExprStmt", "start": 0, "end": 5, "children": [2]},
                {"id": 2, "label": "Name", "value": "hello", "start": 0, "end": 5},
            ],
            "source": "hello",
        }
        ast = load_ast(json.dumps(doc))
        assert ast.statement_kind(1) is StatementKind.ORDINARY
        assert ast.statements() == [1]
