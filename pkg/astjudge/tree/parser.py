"""Recursive-descent parser for a minimal Java-like language.

Supported:
  - class declarations (nested classes, modifiers, marker annotations)
  - field declarations with initializers, method and constructor declarations
  - blocks, local variable declarations, expression statements, return,
    if/else, for, while
  - assignments, calls, field access, `new`, casts, infix/prefix/postfix
    operators, conditional expressions, literals
  - simple, generic and array type references
  - line and block comments (dropped)

Node labels follow the JDT names (TypeDeclaration, FieldDeclaration,
SimpleName, ParameterizedType, ...). Node ids are dense and assigned in
preorder, so a file always parses to the same ids.
Type references carry their source text as value (`HashMap<Integer,Integer>`);
the other compound nodes carry none.
"""
from __future__ import annotations

from astjudge.errors import SourceSyntaxError
from astjudge.tree.lexer import MODIFIERS, PRIMITIVES, Lexeme, position, scan
from astjudge.tree.model import Ast, AstNode

ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="})

BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)

PREFIX_OPS = frozenset({"!", "-", "+", "++", "--", "~"})

_LITERALS = {
    "number": "NumberLiteral",
    "string": "StringLiteral",
    "char": "CharacterLiteral",
}


class _Node:
    __slots__ = ("label", "value", "start", "end", "children")

    def __init__(self, label: str, start: int, end: int, value: str = "",
                 children: list["_Node"] | None = None):
        self.label = label
        self.value = value
        self.start = start
        self.end = end
        self.children = children or []


class _Backtrack(Exception):
    pass


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.lexemes: list[Lexeme] = scan(source)
        self.pos = 0

    # ── lexeme helpers ──

    def peek(self, ahead: int = 0) -> Lexeme | None:
        i = self.pos + ahead
        return self.lexemes[i] if i < len(self.lexemes) else None

    def at(self, text: str, ahead: int = 0) -> bool:
        lx = self.peek(ahead)
        return lx is not None and lx.text == text and lx.kind in ("op", "keyword")

    def at_ident(self, ahead: int = 0) -> bool:
        lx = self.peek(ahead)
        return lx is not None and lx.kind == "ident"

    def advance(self) -> Lexeme:
        lx = self.peek()
        if lx is None:
            self.error("unexpected end of input")
        self.pos += 1
        return lx

    def expect(self, text: str) -> Lexeme:
        if not self.at(text):
            lx = self.peek()
            found = lx.text if lx else "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_ident(self) -> Lexeme:
        if not self.at_ident():
            lx = self.peek()
            found = lx.text if lx else "end of input"
            self.error(f"expected identifier, found {found!r}")
        return self.advance()

    def error(self, message: str):
        lx = self.peek()
        offset = lx.start if lx else len(self.source)
        raise SourceSyntaxError(message, *position(self.source, offset))

    @staticmethod
    def name(lx: Lexeme) -> _Node:
        return _Node("SimpleName", lx.start, lx.end, lx.text)

    # ═══════════════════════════════════════════════════════════════
    #  DECLARATIONS
    # ═══════════════════════════════════════════════════════════════

    def compilation_unit(self) -> _Node:
        unit = _Node("CompilationUnit", 0, len(self.source))
        while self.peek() is not None:
            modifiers = self.modifiers()
            unit.children.append(self.type_declaration(modifiers))
        return unit

    def modifiers(self) -> list[_Node]:
        out = []
        while True:
            lx = self.peek()
            if lx is None:
                return out
            if lx.kind == "keyword" and lx.text in MODIFIERS:
                self.advance()
                out.append(_Node("Modifier", lx.start, lx.end, lx.text))
            elif lx.text == "@" and lx.kind == "op":
                self.advance()
                ident = self.expect_ident()
                out.append(_Node("MarkerAnnotation", lx.start, ident.end,
                                 children=[self.name(ident)]))
            else:
                return out

    def type_declaration(self, modifiers: list[_Node]) -> _Node:
        kw = self.expect("class")
        ident = self.expect_ident()
        start = modifiers[0].start if modifiers else kw.start
        decl = _Node("TypeDeclaration", start, 0,
                     children=[*modifiers, self.name(ident)])
        self.expect("{")
        while not self.at("}"):
            if self.peek() is None:
                self.error("unterminated class body")
            decl.children.append(self.member(ident.text))
        decl.end = self.expect("}").end
        return decl

    def member(self, class_name: str) -> _Node:
        modifiers = self.modifiers()
        first = self.peek()
        if first is None:
            self.error("unexpected end of input")
        start = modifiers[0].start if modifiers else first.start
        if self.at("class"):
            return self.type_declaration(modifiers)
        if self.at("void"):
            lx = self.advance()
            ret = _Node("PrimitiveType", lx.start, lx.end, "void")
            return self.method(modifiers, ret, start)
        if self.at_ident() and self.peek().text == class_name and self.at("(", 1):
            return self.method(modifiers, None, start)
        type_node = self.type_ref()
        if self.at_ident() and self.at("(", 1):
            return self.method(modifiers, type_node, start)
        return self.field(modifiers, type_node, start)

    def method(self, modifiers: list[_Node], ret: _Node | None,
               start: int) -> _Node:
        ident = self.expect_ident()
        children = [*modifiers]
        if ret is not None:
            children.append(ret)
        children.append(self.name(ident))
        self.expect("(")
        if not self.at(")"):
            children.append(self.parameter())
            while self.at(","):
                self.advance()
                children.append(self.parameter())
        end = self.expect(")").end
        if self.at(";"):
            end = self.advance().end
        else:
            body = self.block()
            children.append(body)
            end = body.end
        return _Node("MethodDeclaration", start, end, children=children)

    def parameter(self) -> _Node:
        modifiers = self.modifiers()
        type_node = self.type_ref()
        ident = self.expect_ident()
        start = modifiers[0].start if modifiers else type_node.start
        return _Node("SingleVariableDeclaration", start, ident.end,
                     children=[*modifiers, type_node, self.name(ident)])

    def field(self, modifiers: list[_Node], type_node: _Node,
              start: int) -> _Node:
        fragments = self.fragments()
        end = self.expect(";").end
        return _Node("FieldDeclaration", start, end,
                     children=[*modifiers, type_node, *fragments])

    def fragments(self) -> list[_Node]:
        out = [self.fragment()]
        while self.at(","):
            self.advance()
            out.append(self.fragment())
        return out

    def fragment(self) -> _Node:
        ident = self.expect_ident()
        frag = _Node("VariableDeclarationFragment", ident.start, ident.end,
                     children=[self.name(ident)])
        if self.at("="):
            self.advance()
            init = self.expression()
            frag.children.append(init)
            frag.end = init.end
        return frag

    # ═══════════════════════════════════════════════════════════════
    #  TYPES
    # ═══════════════════════════════════════════════════════════════

    def type_ref(self) -> _Node:
        lx = self.peek()
        if lx is not None and lx.kind == "keyword" and lx.text in PRIMITIVES:
            self.advance()
            node = _Node("PrimitiveType", lx.start, lx.end, lx.text)
        else:
            ident = self.expect_ident()
            node = _Node("SimpleType", ident.start, ident.end, ident.text,
                         children=[self.name(ident)])
            if self.at("<"):
                self.advance()
                args = [self.type_ref()]
                while self.at(","):
                    self.advance()
                    args.append(self.type_ref())
                close = self.expect(">")
                node = _Node("ParameterizedType", node.start, close.end,
                             self.source[node.start:close.end],
                             children=[node, *args])
        while self.at("[") and self.at("]", 1):
            self.advance()
            close = self.advance()
            node = _Node("ArrayType", node.start, close.end,
                         self.source[node.start:close.end], children=[node])
        return node

    # ═══════════════════════════════════════════════════════════════
    #  STATEMENTS
    # ═══════════════════════════════════════════════════════════════

    def block(self) -> _Node:
        open_ = self.expect("{")
        node = _Node("Block", open_.start, 0)
        while not self.at("}"):
            if self.peek() is None:
                self.error("unterminated block")
            node.children.append(self.statement())
        node.end = self.expect("}").end
        return node

    def statement(self) -> _Node:
        lx = self.peek()
        if lx is None:
            self.error("expected statement")
        if self.at("{"):
            return self.block()
        if self.at("if"):
            self.advance()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            then = self.statement()
            node = _Node("IfStatement", lx.start, then.end,
                         children=[cond, then])
            if self.at("else"):
                self.advance()
                other = self.statement()
                node.children.append(other)
                node.end = other.end
            return node
        if self.at("while"):
            self.advance()
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            body = self.statement()
            return _Node("WhileStatement", lx.start, body.end,
                         children=[cond, body])
        if self.at("for"):
            return self.for_statement()
        if self.at("return"):
            self.advance()
            node = _Node("ReturnStatement", lx.start, 0)
            if not self.at(";"):
                node.children.append(self.expression())
            node.end = self.expect(";").end
            return node
        decl = self.try_local_declaration("VariableDeclarationStatement")
        if decl is not None:
            decl.end = self.expect(";").end
            return decl
        expr = self.expression()
        end = self.expect(";").end
        return _Node("ExpressionStatement", expr.start, end, children=[expr])

    def for_statement(self) -> _Node:
        kw = self.expect("for")
        self.expect("(")
        children = []
        if not self.at(";"):
            init = self.try_local_declaration("VariableDeclarationExpression")
            if init is not None:
                children.append(init)
            else:
                children.extend(self.expression_list())
        self.expect(";")
        if not self.at(";"):
            children.append(self.expression())
        self.expect(";")
        if not self.at(")"):
            children.extend(self.expression_list())
        self.expect(")")
        body = self.statement()
        children.append(body)
        return _Node("ForStatement", kw.start, body.end, children=children)

    def expression_list(self) -> list[_Node]:
        out = [self.expression()]
        while self.at(","):
            self.advance()
            out.append(self.expression())
        return out

    def try_local_declaration(self, label: str) -> _Node | None:
        """Parse `[final] Type name [= init], ...` or restore and return None."""
        saved = self.pos
        try:
            modifiers = self.modifiers()
            type_node = self.type_ref()
            if not (self.at_ident() and (self.at("=", 1) or self.at(";", 1)
                                         or self.at(",", 1))):
                raise _Backtrack
        except (_Backtrack, SourceSyntaxError):
            self.pos = saved
            return None
        fragments = self.fragments()
        start = modifiers[0].start if modifiers else type_node.start
        return _Node(label, start, fragments[-1].end,
                     children=[*modifiers, type_node, *fragments])

    # ═══════════════════════════════════════════════════════════════
    #  EXPRESSIONS
    # ═══════════════════════════════════════════════════════════════

    def expression(self) -> _Node:
        lhs = self.conditional()
        lx = self.peek()
        if lx is not None and lx.kind == "op" and lx.text in ASSIGN_OPS:
            self.advance()
            rhs = self.expression()
            return _Node("Assignment", lhs.start, rhs.end, children=[lhs, rhs])
        return lhs

    def conditional(self) -> _Node:
        cond = self.binary(0)
        if self.at("?"):
            self.advance()
            then = self.expression()
            self.expect(":")
            other = self.conditional()
            return _Node("ConditionalExpression", cond.start, other.end,
                         children=[cond, then, other])
        return cond

    def binary(self, level: int) -> _Node:
        if level == len(BINARY_LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = BINARY_LEVELS[level]
        while True:
            lx = self.peek()
            if lx is None or lx.kind != "op" or lx.text not in ops:
                return left
            self.advance()
            right = self.binary(level + 1)
            left = _Node("InfixExpression", left.start, right.end,
                         children=[left, right])

    def unary(self) -> _Node:
        lx = self.peek()
        if lx is not None and lx.kind == "op" and lx.text in PREFIX_OPS:
            self.advance()
            operand = self.unary()
            return _Node("PrefixExpression", lx.start, operand.end,
                         children=[operand])
        cast = self.try_cast()
        if cast is not None:
            return cast
        node = self.primary()
        while self.at("++") or self.at("--"):
            op = self.advance()
            node = _Node("PostfixExpression", node.start, op.end,
                         children=[node])
        return node

    def try_cast(self) -> _Node | None:
        if not self.at("("):
            return None
        saved = self.pos
        open_ = self.advance()
        try:
            type_node = self.type_ref()
            self.expect(")")
            nxt = self.peek()
            if nxt is None or not (
                    nxt.kind in ("ident", "number", "string", "char")
                    or nxt.text in ("this", "new", "(", "null", "true", "false")):
                raise _Backtrack
        except (_Backtrack, SourceSyntaxError):
            self.pos = saved
            return None
        operand = self.unary()
        return _Node("CastExpression", open_.start, operand.end,
                     children=[type_node, operand])

    def arguments(self) -> tuple[list[_Node], int]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args = self.expression_list()
        return args, self.expect(")").end

    def primary(self) -> _Node:
        node = self.atom()
        while True:
            if self.at("."):
                self.advance()
                ident = self.expect_ident()
                if self.at("("):
                    args, end = self.arguments()
                    node = _Node("MethodInvocation", node.start, end,
                                 children=[node, self.name(ident), *args])
                else:
                    node = _Node("FieldAccess", node.start, ident.end,
                                 children=[node, self.name(ident)])
            elif self.at("["):
                self.advance()
                index = self.expression()
                close = self.expect("]")
                node = _Node("ArrayAccess", node.start, close.end,
                             children=[node, index])
            else:
                return node

    def atom(self) -> _Node:
        lx = self.peek()
        if lx is None:
            self.error("expected expression")
        if lx.kind in _LITERALS:
            self.advance()
            return _Node(_LITERALS[lx.kind], lx.start, lx.end, lx.text)
        if lx.kind == "keyword":
            if lx.text in ("true", "false"):
                self.advance()
                return _Node("BooleanLiteral", lx.start, lx.end, lx.text)
            if lx.text == "null":
                self.advance()
                return _Node("NullLiteral", lx.start, lx.end, lx.text)
            if lx.text == "this":
                self.advance()
                return _Node("ThisExpression", lx.start, lx.end, lx.text)
            if lx.text == "new":
                self.advance()
                type_node = self.type_ref()
                args, end = self.arguments()
                return _Node("ClassInstanceCreation", lx.start, end,
                             children=[type_node, *args])
        if lx.kind == "ident":
            self.advance()
            if self.at("("):
                args, end = self.arguments()
                return _Node("MethodInvocation", lx.start, end,
                             children=[self.name(lx), *args])
            return self.name(lx)
        if self.at("("):
            self.advance()
            inner = self.expression()
            close = self.expect(")")
            return _Node("ParenthesizedExpression", lx.start, close.end,
                         children=[inner])
        self.error(f"unexpected {lx.text!r}")


def _freeze(root: _Node, source: str) -> Ast:
    nodes: list[AstNode] = []
    # (builder node, parent id), popped in preorder
    pending: list[tuple[_Node, int | None]] = [(root, None)]
    child_ids: dict[int, list[int]] = {}
    order: list[tuple[_Node, int | None]] = []
    while pending:
        node, parent = pending.pop()
        nid = len(order)
        order.append((node, parent))
        child_ids[nid] = []
        if parent is not None:
            child_ids[parent].append(nid)
        for child in reversed(node.children):
            pending.append((child, nid))
    for nid, (node, parent) in enumerate(order):
        nodes.append(AstNode(nid, node.label, node.value, node.start, node.end,
                             parent, tuple(child_ids[nid])))
    return Ast(tuple(nodes), 0, source)


def parse_source(text: str) -> Ast:
    """Parse source text into an Ast with preorder node ids.

    Raises:
        SourceSyntaxError: with line/column of the first unparseable lexeme.
    """
    parser = _Parser(text)
    return _freeze(parser.compilation_unit(), text)
