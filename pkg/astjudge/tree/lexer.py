"""Lexeme scanner shared by the parser and the tokenizer.

Comments and whitespace are skipped; a string or character literal is one
lexeme. `>>` is never fused so nested generic arguments close one `>` at a
time.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from astjudge.errors import SourceSyntaxError

KEYWORDS = frozenset({
    "class", "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "void", "boolean", "byte", "char", "short", "int", "long",
    "float", "double", "if", "else", "for", "while", "return", "new", "this",
    "null", "true", "false",
})

MODIFIERS = frozenset({
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized",
})

PRIMITIVES = frozenset({
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
})

_OPERATORS = [
    "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "->", "::",
    "{", "}", "(", ")", "[", "]", ";", ",", ".", "<", ">", "=", "+", "-",
    "*", "/", "%", "!", "&", "|", "^", "~", "?", ":", "@",
]

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<line_comment>//[^\n]*)"
    r"|(?P<block_comment>/\*.*?\*/)"
    r'|(?P<string>"(?:\\.|[^"\\\n])*")'
    r"|(?P<char>'(?:\\.|[^'\\\n])*')"
    r"|(?P<number>\d+(?:\.\d+)?[lLfFdD]?)"
    r"|(?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)"
    r"|(?P<op>" + "|".join(re.escape(op) for op in _OPERATORS) + r")",
    re.DOTALL,
)


@dataclass(frozen=True, slots=True)
class Lexeme:
    kind: str       # ident | keyword | number | string | char | op
    text: str
    start: int
    end: int


def _position(source: str, offset: int) -> tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


def scan(source: str, strict: bool = True) -> list[Lexeme]:
    """Split source into lexemes, dropping whitespace and comments.

    With strict=False an unknown character becomes a one-character "op"
    lexeme and an unterminated comment runs to the end of the text.
    """
    out: list[Lexeme] = []
    pos = 0
    n = len(source)
    while pos < n:
        if source.startswith("/*", pos) and source.find("*/", pos + 2) < 0:
            if not strict:
                break
            raise SourceSyntaxError("unterminated comment",
                                    *_position(source, pos))
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            if strict:
                raise SourceSyntaxError(
                    f"unexpected character {source[pos]!r}",
                    *_position(source, pos))
            out.append(Lexeme("op", source[pos], pos, pos + 1))
            pos += 1
            continue
        kind = m.lastgroup
        if kind in ("ws", "line_comment", "block_comment"):
            pos = m.end()
            continue
        text = m.group()
        if kind == "ident" and text in KEYWORDS:
            kind = "keyword"
        out.append(Lexeme(kind, text, m.start(), m.end()))
        pos = m.end()
    return out


def position(source: str, offset: int) -> tuple[int, int]:
    """1-based (line, column) of an offset."""
    return _position(source, offset)
