"""Tokenizer for MiniOO sources."""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class continue default do
    double else enum extends final finally float for if implements import instanceof
    int interface long native new package private protected public return short
    static strictfp super switch synchronized this throw throws transient try void
    volatile while true false null
    """.split()
)

PRIMITIVES = frozenset("boolean byte char short int long float double void".split())

OPERATORS = sorted(
    """
    >>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^= << >>
    ( ) { } [ ] ; , . = < > ! ~ ? : + - * / & | ^ % @
    """.split(),
    key=len,
    reverse=True,
)

_NUMBER = re.compile(
    r"0[xX][0-9a-fA-F_]+[lL]?"
    r"|0[bB][01_]+[lL]?"
    r"|(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?"
)
_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")


class LexError(Exception):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, number, string, char, op, eof
    text: str
    line: int
    column: int

    def is_op(self, *ops: str) -> bool:
        return self.kind == "op" and self.text in ops

    def is_kw(self, *kws: str) -> bool:
        return self.kind == "keyword" and self.text in kws


@dataclass
class LexResult:
    tokens: list[Token]
    comment_lines: set[int]
    total_lines: int


def tokenize(text: str) -> LexResult:
    tokens: list[Token] = []
    comments: set[int] = set()
    i = 0
    n = len(text)
    line = 1
    col = 1

    def advance(k: int) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\f\n":
            advance(1)
            continue
        if text.startswith("//", i):
            comments.add(line)
            end = text.find("\n", i)
            advance((n if end < 0 else end) - i)
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise LexError(line, col, "unterminated block comment")
            start_line = line
            advance(end + 2 - i)
            comments.update(range(start_line, line + 1))
            continue
        start_line, start_col = line, col
        if ch == '"' or ch == "'":
            j = i + 1
            while j < n and text[j] != ch:
                if text[j] == "\\":
                    j += 1
                elif text[j] == "\n":
                    raise LexError(start_line, start_col, "unterminated literal")
                j += 1
            if j >= n:
                raise LexError(start_line, start_col, "unterminated literal")
            tokens.append(
                Token("string" if ch == '"' else "char", text[i : j + 1], start_line, start_col)
            )
            advance(j + 1 - i)
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            advance(len(word))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER.match(text, i)
            tokens.append(Token("number", m.group(), start_line, start_col))
            advance(len(m.group()))
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, start_line, start_col))
                advance(len(op))
                break
        else:
            raise LexError(line, col, f"unexpected character {ch!r}")
    tokens.append(Token("eof", "", line, col))
    return LexResult(tokens, comments, len(text.splitlines()))
