"""Recursive descent parser for polynomial expressions.

Grammar::

    expr     := ['+' | '-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' natural)?
    base     := rational | variable | '(' expr ')'
    rational := integer ('/' positive-integer)?

Implicit multiplication is rejected and ``/`` may only appear inside a
rational literal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .poly import Patch, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


class ParseError(InputError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


@dataclass
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def _tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(Token("name", m.group(2), start))
        else:
            out.append(Token("op", m.group(3), start))
        pos = m.end()
    out.append(Token("end", "", len(src.rstrip()) if src.strip() else len(src)))
    return out


class _Parser:
    def __init__(self, src: str, names: Sequence[str]):
        self.src = src
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)
        self.toks = _tokenize(src)
        self.i = 0

    def where(self, tok: Token) -> tuple[int, int]:
        before = self.src[:tok.pos]
        line = before.count("\n") + 1
        col = tok.pos - (before.rfind("\n") + 1) + 1
        return line, col

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, *self.where(tok))

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def parse(self) -> Poly:
        if self.peek().kind == "end":
            self.error("empty expression")
        p = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("int", "name") or self.at_op("("):
                self.error(f"unexpected {tok.text!r} (implicit multiplication is not allowed)")
            if self.at_op("/"):
                self.error("division by non-constant; only rational literals may use '/'")
            self.error(f"unexpected {tok.text!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.at_op("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.at_op("+", "-"):
            op = self.take().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.at_op("*"):
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Poly:
        b = self.base()
        if self.at_op("^"):
            self.take()
            tok = self.peek()
            if tok.kind != "int":
                self.error("exponent must be a natural number")
            self.take()
            b = b ** int(tok.text)
        return b

    def base(self) -> Poly:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            value = Fraction(int(tok.text))
            if self.at_op("/"):
                self.take()
                den = self.peek()
                if den.kind != "int":
                    self.error("division by non-constant; only rational literals may use '/'")
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                self.take()
                value /= int(den.text)
            return Poly.const(value, self.nvars)
        if tok.kind == "name":
            if tok.text not in self.names:
                self.error(f"unknown variable {tok.text!r}")
            self.take()
            return Poly.var(self.names[tok.text], self.nvars)
        if self.at_op("("):
            self.take()
            inner = self.expr()
            if not self.at_op(")"):
                self.error("expected ')'")
            self.take()
            return inner
        if tok.kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected {tok.text!r}")


def parse_poly(src: str, patch: Patch | Sequence[str]) -> Poly:
    """Parse ``src`` over the variables of ``patch`` (or an explicit name list)."""
    if not isinstance(src, str):
        raise InputError(f"expected an expression string, got {type(src).__name__}")
    names = patch.var_names if isinstance(patch, Patch) else tuple(patch)
    return _Parser(src, names).parse()
