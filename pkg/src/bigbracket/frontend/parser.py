"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is insignificant)::

    expr      := ["+"|"-"] term (("+"|"-") term)*
    term      := factor ("*" factor)*
    factor    := atom ("^" posint)?
    atom      := rational | generator | NAME | "(" expr ")"
    generator := ("x"|"xi"|"p"|"th") posint
    rational  := int ("/" posint)?

``^`` applies to even generators (x, p) only.  NAME refers to a binding
supplied by the caller (``let`` lines in a source file).
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Optional

from ..supercore import BigBracketError, Family, Generator, GeneratorSpace, StructuralError, SuperPoly

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])")
_GENERATOR = re.compile(r"(xi|th|x|p)(\d+)")
_FAMILIES = {"x": Family.BASE, "xi": Family.FIBRE, "th": Family.COFIBRE, "p": Family.MOMENTUM}


class ParseError(BigBracketError):
    def __init__(self, message: str, text: str, pos: int, line: int = 1):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = line
        self.column = pos + 1
        super().__init__(f"line {line}, column {self.column}: {message}")


class _Parser:
    def __init__(self, text: str, space: GeneratorSpace, bindings: Mapping[str, SuperPoly], line: int):
        self.text = text
        self.space = space
        self.bindings = bindings
        self.line = line
        self.tokens = []
        self.i = 0
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos, line)
            self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))

    def fail(self, message: str, pos: Optional[int] = None):
        if pos is None:
            pos = self.tokens[self.i][2]
        raise ParseError(message, self.text, pos, self.line)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def parse(self) -> SuperPoly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> SuperPoly:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        value = self.term().scale(sign)
        while True:
            if self.accept("+"):
                value = value + self.signed_term()
            elif self.accept("-"):
                value = value - self.signed_term()
            else:
                return value

    def signed_term(self) -> SuperPoly:
        if self.accept("-"):
            return -self.term()
        return self.term()

    def term(self) -> SuperPoly:
        value = self.factor()
        while self.accept("*"):
            value = value * self.factor()
        return value

    def factor(self) -> SuperPoly:
        kind, val, pos = self.peek()
        base, gen = self.atom()
        if self.accept("^"):
            kind2, val2, pos2 = self.take()
            if kind2 != "int" or int(val2) < 1:
                self.fail("exponent must be a positive integer", pos2)
            if gen is None or gen.is_odd:
                self.fail("'^' applies to even generators only", pos)
            return base ** int(val2)
        return base

    def atom(self):
        kind, val, pos = self.take()
        sp = self.space
        if kind == "int":
            num = int(val)
            if self.accept("/"):
                kind2, val2, pos2 = self.take()
                if kind2 != "int" or int(val2) == 0:
                    self.fail("denominator must be a positive integer", pos2)
                return SuperPoly.constant(sp, Fraction(num, int(val2))), None
            return SuperPoly.constant(sp, num), None
        if kind == "ident":
            m = _GENERATOR.fullmatch(val)
            if m:
                g = Generator(_FAMILIES[m.group(1)], int(m.group(2)))
                try:
                    sp.check(g)
                except StructuralError as exc:
                    raise ParseError(f"generator {val} out of range (n={sp.n}, r={sp.r})", self.text, pos, self.line) from exc
                return SuperPoly.generator(sp, g), g
            if val in self.bindings:
                return self.bindings[val], None
            self.fail(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            if not self.accept(")"):
                self.fail("expected ')'")
            return inner, None
        if kind == "end":
            self.fail("unexpected end of expression", pos)
        self.fail(f"unexpected token {val!r}", pos)


def parse_expression(text: str, space: GeneratorSpace, bindings: Optional[Mapping[str, SuperPoly]] = None,
                     line: int = 1) -> SuperPoly:
    """Parse ``text`` into a canonical SuperPoly over ``space``."""
    return _Parser(text, space, bindings or {}, line).parse()
