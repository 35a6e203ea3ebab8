"""Reader for ``.bb`` structure files.

Line-oriented; ``#`` starts a comment::

    space 3 3
    let pi = th1*th2
    theta mu=derham phi=x1*xi1*xi2*xi3
    expect classification=quasi_lie_bialgebroid_A verdict=true

Omitted theta components are zero.  The names ``pi`` and ``omega`` are
reserved: binding one of them declares the twist datum, and the file then
describes the twisted structure Θ_pi (or Θ_omega) of the theta block.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

from ..structures import Classification, StructureTheta, derham
from ..supercore import BigBracketError, GeneratorSpace, SuperPoly
from ..twisting import TwistInput, twist
from .parser import _GENERATOR, ParseError, parse_expression

__all__ = ["SourceFile", "parse_source", "load_source"]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COMPONENT = re.compile(r"\b(mu|gamma|phi|psi)\s*=")
_RESERVED = {"derham", "theta", "space", "let", "expect"}
TWIST_NAMES = ("pi", "omega")


@dataclass
class SourceFile:
    space: GeneratorSpace
    theta: StructureTheta
    bindings: Dict[str, SuperPoly] = field(default_factory=dict)
    expect_classification: Optional[Classification] = None
    expect_verdict: Optional[bool] = None
    path: Optional[str] = None

    @property
    def twist_input(self) -> Optional[TwistInput]:
        if "pi" in self.bindings:
            return TwistInput.bivector(self.bindings["pi"])
        if "omega" in self.bindings:
            return TwistInput.form(self.bindings["omega"])
        return None

    @property
    def effective_theta(self) -> StructureTheta:
        w = self.twist_input
        return self.theta if w is None else twist(self.theta, w)


def _fail(message: str, text: str, line: int, pos: int = 0):
    raise ParseError(message, text, pos, line)


def _parse_theta(body: str, offset: int, raw: str, lineno: int, space, bindings) -> StructureTheta:
    matches = list(_COMPONENT.finditer(body))
    if not matches:
        _fail("theta needs at least one of mu=, gamma=, phi=, psi=", raw, lineno, offset)
    if body[:matches[0].start()].strip():
        _fail("unexpected text before the first component", raw, lineno, offset)
    parts = {}
    for k, m in enumerate(matches):
        name = m.group(1)
        end = matches[k + 1].start() if k + 1 < len(matches) else len(body)
        text = body[m.end():end]
        if name in parts:
            _fail(f"component {name} given twice", raw, lineno, offset + m.start())
        start = offset + m.end() + (len(text) - len(text.lstrip()))
        text = text.strip()
        if text == "derham":
            if name != "mu":
                _fail("'derham' is only valid for mu", raw, lineno, start)
            if space.n != space.r:
                _fail("'derham' requires n == r", raw, lineno, start)
            parts[name] = derham(space)
            continue
        try:
            parts[name] = parse_expression(text, space, bindings, line=lineno)
        except ParseError as exc:
            raise ParseError(exc.message, raw, start + exc.pos, lineno) from None
    try:
        return StructureTheta.build(space, **parts)
    except BigBracketError as exc:
        raise ParseError(str(exc), raw, offset, lineno) from None


def parse_source(text: str, path: Optional[str] = None) -> SourceFile:
    space = None
    bindings: Dict[str, SuperPoly] = {}
    theta = None
    expect_cls = None
    expect_ver = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        word, _, rest = stripped.partition(" ")
        offset = indent + len(word) + 1
        if word == "space":
            if space is not None:
                _fail("space declared twice", raw, lineno, indent)
            fields = rest.split()
            if len(fields) != 2 or not all(f.isdigit() for f in fields):
                _fail("expected 'space n r' with nonnegative integers", raw, lineno, indent)
            space = GeneratorSpace(int(fields[0]), int(fields[1]))
            continue
        if space is None:
            _fail("the first directive must be 'space n r'", raw, lineno, indent)
        if word == "let":
            name, eq, expr = rest.partition("=")
            name = name.strip()
            if not eq or not _NAME.fullmatch(name):
                _fail("expected 'let NAME = expr'", raw, lineno, offset)
            if _GENERATOR.fullmatch(name) or name in _RESERVED:
                _fail(f"{name!r} is reserved", raw, lineno, offset)
            if name in bindings:
                _fail(f"{name!r} bound twice", raw, lineno, offset)
            start = raw.index("=", offset) + 1
            try:
                bindings[name] = parse_expression(expr, space, bindings, line=lineno)
            except ParseError as exc:
                raise ParseError(exc.message, raw, start + exc.pos, lineno) from None
            if name in TWIST_NAMES and sum(n in bindings for n in TWIST_NAMES) > 1:
                _fail("bind at most one of 'pi' and 'omega'", raw, lineno, offset)
        elif word == "theta":
            if theta is not None:
                _fail("theta declared twice", raw, lineno, indent)
            theta = _parse_theta(rest, offset, raw, lineno, space, bindings)
        elif word == "expect":
            for item in rest.split():
                key, _, value = item.partition("=")
                if key == "classification":
                    try:
                        expect_cls = Classification(value)
                    except ValueError:
                        _fail(f"unknown classification {value!r}", raw, lineno, raw.index(item))
                elif key == "verdict" and value in ("true", "false"):
                    expect_ver = value == "true"
                else:
                    _fail(f"bad expectation {item!r}", raw, lineno, raw.index(item))
        else:
            _fail(f"unknown directive {word!r}", raw, lineno, indent)
    if space is None:
        raise ParseError("missing 'space n r' declaration", "", 0, 1)
    if theta is None:
        raise ParseError("missing 'theta' line", "", 0, 1)
    src = SourceFile(space, theta, bindings, expect_cls, expect_ver, path)
    try:
        src.twist_input
    except BigBracketError as exc:
        raise ParseError(f"twist datum: {exc}", "", 0, 1) from None
    return src


def load_source(path: Union[str, Path]) -> SourceFile:
    p = Path(path)
    return parse_source(p.read_text(encoding="utf-8"), str(p))
