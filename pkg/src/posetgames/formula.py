"""Boolean formulas and their compilation to poset games.

Grammar (whitespace ignored, ``!`` binds tighter than ``&``, which binds
tighter than ``|``; binary operators associate to the left)::

    expr   := expr "|" term | term
    term   := term "&" factor | factor
    factor := "!" factor | "(" expr ")" | "0" | "1" | identifier
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .constructions import Variant, and_game, negate, or_game
from .poset import Poset, antichain, tower

__all__ = [
    "Const",
    "Var",
    "Not",
    "And",
    "Or",
    "Formula",
    "FormulaSyntaxError",
    "UnboundVariable",
    "parse",
    "to_text",
    "evaluate",
    "compile_formula",
    "compiled_size_report",
    "parse_assignment",
]


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Not, And, Or]


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnboundVariable(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unbound variable {self.name!r}"


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([01])|([!&|()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            tokens.append(("ident", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("const", m.group(2), m.start(2)))
        else:
            tokens.append((m.group(3), m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Formula:
        node = self.term()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.term())
        return node

    def term(self) -> Formula:
        node = self.factor()
        while self.peek() == "&":
            self.take()
            node = And(node, self.factor())
        return node

    def factor(self) -> Formula:
        kind, value, offset = self.take()
        if kind == "!":
            return Not(self.factor())
        if kind == "(":
            node = self.expr()
            kind, _, offset = self.take()
            if kind != ")":
                raise FormulaSyntaxError("expected ')'", offset)
            return node
        if kind == "const":
            return Const(value == "1")
        if kind == "ident":
            return Var(value)
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of formula", offset)
        raise FormulaSyntaxError(f"unexpected {value!r}", offset)


def parse(text: str) -> Formula:
    parser = _Parser(text)
    node = parser.expr()
    kind, value, offset = parser.take()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", offset)
    return node


def to_text(f: Formula) -> str:
    """Fully parenthesized rendering; ``parse(to_text(f)) == f``."""
    if isinstance(f, Const):
        return "1" if f.value else "0"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return f"!{to_text(f.child)}"
    op = "&" if isinstance(f, And) else "|"
    return f"({to_text(f.left)} {op} {to_text(f.right)})"


def _lookup(name: str, asn: Mapping[str, bool]) -> bool:
    try:
        return bool(asn[name])
    except KeyError:
        raise UnboundVariable(name) from None


def evaluate(f: Formula, asn: Mapping[str, bool] | None = None) -> bool:
    asn = asn or {}
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return _lookup(f.name, asn)
    if isinstance(f, Not):
        return not evaluate(f.child, asn)
    if isinstance(f, And):
        return evaluate(f.left, asn) and evaluate(f.right, asn)
    return evaluate(f.left, asn) or evaluate(f.right, asn)


def _gadget(value: bool) -> Poset:
    # true: one vertex (first player wins); false: two isolated vertices.
    return tower(1) if value else antichain(2)


def _compile(f: Formula, asn, variant: Variant, path: str, table: list | None) -> Poset:
    if isinstance(f, Const):
        game = _gadget(f.value)
    elif isinstance(f, Var):
        game = _gadget(_lookup(f.name, asn))
    elif isinstance(f, Not):
        child = _compile(f.child, asn, variant, _join(path, "child"), table)
        game, _ = negate(child, variant)
    else:
        left = _compile(f.left, asn, variant, _join(path, "left"), table)
        right = _compile(f.right, asn, variant, _join(path, "right"), table)
        if isinstance(f, Or):
            game = or_game(left, right)
        else:
            game = and_game(left, right, variant)
    if table is not None:
        table.append((path, to_text(f), game.n))
    return game


def _join(path: str, step: str) -> str:
    return step if path == "root" else f"{path}.{step}"


def compile_formula(
    f: Formula,
    asn: Mapping[str, bool] | None = None,
    variant: Variant | str = Variant.PROCEDURE,
) -> Poset:
    """Poset game whose first player wins iff ``f`` is true under ``asn``."""
    return _compile(f, asn or {}, Variant(variant), "root", None)


def compiled_size_report(
    f: Formula,
    asn: Mapping[str, bool] | None = None,
    variant: Variant | str = Variant.PROCEDURE,
) -> list[tuple[str, str, int]]:
    """``(path, subformula, vertex count)`` for every node, children first.

    Paths name the route from the root (``left``, ``right``, ``child``,
    joined with dots); the root row is last.
    """
    table: list = []
    _compile(f, asn or {}, Variant(variant), "root", table)
    return table


def parse_assignment(text: str) -> dict[str, bool]:
    """``"x=1,y=0"`` -> ``{"x": True, "y": False}``."""
    out: dict[str, bool] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or value not in ("0", "1") or not re.fullmatch(r"[A-Za-z_]\w*", name):
            raise ValueError(f"bad assignment {item!r}; expected name=0|1")
        out[name] = value == "1"
    return out
