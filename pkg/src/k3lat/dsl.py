"""A small expression language for lattices, following the table notation.

Grammar (whitespace is ignored, ``⊕`` is a synonym of ``+``)::

    expr  := term { "+" term }
    term  := [ integer ] atom [ "(" nonzero-integer ")" ]
    atom  := "U" | ("A"|"D"|"E") integer | "<" integer { "," integer } ">"
           | "[" "[" ints "]" { "," "[" ints "]" } "]"
           | "perp" "(" expr ";" expr ")"

``2A1(2)`` is two copies of ``A1(2)``.  A lone ``0`` is the rank-zero lattice
(only meaningful at genus level).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import lattice as lat_mod
from .embeddings import GenusTriple, as_triple, complement_genus
from .lattice import Lattice, LatticeError
from .quadform import TRIVIAL


class DslError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    kind: str  # "U", "A", "D", "E" or "diag"
    param: Union[int, tuple[int, ...], None] = None


@dataclass(frozen=True)
class GramLiteral:
    rows: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Perp:
    sub: "Sum"
    ambient: "Sum"


@dataclass(frozen=True)
class Scale:
    inner: Union[Atom, GramLiteral, Perp]
    t: int


@dataclass(frozen=True)
class Repeat:
    count: int
    inner: Union[Atom, GramLiteral, Perp, Scale]


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Zero:
    pass


Expr = Union[Sum, Repeat, Scale, Atom, GramLiteral, Perp, Zero]


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>perp|[UADE])|(?P<op>[+⊕<>\[\](),;]))")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                           len(text) - len(text[pos:].lstrip()), text)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "op" and val == "⊕":
            val = "+"
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, val=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (val is not None and tok[1] != val):
            want = val or kind
            got = tok[1] or "end of input"
            raise DslError(f"expected {want!r}, found {got!r}", tok[2], self.text)
        self.i += 1
        return tok

    def error(self, msg):
        return DslError(msg, self.peek()[2], self.text)

    def expr(self) -> Sum:
        terms = [self.term()]
        while self.peek()[1] == "+":
            self.take()
            terms.append(self.term())
        return Sum(tuple(terms))

    def term(self):
        count = None
        if self.peek()[0] == "int":
            tok = self.take()
            count = int(tok[1])
            if count <= 0:
                raise DslError("multiplicity must be positive", tok[2], self.text)
        node = self.atom()
        if self.peek()[1] == "(":
            self.take()
            tok = self.take("int")
            t = int(tok[1])
            if t == 0:
                raise DslError("scale factor must be nonzero", tok[2], self.text)
            self.take(val=")")
            node = Scale(node, t)
        return node if count is None else Repeat(count, node)

    def integer(self) -> int:
        return int(self.take("int")[1])

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "name":
            self.take()
            if val == "U":
                return Atom("U")
            if val == "perp":
                self.take(val="(")
                sub = self.expr()
                self.take(val=";")
                amb = self.expr()
                self.take(val=")")
                return Perp(sub, amb)
            if self.peek()[0] != "int":
                raise self.error(f"{val} needs an index")
            n = self.integer()
            _check_root_index(val, n, pos, self.text)
            return Atom(val, n)
        if val == "<":
            self.take()
            entries = [self.integer()]
            while self.peek()[1] == ",":
                self.take()
                entries.append(self.integer())
            self.take(val=">")
            for e in entries:
                if e == 0 or e % 2:
                    raise DslError(f"<{e}> is not an even nondegenerate entry", pos, self.text)
            return Atom("diag", tuple(entries))
        if val == "[":
            self.take()
            rows = [self.int_row()]
            while self.peek()[1] == ",":
                self.take()
                rows.append(self.int_row())
            self.take(val="]")
            return GramLiteral(tuple(rows))
        raise self.error(f"expected a lattice, found {val or 'end of input'!r}")

    def int_row(self):
        self.take(val="[")
        row = [self.integer()]
        while self.peek()[1] == ",":
            self.take()
            row.append(self.integer())
        self.take(val="]")
        return tuple(row)


def _check_root_index(kind: str, n: int, pos: int, text: str) -> None:
    ok = {"A": n >= 1, "D": n >= 4, "E": n in (6, 7, 8)}[kind]
    if not ok:
        raise DslError(f"{kind}{n} is out of range", pos, text)


def parse(text: str) -> Expr:
    if text.strip() == "0":
        return Zero()
    p = _Parser(text)
    e = p.expr()
    if p.peek()[0] != "end":
        raise p.error(f"unexpected {p.peek()[1]!r}")
    return e


# --------------------------------------------------------------------------
# printer


def render(e: Expr) -> str:
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Sum):
        return "+".join(render(t) for t in e.terms)
    if isinstance(e, Repeat):
        return f"{e.count}{render(e.inner)}"
    if isinstance(e, Scale):
        return f"{render(e.inner)}({e.t})"
    if isinstance(e, Atom):
        if e.kind == "U":
            return "U"
        if e.kind == "diag":
            return "<" + ",".join(map(str, e.param)) + ">"
        return f"{e.kind}{e.param}"
    if isinstance(e, GramLiteral):
        return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in e.rows) + "]"
    if isinstance(e, Perp):
        return f"perp({render(e.sub)}; {render(e.ambient)})"
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------------------
# evaluation


LatticeLike = Union[Lattice, GenusTriple]


def evaluate(e: Expr) -> LatticeLike:
    """A concrete lattice, or a genus triple when a ``perp`` is involved."""
    try:
        return _eval(e)
    except LatticeError as exc:
        raise DslError(str(exc)) from exc


def _eval(e: Expr) -> LatticeLike:
    if isinstance(e, Zero):
        return GenusTriple(0, 0, TRIVIAL)
    if isinstance(e, Sum):
        return _sum([_eval(t) for t in e.terms], render(e))
    if isinstance(e, Repeat):
        inner = _eval(e.inner)
        return _sum([inner] * e.count, render(e))
    if isinstance(e, Scale):
        inner = _eval(e.inner)
        if isinstance(inner, GenusTriple):
            raise DslError("cannot rescale a lattice known only up to genus")
        return Lattice(lat_mod.rescale(inner, e.t).gram, render(e))
    if isinstance(e, Atom):
        if e.kind == "U":
            return lat_mod.hyperbolic_plane()
        if e.kind == "diag":
            n = len(e.param)
            g = [[e.param[i] if i == j else 0 for j in range(n)] for i in range(n)]
            return lat_mod.from_gram(g, render(e))
        return lat_mod.root_lattice(e.kind, e.param)
    if isinstance(e, GramLiteral):
        return lat_mod.from_gram(e.rows, render(e))
    if isinstance(e, Perp):
        amb = _eval(e.ambient)
        if not isinstance(amb, Lattice):
            raise DslError("perp ambient must be a concrete lattice")
        if not amb.is_unimodular:
            raise DslError(f"perp ambient {render(e.ambient)} is not unimodular")
        sub = _eval(e.sub)
        if as_triple(sub).rank >= amb.rank:
            raise DslError("perp: sub lattice must have smaller rank than the ambient")
        return complement_genus(sub, amb)
    raise TypeError(f"not an expression node: {e!r}")


def _sum(parts: list, label: str) -> LatticeLike:
    if all(isinstance(p, Lattice) for p in parts):
        if len(parts) == 1:
            return parts[0]
        return Lattice(lat_mod.direct_sum(parts).gram, label)
    total = as_triple(parts[0])
    for p in parts[1:]:
        total = total + as_triple(p)
    return total


def lattice(text: str) -> LatticeLike:
    """Parse and evaluate in one step."""
    return evaluate(parse(text))
