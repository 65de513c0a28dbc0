"""Surface syntax for building lattices out of the standard constructors.

Grammar (whitespace insignificant, INT a signed decimal integer):

    expr := term { "+" term }
    term := [ INT "*" ] atom
    atom := "U" [ "(" INT ")" ] | "E8" [ "(" INT ")" ] | "<" INT ">"
          | "gram" "[" rows "]" | "(" expr ")"
    rows := row { ";" row }
    row  := INT { "," INT }

U(k) and E8(k) scale every Gram entry by k; <k> is the rank-1 lattice [k].
Syntax errors carry the byte offset and the expected-token set; semantic
errors (zero scale, non-symmetric Gram literal) carry the node offset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ExpressionError
from .lattices import Lattice, direct_sum, e8, from_gram, hyperbolic_plane, rank_one

_PUNCT = ("+", "*", "(", ")", "<", ">", "[", "]", ",", ";")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, one of _PUNCT, EOF
    text: str
    offset: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(c, c, i))
            i += 1
            continue
        if c.isdigit() or (c == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], i))
            i = j
            continue
        raise ExpressionError(f"unexpected character {c!r}", i, ("INT", "NAME") + _PUNCT)
    tokens.append(Token("EOF", "", n))
    return tokens


@dataclass(frozen=True)
class UAtom:
    scale: int = 1
    offset: int = 0


@dataclass(frozen=True)
class E8Atom:
    scale: int = 1
    offset: int = 0


@dataclass(frozen=True)
class RankOneAtom:
    entry: int = 0
    offset: int = 0


@dataclass(frozen=True)
class GramAtom:
    rows: tuple[tuple[int, ...], ...] = ()
    offset: int = 0


@dataclass(frozen=True)
class Term:
    count: int
    atom: object
    offset: int = 0


@dataclass(frozen=True)
class LatticeExpr:
    terms: tuple[Term, ...] = field(default_factory=tuple)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != kind:
            raise ExpressionError(f"unexpected token {tok.text or 'end of input'!r}", tok.offset, (kind,))
        self.pos += 1
        return tok

    def parse(self) -> LatticeExpr:
        terms = list(self.expr())
        tok = self.peek()
        if tok.kind != "EOF":
            raise ExpressionError(f"trailing input {tok.text!r}", tok.offset, ("+", "EOF"))
        return LatticeExpr(tuple(terms))

    def expr(self):
        terms = self.terms_of(self.term())
        while self.peek().kind == "+":
            self.take("+")
            terms.extend(self.terms_of(self.term()))
        return terms

    @staticmethod
    def terms_of(item):
        return list(item) if isinstance(item, list) else [item]

    def term(self):
        tok = self.peek()
        if tok.kind == "INT":
            count_tok = self.take("INT")
            self.take("*")
            atom = self.atom()
            count = int(count_tok.text)
            if count < 1:
                raise ExpressionError(f"multiplier must be >= 1, got {count}", count_tok.offset)
            if isinstance(atom, list):
                return [Term(count * t.count, t.atom, t.offset) for t in atom]
            return Term(count, atom, tok.offset)
        atom = self.atom()
        if isinstance(atom, list):
            return atom
        return Term(1, atom, tok.offset)

    def atom(self):
        tok = self.peek()
        if tok.kind == "NAME":
            name = self.take("NAME")
            scale = 1
            if self.peek().kind == "(" and name.text in ("U", "E8"):
                self.take("(")
                scale = int(self.take("INT").text)
                self.take(")")
            if name.text == "U":
                return UAtom(scale, name.offset)
            if name.text == "E8":
                return E8Atom(scale, name.offset)
            if name.text == "gram":
                self.take("[")
                rows = [self.row()]
                while self.peek().kind == ";":
                    self.take(";")
                    rows.append(self.row())
                self.take("]")
                return GramAtom(tuple(rows), name.offset)
            raise ExpressionError(
                f"unknown constructor {name.text!r}", name.offset, ("U", "E8", "gram")
            )
        if tok.kind == "<":
            self.take("<")
            entry = int(self.take("INT").text)
            self.take(">")
            return RankOneAtom(entry, tok.offset)
        if tok.kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        raise ExpressionError(
            f"unexpected token {tok.text or 'end of input'!r}", tok.offset, ("INT", "NAME", "<", "(")
        )

    def row(self) -> tuple[int, ...]:
        entries = [int(self.take("INT").text)]
        while self.peek().kind == ",":
            self.take(",")
            entries.append(int(self.take("INT").text))
        return tuple(entries)


def parse_expr(text: str) -> LatticeExpr:
    return _Parser(text).parse()


def _atom_lattice(atom) -> Lattice:
    if isinstance(atom, UAtom):
        if atom.scale == 0:
            raise ExpressionError("scale must be nonzero", atom.offset)
        return hyperbolic_plane(atom.scale)
    if isinstance(atom, E8Atom):
        if atom.scale == 0:
            raise ExpressionError("scale must be nonzero", atom.offset)
        return e8(atom.scale)
    if isinstance(atom, RankOneAtom):
        if atom.entry == 0:
            raise ExpressionError("rank-1 Gram entry must be nonzero", atom.offset)
        return rank_one(atom.entry)
    if isinstance(atom, GramAtom):
        rows = atom.rows
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ExpressionError("gram literal must be square", atom.offset)
        for i in range(n):
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise ExpressionError(
                        f"gram literal not symmetric at ({i},{j})", atom.offset
                    )
        try:
            return from_gram(rows)
        except Exception as exc:
            raise ExpressionError(f"bad gram literal: {exc}", atom.offset) from None
    raise ExpressionError(f"unknown atom {atom!r}", 0)  # pragma: no cover


def evaluate(expr: LatticeExpr) -> Lattice:
    parts: list[Lattice] = []
    for term in expr.terms:
        piece = _atom_lattice(term.atom)
        parts.extend([piece] * term.count)
    if not parts:
        raise ExpressionError("empty expression", 0)
    return direct_sum(*parts)


def _render_atom(atom) -> str:
    if isinstance(atom, UAtom):
        return "U" if atom.scale == 1 else f"U({atom.scale})"
    if isinstance(atom, E8Atom):
        return "E8" if atom.scale == 1 else f"E8({atom.scale})"
    if isinstance(atom, RankOneAtom):
        return f"<{atom.entry}>"
    if isinstance(atom, GramAtom):
        body = ";".join(",".join(str(x) for x in row) for row in atom.rows)
        return f"gram[{body}]"
    raise ValueError(f"cannot render {atom!r}")  # pragma: no cover


def render(expr: LatticeExpr) -> str:
    parts = []
    for term in expr.terms:
        prefix = f"{term.count}*" if term.count != 1 else ""
        parts.append(prefix + _render_atom(term.atom))
    return " + ".join(parts)


def lattice_from_text(text: str) -> Lattice:
    return evaluate(parse_expr(text))
