"""Parser for the line-oriented goal format.

The format accepts both the canonical Unicode tokens and ASCII aliases::

    ⊗ / *    · / .    ≡ / ==    ≡' / =='    ~> / ->

One declaration per line: ``X : object`` (objects may also be declared
implicitly by their first use in a generator type), ``name : a ~> b``
for generators (optionally followed by ``@shape=...,color=...``),
``name : term ≡ term`` for hypotheses, ``name := term`` for
definitions.  A separator line of ``=`` signs precedes the conclusion
``term ≡ term``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .objects import Atom, ObjTree, Tensor, Unit
from .terms import (
    Box,
    Comp,
    Id,
    MorTerm,
    Ref,
    RESERVED_NAMES,
    STRUCT_KINDS,
    StrictComp,
    Struct,
    Tens,
)
from .signature import Definition, Equation, GenDecl, Goal, Hypothesis, Signature


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident', 'unit', or the symbol itself
    text: str
    line: int
    col: int


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")

# longest-match symbol table; aliases normalize to the canonical kind
_SYMBOLS = [
    ("=='", "≡'"),
    ("≡'", "≡'"),
    ("==", "≡"),
    ("≡", "≡"),
    (":=", ":="),
    (";;", ";;"),
    ("~>", "~>"),
    ("->", "~>"),
    ("⊗", "⊗"),
    ("*", "⊗"),
    ("·", "·"),
    (".", "·"),
    (";", ";"),
    (":", ":"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    (",", ","),
    ("~", "~"),
    ("@", "@"),
    ("=", "="),
]


def _tokenize(text: str, line_no: int) -> list[Token]:
    toks: list[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            toks.append(Token("ident", m.group(), line_no, i + 1))
            i = m.end()
            continue
        if ch == "1":
            toks.append(Token("unit", "1", line_no, i + 1))
            i += 1
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token(kind, sym, line_no, i + 1))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line_no, i + 1)
    return toks


class _TermParser:
    def __init__(self, toks: list[Token], line_no: int):
        self.toks = toks
        self.pos = 0
        self.line = line_no

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line, 0)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def at(self, *kinds: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    # -- object expressions ------------------------------------------------

    def obj(self) -> ObjTree:
        parts = [self.obj_base()]
        while self.at("⊗"):
            self.next()
            parts.append(self.obj_base())
        tree = parts[-1]
        for p in reversed(parts[:-1]):
            tree = Tensor(p, tree)
        return tree

    def obj_base(self) -> ObjTree:
        tok = self.next()
        if tok.kind == "ident":
            return Atom(tok.text)
        if tok.kind == "unit":
            return Unit()
        if tok.kind == "(":
            inner = self.obj()
            self.expect(")")
            return inner
        raise ParseError(f"expected object, got {tok.text!r}", tok.line, tok.col)

    # -- morphism terms ----------------------------------------------------

    def term(self) -> MorTerm:
        t = self.tens()
        while self.at(";", ";;"):
            op = self.next()
            rhs = self.tens()
            t = Comp(t, rhs) if op.kind == ";" else StrictComp(t, rhs)
        return t

    def tens(self) -> MorTerm:
        t = self.factor()
        while self.at("·"):
            self.next()
            t = Tens(t, self.factor())
        return t

    def factor(self) -> MorTerm:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line, 0)
        if tok.kind == "[":
            self.next()
            inner = self.term()
            self.expect("]")
            return Box(inner)
        if tok.kind == "ident" and tok.text in STRUCT_KINDS:
            return self.struct_leaf()
        return self.obj_chain()

    def struct_leaf(self) -> MorTerm:
        tok = self.next()
        self.expect("[")
        args = [self.obj()]
        while self.at(","):
            self.next()
            args.append(self.obj())
        self.expect("]")
        want = 3 if tok.text == "assoc" else 1
        if len(args) != want:
            raise ParseError(
                f"{tok.text} takes {want} argument(s), got {len(args)}", tok.line, tok.col
            )
        inv = False
        if self.at("~"):
            self.next()
            inv = True
        return Struct(tok.text, tuple(args), inv=inv)

    def obj_chain(self) -> MorTerm:
        """A base, or a ``⊗`` chain of bases denoting an identity wire bundle."""
        first_tok = self.peek()
        parts = [self.base()]
        while self.at("⊗"):
            self.next()
            parts.append(self.base())
        if len(parts) == 1:
            return parts[0]
        trees = [self._as_obj(p, first_tok) for p in parts]
        tree = trees[-1]
        for p in reversed(trees[:-1]):
            tree = Tensor(p, tree)
        return Id(tree)

    @staticmethod
    def _as_obj(t: MorTerm, tok: Token | None) -> ObjTree:
        if isinstance(t, Ref):
            return Atom(t.name)
        if isinstance(t, Id):
            return t.on
        line = tok.line if tok else 0
        col = tok.col if tok else 0
        raise ParseError("⊗ joins object expressions, not morphisms", line, col)

    def base(self) -> MorTerm:
        tok = self.next()
        if tok.kind == "ident":
            return Ref(tok.text)
        if tok.kind == "unit":
            return Id(Unit())
        if tok.kind == "(":
            inner = self.term()
            self.expect(")")
            return inner
        raise ParseError(f"expected a term, got {tok.text!r}", tok.line, tok.col)

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)


def parse_term(text: str, line_no: int = 1) -> MorTerm:
    """Parse a single morphism term (as used in proof scripts)."""
    p = _TermParser(_tokenize(text, line_no), line_no)
    t = p.term()
    p.done()
    return t


_SEPARATOR = re.compile(r"^\s*===*\s*$")


def parse_goal(text: str) -> Goal:
    """Parse a goal document; terms are left unresolved for typechecking."""
    objects: list[str] = []
    generators: dict[str, GenDecl] = {}
    hypotheses: list[Hypothesis] = []
    definitions: list[Definition] = []
    conclusion: Equation | None = None
    seen_separator = False
    names: set[str] = set()

    def declare(name: str, line: int, col: int) -> None:
        if name in RESERVED_NAMES:
            raise ParseError(f"{name!r} is reserved", line, col)
        if name in names:
            raise ParseError(f"duplicate name {name!r}", line, col)
        names.add(name)

    def note_objects(tree: ObjTree) -> None:
        if isinstance(tree, Atom):
            if tree.name in generators:
                raise ParseError(f"{tree.name!r} is a generator, not an object", 0, 0)
            if tree.name not in objects:
                objects.append(tree.name)
                names.add(tree.name)
        elif isinstance(tree, Tensor):
            note_objects(tree.left)
            note_objects(tree.right)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if _SEPARATOR.match(raw) and "≡" not in raw:
            if seen_separator:
                raise ParseError("duplicate separator", line_no, 1)
            seen_separator = True
            continue
        toks = _tokenize(raw, line_no)
        if not toks:
            continue
        p = _TermParser(toks, line_no)
        if seen_separator:
            if conclusion is not None:
                raise ParseError("multiple conclusions", line_no, 1)
            conclusion = _parse_equation(p)
            p.done()
            continue
        head = p.expect("ident")
        sep = p.next()
        if sep.kind == ":=":
            declare(head.text, head.line, head.col)
            body = p.term()
            p.done()
            definitions.append(Definition(head.text, body))
            continue
        if sep.kind != ":":
            raise ParseError(f"expected ':' or ':=', got {sep.text!r}", sep.line, sep.col)
        # object declaration: `X : object`
        if p.at("ident") and p.peek().text == "object" and p.pos + 1 == len(toks):
            declare(head.text, head.line, head.col)
            objects.append(head.text)
            p.next()
            continue
        kinds = {t.kind for t in toks}
        if "~>" in kinds:
            declare(head.text, head.line, head.col)
            src = p.obj()
            p.expect("~>")
            tgt = p.obj()
            style = _parse_style(p)
            p.done()
            note_objects(src)
            note_objects(tgt)
            generators[head.text] = GenDecl(head.text, src, tgt, style)
            continue
        if "≡" in kinds or "≡'" in kinds:
            declare(head.text, head.line, head.col)
            eq = _parse_equation(p)
            p.done()
            hypotheses.append(Hypothesis(head.text, eq))
            continue
        raise ParseError("malformed declaration", head.line, head.col)

    return Goal(
        signature=Signature(tuple(objects), generators),
        hypotheses=tuple(hypotheses),
        definitions=tuple(definitions),
        conclusion=conclusion,
    )


def _parse_equation(p: _TermParser) -> Equation:
    lhs = p.term()
    tok = p.next()
    if tok.kind not in ("≡", "≡'"):
        raise ParseError(f"expected an equation, got {tok.text!r}", tok.line, tok.col)
    rhs = p.term()
    return Equation(lhs, rhs, strict=tok.kind == "≡'")


def _parse_style(p: _TermParser) -> dict[str, str]:
    style: dict[str, str] = {}
    if not p.at("@"):
        return style
    p.next()
    while True:
        key = p.expect("ident")
        p.expect("=")
        val = p.expect("ident")
        style[key.text] = val.text
        if p.at(","):
            p.next()
            continue
        break
    return style
