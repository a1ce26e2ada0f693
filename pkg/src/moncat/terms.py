"""Morphism expressions and their textual form.

Terms are built from generator references, identities, sequential
composition (``;``), tensor (``·``), strict-style composition (``;;``,
which gets a structural isomorphism inserted during elaboration), boxes
``[...]`` and the reserved structural generators ``assoc``, ``unitl``
and ``unitr``.

``Ref`` nodes are produced by the parser for bare identifiers; whether a
name denotes a generator or an identity wire is only known once the
enclosing signature is available, so resolution happens in
:mod:`moncat.typecheck`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .objects import Atom, ObjTree, Tensor, Unit, obj_to_text

STRUCT_KINDS = ("assoc", "unitl", "unitr")
RESERVED_NAMES = frozenset(STRUCT_KINDS) | {"cast"}


@dataclass(frozen=True)
class Ref:
    """Unresolved identifier in morphism position."""

    name: str


@dataclass(frozen=True)
class Gen:
    """Reference to a signature generator or goal definition."""

    name: str


@dataclass(frozen=True)
class Id:
    on: ObjTree


@dataclass(frozen=True)
class Comp:
    f: "MorTerm"
    g: "MorTerm"


@dataclass(frozen=True)
class Tens:
    f: "MorTerm"
    g: "MorTerm"


@dataclass(frozen=True)
class StrictComp:
    """Composition across merely-equivalent interfaces (``;;``)."""

    f: "MorTerm"
    g: "MorTerm"


@dataclass(frozen=True)
class Cast:
    """View a morphism at an equivalent type; elaborated away."""

    f: "MorTerm"


@dataclass(frozen=True)
class Box:
    f: "MorTerm"


@dataclass(frozen=True)
class Struct:
    """Structural generator: associator or a unitor, possibly inverted."""

    kind: str  # one of STRUCT_KINDS
    args: tuple[ObjTree, ...]
    inv: bool = False

    def endpoints(self) -> tuple[ObjTree, ObjTree]:
        if self.kind == "assoc":
            a, b, c = self.args
            src: ObjTree = Tensor(Tensor(a, b), c)
            tgt: ObjTree = Tensor(a, Tensor(b, c))
        elif self.kind == "unitl":
            (a,) = self.args
            src, tgt = Tensor(Unit(), a), a
        else:  # unitr
            (a,) = self.args
            src, tgt = Tensor(a, Unit()), a
        return (tgt, src) if self.inv else (src, tgt)


MorTerm = Union[Ref, Gen, Id, Comp, Tens, StrictComp, Cast, Box, Struct]

_PREC_COMP = 0
_PREC_TENS = 1
_PREC_ATOM = 2


def print_term(t: MorTerm, prec: int = _PREC_COMP) -> str:
    """Deterministic printing with minimal parentheses.

    ``·`` binds tighter than ``;``/``;;``; both are printed
    left-associatively, so right-nested compositions get parenthesized
    and re-parsing yields a structurally equal term.
    """
    if isinstance(t, (Ref, Gen)):
        return t.name
    if isinstance(t, Id):
        if isinstance(t.on, Tensor):
            return "(" + obj_to_text(t.on) + ")"
        return obj_to_text(t.on)
    if isinstance(t, Struct):
        inside = ",".join(obj_to_text(a) for a in t.args)
        return f"{t.kind}[{inside}]" + ("~" if t.inv else "")
    if isinstance(t, Box):
        return "[" + print_term(t.f, _PREC_COMP) + "]"
    if isinstance(t, Cast):
        return "cast[" + print_term(t.f, _PREC_COMP) + "]"
    if isinstance(t, (Comp, StrictComp)):
        op = " ; " if isinstance(t, Comp) else " ;; "
        s = print_term(t.f, _PREC_COMP) + op + print_term(t.g, _PREC_TENS)
        return f"({s})" if prec > _PREC_COMP else s
    if isinstance(t, Tens):
        s = print_term(t.f, _PREC_TENS) + "·" + print_term(t.g, _PREC_ATOM)
        return f"({s})" if prec > _PREC_TENS else s
    raise TypeError(f"not a term: {t!r}")


def boxes_of(t: MorTerm) -> list[Box]:
    """All box subterms, outermost first, left to right."""
    found: list[Box] = []

    def walk(u: MorTerm) -> None:
        if isinstance(u, Box):
            found.append(u)
            walk(u.f)
        elif isinstance(u, (Comp, StrictComp, Tens)):
            walk(u.f)
            walk(u.g)
        elif isinstance(u, Cast):
            walk(u.f)

    walk(t)
    return found
