"""Structural isomorphisms between equivalent tensor expressions.

Any two object expressions with the same arity are connected by an
isomorphism built from associators, unitors, identities, tensor,
composition and inverses.  ``find_maclane`` returns one canonical such
witness: route the first tree to the right-nested list form of its
arity, then back up into the second tree.  Coherence guarantees the
choice does not matter; the property suite checks this empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .objects import Arity, Atom, ObjTree, Tensor, Unit, arity_of, list_form
from .terms import Comp, Id, MorTerm, Struct, Tens


@dataclass(frozen=True)
class MId:
    a: ObjTree


@dataclass(frozen=True)
class MComp:
    u: "MacLane"
    v: "MacLane"


@dataclass(frozen=True)
class MTensor:
    u: "MacLane"
    v: "MacLane"


@dataclass(frozen=True)
class MInv:
    u: "MacLane"


@dataclass(frozen=True)
class MAssoc:
    a: ObjTree
    b: ObjTree
    c: ObjTree


@dataclass(frozen=True)
class MUnitL:
    a: ObjTree


@dataclass(frozen=True)
class MUnitR:
    a: ObjTree


MacLane = Union[MId, MComp, MTensor, MInv, MAssoc, MUnitL, MUnitR]


class NotEquivalent(Exception):
    """The two object expressions have different arities."""

    def __init__(self, left: Arity, right: Arity):
        self.left = left
        self.right = right
        super().__init__(f"arities differ: {list(left)} vs {list(right)}")


def source(u: MacLane) -> ObjTree:
    if isinstance(u, MId):
        return u.a
    if isinstance(u, MComp):
        return source(u.u)
    if isinstance(u, MTensor):
        return Tensor(source(u.u), source(u.v))
    if isinstance(u, MInv):
        return target(u.u)
    if isinstance(u, MAssoc):
        return Tensor(Tensor(u.a, u.b), u.c)
    if isinstance(u, MUnitL):
        return Tensor(Unit(), u.a)
    return Tensor(u.a, Unit())


def target(u: MacLane) -> ObjTree:
    if isinstance(u, MId):
        return u.a
    if isinstance(u, MComp):
        return target(u.v)
    if isinstance(u, MTensor):
        return Tensor(target(u.u), target(u.v))
    if isinstance(u, MInv):
        return source(u.u)
    if isinstance(u, MAssoc):
        return Tensor(u.a, Tensor(u.b, u.c))
    return u.a


def _merge(gamma: Arity, delta: Arity) -> MacLane:
    """Witness from list_form(gamma) ⊗ list_form(delta) to list_form(gamma ++ delta)."""
    lg, ld = list_form(gamma), list_form(delta)
    if not gamma:
        return MUnitL(ld)
    if len(gamma) == 1:
        if not delta:
            return MUnitR(lg)
        return MId(Tensor(lg, ld))
    head = Atom(gamma[0])
    tail = gamma[1:]
    step = MAssoc(head, list_form(tail), ld)
    return MComp(step, MTensor(MId(head), _merge(tail, delta)))


def canon(t: ObjTree) -> MacLane:
    """Witness from ``t`` to the list form of its arity."""
    if isinstance(t, (Atom, Unit)):
        return MId(t)
    u = canon(t.left)
    v = canon(t.right)
    merged = _merge(arity_of(t.left), arity_of(t.right))
    return MComp(MTensor(u, v), merged)


def find_maclane(a: ObjTree, b: ObjTree) -> MacLane:
    """Canonical structural isomorphism a ~> b; raises when arities differ."""
    if arity_of(a) != arity_of(b):
        raise NotEquivalent(arity_of(a), arity_of(b))
    if a == b:
        return MId(a)
    return MComp(canon(a), MInv(canon(b)))


def eval_maclane(u: MacLane) -> MorTerm:
    """Read a witness back as a morphism term over assoc/unitl/unitr."""
    return _eval(u, inv=False)


def _eval(u: MacLane, inv: bool) -> MorTerm:
    if isinstance(u, MId):
        return Id(u.a)
    if isinstance(u, MInv):
        return _eval(u.u, not inv)
    if isinstance(u, MComp):
        if inv:
            return Comp(_eval(u.v, True), _eval(u.u, True))
        return Comp(_eval(u.u, False), _eval(u.v, False))
    if isinstance(u, MTensor):
        return Tens(_eval(u.u, inv), _eval(u.v, inv))
    if isinstance(u, MAssoc):
        return Struct("assoc", (u.a, u.b, u.c), inv=inv)
    if isinstance(u, MUnitL):
        return Struct("unitl", (u.a,), inv=inv)
    return Struct("unitr", (u.a,), inv=inv)


def is_trivial(u: MacLane) -> bool:
    """True when the witness is an identity on the nose."""
    return isinstance(u, MId)
