"""Tensor expressions over atomic objects, and their flat arities.

An object expression is a binary tree built from named atoms, the unit
object and the tensor.  Its *arity* is the flat list of atom names
obtained by erasing all tensor structure and units; two object
expressions are equivalent (connected by a structural isomorphism)
exactly when they have the same arity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Arity = tuple[str, ...]


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Tensor:
    left: "ObjTree"
    right: "ObjTree"


ObjTree = Union[Atom, Unit, Tensor]

UNIT = Unit()


def arity_of(t: ObjTree) -> Arity:
    """Flatten an object expression to its list of atom names."""
    if isinstance(t, Atom):
        return (t.name,)
    if isinstance(t, Unit):
        return ()
    return arity_of(t.left) + arity_of(t.right)


def list_form(ar: Arity) -> ObjTree:
    """The canonical right-nested, unit-free tree with the given arity.

    The empty arity maps to the unit object.
    """
    if not ar:
        return UNIT
    tree: ObjTree = Atom(ar[-1])
    for name in reversed(ar[:-1]):
        tree = Tensor(Atom(name), tree)
    return tree


def tensor_all(trees: list[ObjTree]) -> ObjTree:
    """Right-nested tensor of a list of trees (unit for the empty list)."""
    if not trees:
        return UNIT
    out = trees[-1]
    for t in reversed(trees[:-1]):
        out = Tensor(t, out)
    return out


def obj_to_text(t: ObjTree, prec: int = 0) -> str:
    """Print an object expression; tensor is right-associative."""
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Unit):
        return "1"
    left = obj_to_text(t.left, 1)
    right = obj_to_text(t.right, 0)
    s = f"{left}⊗{right}"
    return f"({s})" if prec > 0 else s
