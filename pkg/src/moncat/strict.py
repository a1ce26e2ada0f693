"""Strict morphisms: terms indexed by flat arities.

Strictification translates an elaborated term into a composition/tensor
expression over arities in which every structural subterm (anything
built solely from associators, unitors, identities, ``;`` and ``·``)
has been erased to an identity.  Boxes are either inlined or kept as
opaque atoms carrying their strictified payload.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .objects import Arity, arity_of
from .terms import Box, Cast, Comp, Gen, Id, MorTerm, Struct, StrictComp, Tens
from .typecheck import Env, infer


@dataclass(frozen=True)
class BoxPayload:
    inner: "AMor"


@dataclass(frozen=True)
class AAtom:
    ref: Union[str, BoxPayload]
    src: Arity
    tgt: Arity


@dataclass(frozen=True)
class AId:
    on: Arity


@dataclass(frozen=True)
class AComp:
    f: "AMor"
    g: "AMor"


@dataclass(frozen=True)
class ATens:
    f: "AMor"
    g: "AMor"


AMor = Union[AAtom, AId, AComp, ATens]


def asrc(u: AMor) -> Arity:
    if isinstance(u, AAtom):
        return u.src
    if isinstance(u, AId):
        return u.on
    if isinstance(u, AComp):
        return asrc(u.f)
    return asrc(u.f) + asrc(u.g)


def atgt(u: AMor) -> Arity:
    if isinstance(u, AAtom):
        return u.tgt
    if isinstance(u, AId):
        return u.on
    if isinstance(u, AComp):
        return atgt(u.g)
    return atgt(u.f) + atgt(u.g)


def is_structural(t: MorTerm) -> bool:
    """True for terms built only from structural generators and identities."""
    if isinstance(t, (Id, Struct)):
        return True
    if isinstance(t, (Comp, Tens)):
        return is_structural(t.f) and is_structural(t.g)
    return False


def inline_boxes(t: MorTerm) -> MorTerm:
    """Remove every box wrapper; the denoted diagram is unchanged."""
    if isinstance(t, Box):
        return inline_boxes(t.f)
    if isinstance(t, Comp):
        return Comp(inline_boxes(t.f), inline_boxes(t.g))
    if isinstance(t, StrictComp):
        return StrictComp(inline_boxes(t.f), inline_boxes(t.g))
    if isinstance(t, Tens):
        return Tens(inline_boxes(t.f), inline_boxes(t.g))
    if isinstance(t, Cast):
        return Cast(inline_boxes(t.f))
    return t


def strictify(t: MorTerm, env: Env, keep_boxes: bool = False) -> AMor:
    """Translate an elaborated term to a strict morphism over arities."""
    if is_structural(t):
        return AId(arity_of(infer(t, env)[0]))
    if isinstance(t, Gen):
        src, tgt = env.gens[t.name]
        return AAtom(t.name, arity_of(src), arity_of(tgt))
    if isinstance(t, Comp):
        return AComp(strictify(t.f, env, keep_boxes), strictify(t.g, env, keep_boxes))
    if isinstance(t, Tens):
        return ATens(strictify(t.f, env, keep_boxes), strictify(t.g, env, keep_boxes))
    if isinstance(t, Box):
        inner = strictify(t.f, env, keep_boxes)
        if keep_boxes:
            return AAtom(BoxPayload(inner), asrc(inner), atgt(inner))
        return inner
    raise ValueError(f"cannot strictify unelaborated term: {t!r}")


def has_empty_target(u: AMor) -> bool:
    """True iff some atom (recursively through boxes) has no output wire."""
    if isinstance(u, AAtom):
        if not u.tgt:
            return True
        if isinstance(u.ref, BoxPayload):
            return has_empty_target(u.ref.inner)
        return False
    if isinstance(u, (AComp, ATens)):
        return has_empty_target(u.f) or has_empty_target(u.g)
    return False
