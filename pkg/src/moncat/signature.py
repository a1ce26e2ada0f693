"""Signatures and equational goals.

A goal file declares objects and generators, then hypotheses and
definitions, and finally (after a separator line of ``=``) the
conclusion to prove.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .objects import ObjTree
from .terms import MorTerm


@dataclass(frozen=True)
class GenDecl:
    name: str
    src: ObjTree
    tgt: ObjTree
    style: dict[str, str] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Signature:
    objects: tuple[str, ...]
    generators: dict[str, GenDecl]

    def has_object(self, name: str) -> bool:
        return name in self.objects


@dataclass(frozen=True)
class Equation:
    lhs: MorTerm
    rhs: MorTerm
    strict: bool  # True for ≡' (endpoints only equivalent)


@dataclass(frozen=True)
class Hypothesis:
    name: str
    eq: Equation


@dataclass(frozen=True)
class Definition:
    name: str
    body: MorTerm


@dataclass(frozen=True)
class Goal:
    signature: Signature
    hypotheses: tuple[Hypothesis, ...]
    definitions: tuple[Definition, ...]
    conclusion: Equation

    def hypothesis(self, name: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def definition(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)
