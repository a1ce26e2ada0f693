"""Shared fixtures and randomized generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from moncat.objects import Atom, ObjTree, Tensor, Unit, arity_of
from moncat.terms import Gen, Id, MorTerm, StrictComp, Tens
from moncat.typecheck import Env

GOALS = Path(__file__).resolve().parent.parent / "goals"

OBJECTS = ("A", "B", "C", "D", "E")


@pytest.fixture
def composite_monoid_text() -> str:
    return (GOALS / "composite-monoid.goal").read_text(encoding="utf-8")


def rand_tree_over(rng: random.Random, ar: tuple[str, ...]) -> ObjTree:
    """A random bracketing of the given atom list, with occasional units."""
    if not ar:
        return Unit()
    if len(ar) == 1:
        t: ObjTree = Atom(ar[0])
    else:
        k = rng.randint(1, len(ar) - 1)
        t = Tensor(rand_tree_over(rng, ar[:k]), rand_tree_over(rng, ar[k:]))
    if rng.random() < 0.2:
        t = Tensor(Unit(), t) if rng.random() < 0.5 else Tensor(t, Unit())
    return t


def rand_tree(rng: random.Random, max_atoms: int = 3) -> ObjTree:
    ar = tuple(rng.choice(OBJECTS) for _ in range(rng.randint(0, max_atoms)))
    return rand_tree_over(rng, ar)


class TermGen:
    """Builds random terms layer by layer over a growing random signature."""

    def __init__(self, rng: random.Random, allow_empty_target: bool = True,
                 allow_empty_source: bool = True):
        self.rng = rng
        self.allow_empty_target = allow_empty_target
        self.allow_empty_source = allow_empty_source
        self.env = Env(objects=frozenset(OBJECTS), gens={})
        self._count = 0

    def _gen_for(self, src_ar: tuple[str, ...]) -> str:
        """An existing or fresh generator whose source fringe is src_ar."""
        pool = [
            name
            for name, (s, _t) in self.env.gens.items()
            if arity_of(s) == src_ar
        ]
        if pool and self.rng.random() < 0.6:
            return self.rng.choice(pool)
        self._count += 1
        name = f"g{self._count}"
        lo = 0 if self.allow_empty_target else 1
        tgt_ar = tuple(
            self.rng.choice(OBJECTS) for _ in range(self.rng.randint(lo, 2))
        )
        self.env.gens[name] = (
            rand_tree_over(self.rng, src_ar),
            rand_tree_over(self.rng, tgt_ar),
        )
        return name

    def layer(self, ar: tuple[str, ...]) -> tuple[MorTerm, tuple[str, ...]]:
        """One row: identities with a single generator applied to a segment."""
        lo_width = 0 if self.allow_empty_source else (1 if ar else 0)
        i = self.rng.randint(0, len(ar))
        width = self.rng.randint(lo_width, min(2, len(ar) - i))
        if not self.allow_empty_source and width == 0 and ar:
            i = self.rng.randint(0, len(ar) - 1)
            width = 1
        name = self._gen_for(ar[i : i + width])
        parts: list[MorTerm] = [Id(Atom(o)) for o in ar[:i]]
        parts.append(Gen(name))
        parts.extend(Id(Atom(o)) for o in ar[i + width :])
        term = parts[0]
        for p in parts[1:]:
            term = Tens(term, p)
        tgt_ar = arity_of(self.env.gens[name][1])
        return term, ar[:i] + tgt_ar + ar[i + width :]

    def term_from(self, ar: tuple[str, ...], layers: int) -> tuple[MorTerm, tuple[str, ...]]:
        """A random term with the given source fringe."""
        if layers == 0:
            parts: list[MorTerm] = [Id(Atom(o)) for o in ar]
            if not parts:
                return Id(Unit()), ar
            term = parts[0]
            for p in parts[1:]:
                term = Tens(term, p)
            return term, ar
        term, cur = self.layer(ar)
        for _ in range(layers - 1):
            nxt, cur = self.layer(cur)
            term = StrictComp(term, nxt)
        return term, cur

    def rand_term(self, max_layers: int = 4) -> tuple[MorTerm, tuple[str, ...], tuple[str, ...]]:
        src = tuple(self.rng.choice(OBJECTS) for _ in range(self.rng.randint(0, 4)))
        layers = self.rng.randint(1, max_layers)
        term, tgt = self.term_from(src, layers)
        return term, src, tgt
