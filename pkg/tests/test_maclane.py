"""Structural-isomorphism inference: totality, endpoints, erasure."""

import random

import pytest

from moncat.maclane import (
    MId,
    NotEquivalent,
    eval_maclane,
    find_maclane,
    is_trivial,
    source,
    target,
)
from moncat.normalize import norm
from moncat.objects import Atom, Tensor, Unit, arity_of
from moncat.strict import strictify
from moncat.typecheck import Env, infer

from conftest import OBJECTS, rand_tree, rand_tree_over

ENV = Env(objects=frozenset(OBJECTS), gens={})


def test_identical_trees_give_identity():
    a = Tensor(Atom("A"), Atom("B"))
    assert find_maclane(a, a) == MId(a)
    assert is_trivial(find_maclane(a, a))


def test_rebracketing_witness_endpoints():
    a = Tensor(Tensor(Atom("A"), Atom("B")), Atom("C"))
    b = Tensor(Atom("A"), Tensor(Atom("B"), Atom("C")))
    w = find_maclane(a, b)
    assert source(w) == a and target(w) == b


def test_unit_padding_witness():
    a = Tensor(Unit(), Tensor(Atom("A"), Unit()))
    b = Atom("A")
    w = find_maclane(a, b)
    assert source(w) == a and target(w) == b


def test_different_arities_rejected():
    with pytest.raises(NotEquivalent):
        find_maclane(Atom("A"), Atom("B"))
    with pytest.raises(NotEquivalent):
        find_maclane(Tensor(Atom("A"), Atom("B")), Atom("A"))


def test_eval_maclane_is_well_typed_and_erases():
    rng = random.Random(7)
    for _ in range(100):
        ar = tuple(rng.choice(OBJECTS) for _ in range(rng.randint(0, 4)))
        a = rand_tree_over(rng, ar)
        b = rand_tree_over(rng, ar)
        term = eval_maclane(find_maclane(a, b))
        src, tgt = infer(term, ENV)
        assert src == a and tgt == b
        # structural morphisms denote identities: zero rows after erasure
        assert norm(strictify(term, ENV)).rows == ()


def test_totality_on_random_equal_arity_pairs():
    rng = random.Random(11)
    for _ in range(300):
        ar = tuple(rng.choice(OBJECTS) for _ in range(rng.randint(0, 5)))
        find_maclane(rand_tree_over(rng, ar), rand_tree_over(rng, ar))


def test_random_unequal_fringes_rejected():
    rng = random.Random(13)
    hits = 0
    for _ in range(200):
        a = rand_tree(rng)
        b = rand_tree(rng)
        if arity_of(a) == arity_of(b):
            continue
        hits += 1
        with pytest.raises(NotEquivalent):
            find_maclane(a, b)
    assert hits > 50
