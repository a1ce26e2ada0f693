"""Parser unit tests: aliases, declarations, round trips, errors."""

import pytest

from moncat.objects import Atom, Tensor, arity_of
from moncat.parser import ParseError, parse_goal, parse_term
from moncat.terms import Box, Comp, Gen, Id, Ref, StrictComp, Struct, Tens, print_term
from moncat.typecheck import elaborate, infer, typecheck


def test_ascii_aliases_normalize():
    goal = parse_goal("m : M*M -> M")
    decl = goal.signature.generators["m"]
    assert decl.src == Tensor(Atom("M"), Atom("M"))
    assert decl.tgt == Atom("M")
    assert goal.signature.objects == ("M",)


def test_object_declaration_and_comments():
    goal = parse_goal(
        """
        X : object  # explicit object
        f : X ~> X
        """
    )
    assert goal.signature.objects == ("X",)
    assert "f" in goal.signature.generators


def test_full_goal_structure(composite_monoid_text):
    goal = parse_goal(composite_monoid_text)
    assert set(goal.signature.generators) == {"m", "n", "x"}
    assert [h.name for h in goal.hypotheses] == ["mA", "nA", "nx", "mx"]
    assert [d.name for d in goal.definitions] == ["mn"]
    assert goal.conclusion is not None and goal.conclusion.strict


def test_identity_goal_elaborates_bare_objects():
    goal = parse_goal("h : A -> A\n===\nA == A")
    tg = typecheck(goal)
    assert tg.conclusion.lhs == Id(Atom("A"))
    assert not goal.conclusion.strict


def test_tensor_chain_of_objects_is_identity():
    t = parse_term("A⊗B")
    assert t == Id(Tensor(Atom("A"), Atom("B")))


def test_struct_leaves_and_inverse():
    t = parse_term("assoc[A,B,C]~")
    assert isinstance(t, Struct) and t.kind == "assoc" and t.inv
    with pytest.raises(ParseError):
        parse_term("assoc[A,B]")
    u = parse_term("unitl[A]")
    assert isinstance(u, Struct) and not u.inv


def test_boxes_and_composition_operators():
    t = parse_term("m·[n·M ; x]·N ;; m·n")
    assert isinstance(t, StrictComp)
    assert isinstance(t.f, Tens)
    box = t.f.f.g
    assert isinstance(box, Box) and isinstance(box.f, Comp)


def test_print_parse_round_trip(composite_monoid_text):
    tg = typecheck(parse_goal(composite_monoid_text))
    for eq in list(tg.hypotheses.values()) + [tg.conclusion]:
        for term in (eq.lhs, eq.rhs):
            text = print_term(term)
            again = elaborate(parse_term(text), tg.env)
            assert again == term, text


def test_style_tags():
    goal = parse_goal("s : A ~> A @shape=circle,color=red")
    assert goal.signature.generators["s"].style == {
        "shape": "circle",
        "color": "red",
    }


def test_duplicate_and_reserved_names_rejected():
    with pytest.raises(ParseError):
        parse_goal("f : A ~> A\nf : A ~> A")
    with pytest.raises(ParseError):
        parse_goal("assoc : A ~> A")


def test_separator_required_before_conclusion():
    goal = parse_goal("f : A ~> A\n===\nf == f")
    assert goal.conclusion is not None
    with pytest.raises(ParseError):
        parse_goal("f : A ~> A\n===\nf == f\n===\nf == f")


def test_unknown_character_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_goal("f : A ~> A\n===\nf %% f")
    assert exc.value.line == 3


def test_primed_identifiers():
    goal = parse_goal("f' : A ~> A\n===\nf' == f'")
    assert "f'" in goal.signature.generators
