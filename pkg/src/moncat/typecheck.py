"""Type inference and elaboration of goals.

Elaboration resolves bare identifiers (objects become identity wires,
generator and definition names become ``Gen`` nodes), infers the
structural isomorphisms required by ``;;`` and ``≡'``, and rejects
ill-typed input.  Elaborated terms contain no ``Ref``, ``StrictComp``
or ``Cast`` nodes: every composition junction has syntactically equal
interface trees, so types of subterms can always be recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .maclane import NotEquivalent, eval_maclane, find_maclane, is_trivial
from .objects import Atom, ObjTree, Tensor, Unit, arity_of
from .signature import Equation, Goal
from .terms import (
    Box,
    Cast,
    Comp,
    Gen,
    Id,
    MorTerm,
    Ref,
    StrictComp,
    Struct,
    Tens,
)


class TypecheckError(Exception):
    pass


@dataclass(frozen=True)
class Env:
    objects: frozenset[str]
    gens: dict[str, tuple[ObjTree, ObjTree]]  # generators and definitions


@dataclass(frozen=True)
class TypedEquation:
    lhs: MorTerm
    rhs: MorTerm
    strict: bool
    src: ObjTree
    tgt: ObjTree


@dataclass(frozen=True)
class TypedGoal:
    goal: Goal
    env: Env
    definitions: dict[str, MorTerm]  # name -> elaborated body
    hypotheses: dict[str, TypedEquation]
    conclusion: TypedEquation | None


def infer(t: MorTerm, env: Env) -> tuple[ObjTree, ObjTree]:
    """Source and target trees of an elaborated term."""
    if isinstance(t, Gen):
        return env.gens[t.name]
    if isinstance(t, Id):
        return t.on, t.on
    if isinstance(t, Struct):
        return t.endpoints()
    if isinstance(t, Comp):
        return infer(t.f, env)[0], infer(t.g, env)[1]
    if isinstance(t, Tens):
        sf, tf = infer(t.f, env)
        sg, tg = infer(t.g, env)
        return Tensor(sf, sg), Tensor(tf, tg)
    if isinstance(t, Box):
        return infer(t.f, env)
    raise TypecheckError(f"term is not elaborated: {t!r}")


def _check_objects(tree: ObjTree, env: Env) -> None:
    if isinstance(tree, Atom):
        if tree.name not in env.objects:
            raise TypecheckError(f"unknown object {tree.name!r}")
    elif isinstance(tree, Tensor):
        _check_objects(tree.left, env)
        _check_objects(tree.right, env)


def elaborate(t: MorTerm, env: Env) -> MorTerm:
    """Resolve identifiers and insert inferred structural morphisms."""
    if isinstance(t, Ref):
        if t.name in env.objects:
            return Id(Atom(t.name))
        if t.name in env.gens:
            return Gen(t.name)
        raise TypecheckError(f"unknown identifier {t.name!r}")
    if isinstance(t, Gen):
        if t.name not in env.gens:
            raise TypecheckError(f"unknown generator {t.name!r}")
        return t
    if isinstance(t, Id):
        _check_objects(t.on, env)
        return t
    if isinstance(t, Struct):
        for a in t.args:
            _check_objects(a, env)
        return t
    if isinstance(t, Tens):
        return Tens(elaborate(t.f, env), elaborate(t.g, env))
    if isinstance(t, Box):
        return Box(elaborate(t.f, env))
    if isinstance(t, (Comp, StrictComp)):
        # plain ';' with merely-equivalent interfaces gets the same inferred
        # structural morphism as ';;' (the two spellings only differ in intent)
        f = elaborate(t.f, env)
        g = elaborate(t.g, env)
        tf = infer(f, env)[1]
        sg = infer(g, env)[0]
        try:
            m = find_maclane(tf, sg)
        except NotEquivalent as exc:
            raise TypecheckError(
                f"cannot compose: target {_show(tf)} does not match source {_show(sg)}"
            ) from exc
        if is_trivial(m):
            return Comp(f, g)
        return Comp(f, Comp(eval_maclane(m), g))
    if isinstance(t, Cast):
        raise TypecheckError("cast is only meaningful inside an equation")
    raise TypecheckError(f"cannot elaborate {t!r}")


def _show(tree: ObjTree) -> str:
    from .objects import obj_to_text

    return obj_to_text(tree)


def elaborate_equation(eq: Equation, env: Env) -> TypedEquation:
    lhs = elaborate(eq.lhs, env)
    rhs = elaborate(eq.rhs, env)
    sl, tl = infer(lhs, env)
    sr, tr = infer(rhs, env)
    if sl == sr and tl == tr:
        return TypedEquation(lhs, rhs, eq.strict, sl, tl)
    if arity_of(sl) != arity_of(sr) or arity_of(tl) != arity_of(tr):
        raise TypecheckError("equation sides have inequivalent types")
    rhs = _cast_to(rhs, sl, tl, env)
    return TypedEquation(lhs, rhs, eq.strict, sl, tl)


def _cast_to(t: MorTerm, src: ObjTree, tgt: ObjTree, env: Env) -> MorTerm:
    """Wrap an elaborated term so it acquires the given endpoint trees."""
    s, tt = infer(t, env)
    pre = find_maclane(src, s)
    post = find_maclane(tt, tgt)
    out = t
    if not is_trivial(post):
        out = Comp(out, eval_maclane(post))
    if not is_trivial(pre):
        out = Comp(eval_maclane(pre), out)
    return out


def typecheck(goal: Goal) -> TypedGoal:
    """Elaborate a parsed goal into a fully explicit one."""
    env = Env(
        objects=frozenset(goal.signature.objects),
        gens={g.name: (g.src, g.tgt) for g in goal.signature.generators.values()},
    )
    definitions: dict[str, MorTerm] = {}
    for d in goal.definitions:
        body = elaborate(d.body, env)
        env.gens[d.name] = infer(body, env)
        definitions[d.name] = body
    hypotheses = {h.name: elaborate_equation(h.eq, env) for h in goal.hypotheses}
    conclusion = None
    if goal.conclusion is not None:
        conclusion = elaborate_equation(goal.conclusion, env)
    return TypedGoal(goal, env, definitions, hypotheses, conclusion)


def substitute(t: MorTerm, name: str, body: MorTerm) -> MorTerm:
    """Replace every ``Gen(name)`` by ``body`` (used by unfold)."""
    if isinstance(t, Gen) and t.name == name:
        return body
    if isinstance(t, Comp):
        return Comp(substitute(t.f, name, body), substitute(t.g, name, body))
    if isinstance(t, StrictComp):
        return StrictComp(substitute(t.f, name, body), substitute(t.g, name, body))
    if isinstance(t, Tens):
        return Tens(substitute(t.f, name, body), substitute(t.g, name, body))
    if isinstance(t, Box):
        return Box(substitute(t.f, name, body))
    if isinstance(t, Cast):
        return Cast(substitute(t.f, name, body))
    return t
