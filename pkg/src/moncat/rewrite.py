"""Hypothesis-driven rewriting, proof traces, script export and replay.

A proof trace records unfoldings, transitivity steps (switching to a
different expression for the same diagram, with the rewrite target
bracketed), hypothesis rewrites and a final closing check.  Traces can
be exported either in a neutral line-oriented format or as a
Rocq-flavoured tactic script, and replayed against the goal: every
transitivity is validated by the decision procedure, every rewrite by
exact matching of the bracketed subterm against the hypothesis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .diagram import LaidOutDiagram, StringDiagram, diagram_equiv, diagram_of_term
from .normalize import Verdict, decide_equal
from .parser import ParseError, parse_term
from .signature import Goal
from .strict import inline_boxes
from .terms import Box, Cast, Comp, MorTerm, StrictComp, Tens, print_term
from .typecheck import Env, TypedGoal, _cast_to, elaborate, infer, substitute, typecheck


@dataclass(frozen=True)
class Unfold:
    name: str


@dataclass(frozen=True)
class Trans:
    side: str  # "l" or "r"
    term: MorTerm


@dataclass(frozen=True)
class Rewrite:
    hyp: str
    direction: str  # "lr" or "rl"


@dataclass(frozen=True)
class Close:
    pass


Step = Union[Unfold, Trans, Rewrite, Close]


@dataclass
class ProofTrace:
    goal: Goal
    steps: list[Step]


@dataclass(frozen=True)
class FailureAt:
    step: int
    reason: str


@dataclass(frozen=True)
class Ok:
    pass


# -- diagram-level matching ------------------------------------------------


def find_matches(
    ld: LaidOutDiagram, box_id: int, tg: TypedGoal
) -> list[tuple[str, str]]:
    """Hypotheses whose LHS (lr) or RHS (rl) matches the box content."""
    node = ld.diagram.nodes.get(box_id)
    if node is None or node.kind != "box":
        raise KeyError(f"no box {box_id}")
    inner = node.inner
    matches: list[tuple[str, str]] = []
    for h in tg.goal.hypotheses:
        eq = tg.hypotheses[h.name]
        for side_term, direction in ((eq.lhs, "lr"), (eq.rhs, "rl")):
            cand = diagram_of_term(inline_boxes(side_term), tg.env)
            if diagram_equiv(inner, cand) is True:
                matches.append((h.name, direction))
    return matches


def apply_rewrite(
    ld: LaidOutDiagram, box_id: int, hyp: str, direction: str, tg: TypedGoal
) -> LaidOutDiagram:
    """Replace the box content with the other member of the hypothesis."""
    if (hyp, direction) not in find_matches(ld, box_id, tg):
        raise ValueError(f"hypothesis {hyp!r} does not match box {box_id}")
    eq = tg.hypotheses[hyp]
    replacement = eq.rhs if direction == "lr" else eq.lhs
    from .diagram import Node, layout

    new_inner = diagram_of_term(inline_boxes(replacement), tg.env)
    d = ld.diagram
    old = d.nodes[box_id]
    out = StringDiagram(d.inputs, d.outputs, dict(d.nodes), dict(d.edges), d._next)
    out.nodes[box_id] = Node(
        "box", new_inner.inputs, new_inner.outputs, inner=new_inner, outline=old.outline
    )
    return layout(out)


# -- term-level rewriting (used by replay) ---------------------------------


def rewrite_term(
    t: MorTerm, pattern: MorTerm, replacement: MorTerm, env: Env
) -> tuple[MorTerm, int]:
    """Replace every box whose content equals the pattern; counts matches."""
    if isinstance(t, Box):
        if decide_equal(env, t.f, pattern) is Verdict.EQUAL:
            src, tgt = infer(t.f, env)
            return Box(_cast_to(replacement, src, tgt, env)), 1
        inner, n = rewrite_term(t.f, pattern, replacement, env)
        return Box(inner), n
    if isinstance(t, (Comp, StrictComp, Tens)):
        f, nf = rewrite_term(t.f, pattern, replacement, env)
        g, ng = rewrite_term(t.g, pattern, replacement, env)
        return type(t)(f, g), nf + ng
    if isinstance(t, Cast):
        f, n = rewrite_term(t.f, pattern, replacement, env)
        return Cast(f), n
    return t, 0


# -- replay ----------------------------------------------------------------


def replay(goal: Goal, steps: list[Step]) -> Union[Ok, FailureAt]:
    """Validate a proof trace step by step against the goal."""
    try:
        tg = typecheck(goal)
    except Exception as exc:  # surfaced as a failure before any step
        return FailureAt(-1, f"goal does not typecheck: {exc}")
    if tg.conclusion is None:
        return FailureAt(-1, "goal has no conclusion")
    env = tg.env
    lhs, rhs = tg.conclusion.lhs, tg.conclusion.rhs
    closed = False
    for i, step in enumerate(steps):
        if isinstance(step, Unfold):
            if step.name not in tg.definitions:
                return FailureAt(i, f"unknown definition {step.name!r}")
            body = tg.definitions[step.name]
            lhs = substitute(lhs, step.name, body)
            rhs = substitute(rhs, step.name, body)
        elif isinstance(step, Trans):
            try:
                term = elaborate(step.term, env)
            except Exception as exc:
                return FailureAt(i, f"bad term: {exc}")
            cur = lhs if step.side == "l" else rhs
            verdict = decide_equal(env, cur, term)
            if verdict is not Verdict.EQUAL:
                return FailureAt(i, verdict.value)
            if step.side == "l":
                lhs = term
            else:
                rhs = term
        elif isinstance(step, Rewrite):
            if step.hyp not in tg.hypotheses:
                return FailureAt(i, f"unknown hypothesis {step.hyp!r}")
            eq = tg.hypotheses[step.hyp]
            pattern = eq.lhs if step.direction == "lr" else eq.rhs
            replacement = eq.rhs if step.direction == "lr" else eq.lhs
            lhs, nl = rewrite_term(lhs, pattern, replacement, env)
            rhs, nr = rewrite_term(rhs, pattern, replacement, env)
            if nl + nr == 0:
                return FailureAt(i, "NoMatch")
        elif isinstance(step, Close):
            verdict = decide_equal(env, lhs, rhs)
            if verdict is not Verdict.EQUAL:
                return FailureAt(i, verdict.value)
            closed = True
        else:
            return FailureAt(i, f"unknown step {step!r}")
    if not closed:
        return FailureAt(len(steps), "trace does not end with a close step")
    return Ok()


# -- script formats --------------------------------------------------------


def export_script(trace: ProofTrace, dialect: str = "neutral") -> str:
    if dialect == "neutral":
        lines = []
        for step in trace.steps:
            if isinstance(step, Unfold):
                lines.append(f"unfold {step.name}")
            elif isinstance(step, Trans):
                lines.append(f"trans-{step.side} {print_term(step.term)}")
            elif isinstance(step, Rewrite):
                arrow = "<- " if step.direction == "rl" else ""
                lines.append(f"rewrite {arrow}{step.hyp}")
            else:
                lines.append("close")
        return "\n".join(lines) + "\n"
    if dialect == "rocq":
        return _export_rocq(trace)
    raise ValueError(f"unknown dialect {dialect!r}")


def _export_rocq(trace: ProofTrace) -> str:
    concl = trace.goal.conclusion
    eqsym = "≡'" if concl and concl.strict else "≡"
    header = ""
    if concl is not None:
        header = f"Lemma goal: {print_term(concl.lhs)} {eqsym} {print_term(concl.rhs)}.\n"
    out = [header + "Proof."]
    for step in trace.steps:
        if isinstance(step, Unfold):
            out.append(f"  unfold {step.name}.")
        elif isinstance(step, Trans):
            tactic = "mcat." if step.side == "l" else "2: mcat."
            out.append(f"\n  transitivity ({print_term(step.term)}). {tactic}")
        elif isinstance(step, Rewrite):
            dash = "-" if step.direction == "rl" else ""
            out.append(f"  rewrite {dash}{step.hyp}.")
        else:
            out.append("\n  mcat.")
    out.append("Qed.")
    return "\n".join(out) + "\n"


_ROCQ_TRANS = re.compile(r"transitivity\s*\((?P<term>.*)\)\s*\.\s*(?P<tac>2\s*:\s*mcat\.|mcat\.)?")
_ROCQ_REWRITE = re.compile(r"rewrite\s*(?P<dash><-|-)?\s*(?P<name>[A-Za-z_][A-Za-z0-9_']*)\s*\.")
_ROCQ_UNFOLD = re.compile(r"unfold\s+(?P<name>[A-Za-z_][A-Za-z0-9_']*)\s*\.")


def parse_script(text: str, goal: Optional[Goal] = None) -> list[Step]:
    """Parse a proof script, accepting both the neutral and Rocq dialects."""
    if re.search(r"\b(Proof\.|transitivity|Qed\.)", text):
        return _parse_rocq(text)
    steps: list[Step] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "unfold":
            steps.append(Unfold(rest))
        elif head in ("trans", "trans-l", "trans-r"):
            side = "r" if head == "trans-r" else "l"
            steps.append(Trans(side, parse_term(rest, line_no)))
        elif head == "rewrite":
            if rest.startswith("<-"):
                steps.append(Rewrite(rest[2:].strip(), "rl"))
            else:
                steps.append(Rewrite(rest, "lr"))
        elif head == "close":
            steps.append(Close())
        else:
            raise ParseError(f"unknown script step {head!r}", line_no, 1)
    return steps


def _parse_rocq(text: str) -> list[Step]:
    steps: list[Step] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("Lemma", "Proof", "Qed", "(*")):
            continue
        m = _ROCQ_TRANS.search(line)
        if m:
            side = "l" if not m.group("tac") or m.group("tac") == "mcat." else "r"
            steps.append(Trans(side, parse_term(m.group("term"), line_no)))
            continue
        m = _ROCQ_UNFOLD.fullmatch(line)
        if m:
            steps.append(Unfold(m.group("name")))
            continue
        m = _ROCQ_REWRITE.fullmatch(line)
        if m:
            steps.append(Rewrite(m.group("name"), "rl" if m.group("dash") else "lr"))
            continue
        if line == "mcat.":
            steps.append(Close())
            continue
        raise ParseError(f"cannot parse script line {line!r}", line_no, 1)
    return steps
