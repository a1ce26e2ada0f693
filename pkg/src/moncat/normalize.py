"""Row normal forms and the equality decision procedure.

A normal form is a sequence of rows; a row interleaves identity wires
with atoms.  Normalisation plays "tetris": an atom sinks from its row
into the next one whenever its entire output segment lands on identity
wires there.  At the fixpoint every atom sits as low as possible, which
makes the normal form canonical whenever every atom has at least one
output wire.  Atoms with empty target break uniqueness, so equality
checks report Unknown instead of NotEqual in their presence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .objects import Arity, arity_of
from .strict import (
    AAtom,
    AComp,
    AId,
    AMor,
    ATens,
    BoxPayload,
    asrc,
    has_empty_target,
    inline_boxes,
    strictify,
)
from .terms import MorTerm
from .typecheck import Env, elaborate, infer


@dataclass(frozen=True)
class BoxNF:
    """Normalized payload of an opaque box atom."""

    inner: "NMor"


@dataclass(frozen=True)
class Wire:
    obj: str


@dataclass(frozen=True)
class Cell:
    atom: Union[str, BoxNF]
    src: Arity
    tgt: Arity


Entry = Union[Wire, Cell]


def _esrc(e: Entry) -> Arity:
    return (e.obj,) if isinstance(e, Wire) else e.src


def _etgt(e: Entry) -> Arity:
    return (e.obj,) if isinstance(e, Wire) else e.tgt


@dataclass(frozen=True)
class Row:
    entries: tuple[Entry, ...]

    @property
    def src(self) -> Arity:
        return sum((_esrc(e) for e in self.entries), ())

    @property
    def tgt(self) -> Arity:
        return sum((_etgt(e) for e in self.entries), ())

    def has_cells(self) -> bool:
        return any(isinstance(e, Cell) for e in self.entries)


@dataclass(frozen=True)
class NMor:
    src: Arity
    rows: tuple[Row, ...]

    @property
    def tgt(self) -> Arity:
        return self.rows[-1].tgt if self.rows else self.src


class Verdict(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"


# -- sinking ---------------------------------------------------------------


def _try_sink_one(upper: Row, lower: Row) -> tuple[Row, Row] | None:
    """Move the leftmost movable atom of ``upper`` into ``lower``.

    Returns the updated pair, or None when no atom can sink.
    """
    out_off = 0
    for idx, entry in enumerate(upper.entries):
        width = len(_etgt(entry))
        if isinstance(entry, Cell):
            moved = _insert_cell(lower, entry, out_off)
            if moved is not None:
                new_upper = Row(
                    upper.entries[:idx]
                    + tuple(Wire(x) for x in entry.src)
                    + upper.entries[idx + 1 :]
                )
                return new_upper, moved
        out_off += width
    return None


def _insert_cell(lower: Row, cell: Cell, a: int) -> Row | None:
    """Place ``cell`` (outputs spanning [a, a+|tgt|) of lower's source) into lower.

    Succeeds only when the whole segment lands on identity wires and no
    other atom of the row straddles the segment.
    """
    b = a + len(cell.tgt)
    before: list[Entry] = []
    after: list[Entry] = []
    off = 0
    for entry in lower.entries:
        start, end = off, off + len(_esrc(entry))
        off = end
        if isinstance(entry, Wire):
            if end <= a:
                before.append(entry)
            elif start >= b:
                after.append(entry)
            else:
                continue  # consumed by the sinking cell
        else:
            if start == end:  # zero-width atom (empty source)
                if a == b and start == a:
                    # nothing ties the order here; the sinking atom keeps its
                    # row position, so residents at the boundary go after it
                    after.append(entry)
                elif end <= a:
                    before.append(entry)
                elif start >= b:
                    after.append(entry)
                else:
                    return None  # sits strictly inside the landing segment
            else:
                if end <= a:
                    before.append(entry)
                elif start >= b:
                    after.append(entry)
                else:
                    return None  # a blocking atom consumes part of the segment
    return Row(tuple(before) + (cell,) + tuple(after))


def sink_rows(upper: Row, lower: Row) -> Union[Row, tuple[Row, Row]]:
    """Sink every atom of ``upper`` that lands on identity wires of ``lower``.

    Atoms are tried left to right, repeatedly, until none moves.  If the
    upper row ends up atom-free the two rows merge into one.
    """
    while True:
        step = _try_sink_one(upper, lower)
        if step is None:
            break
        upper, lower = step
    if not upper.has_cells():
        return lower
    return upper, lower


def _sink_all(rows: list[Row]) -> list[Row]:
    changed = True
    while changed:
        changed = False
        i = len(rows) - 2
        while i >= 0:
            result = sink_rows(rows[i], rows[i + 1])
            if isinstance(result, Row):
                rows[i : i + 2] = [result]
                changed = True
            else:
                if result != (rows[i], rows[i + 1]):
                    changed = True
                rows[i], rows[i + 1] = result
            i -= 1
    return rows


# -- normalisation ---------------------------------------------------------


def _raw_rows(u: AMor) -> list[Row]:
    """Rows of a strict morphism before any sinking; identity rows dropped."""
    if isinstance(u, AId):
        return []
    if isinstance(u, AAtom):
        atom = BoxNF(norm(u.ref.inner)) if isinstance(u.ref, BoxPayload) else u.ref
        return [Row((Cell(atom, u.src, u.tgt),))]
    if isinstance(u, AComp):
        return _raw_rows(u.f) + _raw_rows(u.g)
    # ATens: run the left operand first, padding each side with wires
    left_rows = _raw_rows(u.f)
    right_rows = _raw_rows(u.g)
    right_src = asrc(u.g)
    left_tgt = left_rows[-1].tgt if left_rows else asrc(u.f)
    padded = [Row(r.entries + tuple(Wire(x) for x in right_src)) for r in left_rows]
    padded += [Row(tuple(Wire(x) for x in left_tgt) + r.entries) for r in right_rows]
    return padded


def norm(u: AMor) -> NMor:
    """Canonical row normal form of a strict morphism."""
    rows = _sink_all(_raw_rows(u))
    return NMor(asrc(u), tuple(rows))


def nmor_equal(a: NMor, b: NMor) -> bool:
    return a == b


def nmor_has_empty_target(n: NMor) -> bool:
    for row in n.rows:
        for e in row.entries:
            if isinstance(e, Cell):
                if not e.tgt:
                    return True
                if isinstance(e.atom, BoxNF) and nmor_has_empty_target(e.atom.inner):
                    return True
    return False


def print_nmor(n: NMor) -> str:
    """Paper-style row syntax: rows joined by ';', entries by '·'."""
    if not n.rows:
        return "·".join(n.src) if n.src else "1"
    return " ; ".join(_print_row(r) for r in n.rows)


def _print_row(r: Row) -> str:
    parts = []
    for e in r.entries:
        if isinstance(e, Wire):
            parts.append(e.obj)
        elif isinstance(e.atom, BoxNF):
            parts.append("[" + print_nmor(e.atom.inner) + "]")
        else:
            parts.append(e.atom)
    return "·".join(parts)


# -- the decision procedure ------------------------------------------------


def decide_equal(env: Env, lhs: MorTerm, rhs: MorTerm) -> Verdict:
    """Decide whether two terms denote the same string diagram.

    Equal normal forms always mean the morphisms are equal.  Distinct
    normal forms mean inequality only when no atom has an empty target;
    otherwise uniqueness fails and the answer is Unknown.
    """
    lhs = elaborate(lhs, env)
    rhs = elaborate(rhs, env)
    sl, tl = infer(lhs, env)
    sr, tr = infer(rhs, env)
    if arity_of(sl) != arity_of(sr) or arity_of(tl) != arity_of(tr):
        return Verdict.NOT_EQUAL
    la = strictify(inline_boxes(lhs), env)
    ra = strictify(inline_boxes(rhs), env)
    if norm(la) == norm(ra):
        return Verdict.EQUAL
    if has_empty_target(la) or has_empty_target(ra):
        return Verdict.UNKNOWN
    return Verdict.NOT_EQUAL
