"""JSON-over-HTTP session service for the interactive editor.

Each session holds one goal with a laid-out diagram per conclusion
side, a replay-valid proof trace, and an undo stack.  Every response
carries a revision number; mutating requests must echo the current
revision and are rejected with 409 when stale, so two conflicting
rewrites cannot both succeed.
"""

from __future__ import annotations

import copy
import secrets
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .diagram import (
    DiagramError,
    LaidOutDiagram,
    box_polygon,
    diagram_equiv,
    diagram_of_term,
    extract_expr,
    inline_all_boxes,
    layout,
    unbox,
)
from .normalize import Verdict, decide_equal
from .parser import ParseError, parse_goal
from .rewrite import (
    Close,
    ProofTrace,
    Rewrite,
    Trans,
    Unfold,
    apply_rewrite,
    export_script,
    find_matches,
)
from .terms import print_term
from .typecheck import TypecheckError, TypedGoal, substitute, typecheck

SCHEMA_VERSION = "1"


@dataclass
class Session:
    id: str
    tg: TypedGoal
    lhs: LaidOutDiagram
    rhs: LaidOutDiagram
    steps: list = field(default_factory=list)
    unfolded: list[str] = field(default_factory=list)
    revision: int = 0
    undo_stack: list = field(default_factory=list)

    def side(self, which: str) -> LaidOutDiagram:
        if which == "l":
            return self.lhs
        if which == "r":
            return self.rhs
        raise HTTPException(400, detail={"code": "BadSide", "message": which})

    def set_side(self, which: str, ld: LaidOutDiagram) -> None:
        if which == "l":
            self.lhs = ld
        else:
            self.rhs = ld

    def snapshot(self) -> None:
        self.undo_stack.append(
            (
                copy.deepcopy(self.lhs),
                copy.deepcopy(self.rhs),
                list(self.steps),
                list(self.unfolded),
            )
        )

    def done(self) -> bool:
        return diagram_equiv(self.lhs.diagram, self.rhs.diagram) is True


class CreateSession(BaseModel):
    goal: str


class Mutation(BaseModel):
    revision: int


class BoxRequest(Mutation):
    side: str
    polygon: list[tuple[float, float]]


class RewriteRequest(Mutation):
    side: str
    box: int
    hyp: str
    direction: str


class DragRequest(Mutation):
    side: str
    node: int
    x: float
    y: float


class UnfoldRequest(Mutation):
    name: str


class UnboxRequest(Mutation):
    side: str
    box: int


def diagram_json(ld: LaidOutDiagram) -> dict:
    d = ld.diagram
    nodes = []
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        x, y = ld.node_pos[nid]
        w, h = ld.node_size[nid]
        entry = {
            "id": nid,
            "kind": n.kind,
            "name": n.name,
            "src": list(n.src),
            "tgt": list(n.tgt),
            "x": x,
            "y": y,
            "w": w,
            "h": h,
            "shape": n.style.get("shape", "rect"),
            "color": n.style.get("color"),
            "outline": n.outline,
        }
        if n.kind == "box":
            entry["inner"] = print_term(extract_expr(n.inner))
        nodes.append(entry)
    edges = [
        {"id": eid, "obj": d.edges[eid].obj, "route": ld.edge_routes[eid]}
        for eid in sorted(d.edges)
    ]
    return {
        "schema": SCHEMA_VERSION,
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
        "nodes": nodes,
        "edges": edges,
        "width": ld.width,
        "height": ld.height,
    }


def _session_json(s: Session) -> dict:
    return {
        "id": s.id,
        "revision": s.revision,
        "done": s.done(),
        "lhs": diagram_json(s.lhs),
        "rhs": diagram_json(s.rhs),
        "definitions": sorted(s.tg.definitions),
        "unfolded": list(s.unfolded),
        "hypotheses": {
            name: {"lhs": print_term(eq.lhs), "rhs": print_term(eq.rhs)}
            for name, eq in s.tg.hypotheses.items()
        },
        "steps": [_step_json(st) for st in s.steps],
    }


def _step_json(step) -> dict:
    if isinstance(step, Unfold):
        return {"kind": "unfold", "name": step.name}
    if isinstance(step, Trans):
        return {"kind": "trans", "side": step.side, "term": print_term(step.term)}
    if isinstance(step, Rewrite):
        return {"kind": "rewrite", "hyp": step.hyp, "direction": step.direction}
    return {"kind": "close"}


def create_app() -> FastAPI:
    app = FastAPI(title="moncat session service")
    sessions: dict[str, Session] = {}

    def get_session(sid: str) -> Session:
        s = sessions.get(sid)
        if s is None:
            raise HTTPException(404, detail={"code": "NoSession", "message": sid})
        return s

    def check_revision(s: Session, revision: int) -> None:
        if revision != s.revision:
            raise HTTPException(
                409,
                detail={
                    "code": "StaleRevision",
                    "message": f"expected {s.revision}, got {revision}",
                },
            )

    @app.post("/sessions")
    def create_session(req: CreateSession):
        try:
            tg = typecheck(parse_goal(req.goal))
        except (ParseError, TypecheckError) as exc:
            raise HTTPException(
                422, detail={"code": type(exc).__name__, "message": str(exc)}
            )
        if tg.conclusion is None:
            raise HTTPException(
                422, detail={"code": "NoConclusion", "message": "goal has no conclusion"}
            )
        styles = {n: g.style for n, g in tg.goal.signature.generators.items()}
        sid = secrets.token_hex(8)
        s = Session(
            sid,
            tg,
            layout(diagram_of_term(tg.conclusion.lhs, tg.env, styles)),
            layout(diagram_of_term(tg.conclusion.rhs, tg.env, styles)),
        )
        sessions[sid] = s
        return _session_json(s)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        return _session_json(get_session(sid))

    @app.post("/sessions/{sid}/box")
    def post_box(sid: str, req: BoxRequest):
        s = get_session(sid)
        check_revision(s, req.revision)
        ld = s.side(req.side)
        try:
            new_ld, box_id = box_polygon(ld, [tuple(p) for p in req.polygon])
        except DiagramError as exc:
            raise HTTPException(
                422, detail={"code": type(exc).__name__, "message": str(exc)}
            )
        s.snapshot()
        s.set_side(req.side, new_ld)
        s.revision += 1
        matches = find_matches(new_ld, box_id, s.tg)
        return {
            "box": box_id,
            "matches": [{"hyp": h, "direction": d} for h, d in matches],
            **_session_json(s),
        }

    @app.get("/sessions/{sid}/matches")
    def get_matches(sid: str, side: str, box: int):
        s = get_session(sid)
        try:
            matches = find_matches(s.side(side), box, s.tg)
        except KeyError as exc:
            raise HTTPException(404, detail={"code": "NoBox", "message": str(exc)})
        return {"matches": [{"hyp": h, "direction": d} for h, d in matches]}

    @app.post("/sessions/{sid}/rewrite")
    def post_rewrite(sid: str, req: RewriteRequest):
        s = get_session(sid)
        check_revision(s, req.revision)
        ld = s.side(req.side)
        try:
            boxed_term = extract_expr(ld.diagram)
            new_ld = apply_rewrite(ld, req.box, req.hyp, req.direction, s.tg)
        except (KeyError, ValueError, DiagramError) as exc:
            raise HTTPException(
                422, detail={"code": "NoMatch", "message": str(exc)}
            )
        s.snapshot()
        # the box stays only inside the recorded script: the live diagram
        # is flattened again so the next polygon starts from a clean scene
        flat = layout(inline_all_boxes(new_ld.diagram))
        s.set_side(req.side, flat)
        s.steps.append(Trans(req.side, boxed_term))
        s.steps.append(Rewrite(req.hyp, req.direction))
        s.revision += 1
        return _session_json(s)

    @app.post("/sessions/{sid}/drag")
    def post_drag(sid: str, req: DragRequest):
        s = get_session(sid)
        check_revision(s, req.revision)
        ld = s.side(req.side)
        if req.node not in ld.node_pos:
            raise HTTPException(404, detail={"code": "NoNode", "message": str(req.node)})
        ld.node_pos[req.node] = (req.x, req.y)
        s.revision += 1
        return _session_json(s)

    @app.post("/sessions/{sid}/unfold")
    def post_unfold(sid: str, req: UnfoldRequest):
        s = get_session(sid)
        check_revision(s, req.revision)
        if req.name not in s.tg.definitions or req.name in s.unfolded:
            raise HTTPException(
                422, detail={"code": "NoDefinition", "message": req.name}
            )
        s.snapshot()
        body = s.tg.definitions[req.name]
        styles = {n: g.style for n, g in s.tg.goal.signature.generators.items()}
        lhs, rhs = s.tg.conclusion.lhs, s.tg.conclusion.rhs
        for name in s.unfolded + [req.name]:
            lhs = substitute(lhs, name, s.tg.definitions[name])
            rhs = substitute(rhs, name, s.tg.definitions[name])
        s.lhs = layout(diagram_of_term(lhs, s.tg.env, styles))
        s.rhs = layout(diagram_of_term(rhs, s.tg.env, styles))
        s.unfolded.append(req.name)
        s.steps.append(Unfold(req.name))
        s.revision += 1
        return _session_json(s)

    @app.post("/sessions/{sid}/unbox")
    def post_unbox(sid: str, req: UnboxRequest):
        s = get_session(sid)
        check_revision(s, req.revision)
        ld = s.side(req.side)
        try:
            flat = unbox(ld.diagram, req.box)
        except DiagramError as exc:
            raise HTTPException(404, detail={"code": "NoBox", "message": str(exc)})
        s.snapshot()
        s.set_side(req.side, layout(flat))
        s.revision += 1
        return _session_json(s)

    @app.post("/sessions/{sid}/undo")
    def post_undo(sid: str, req: Mutation):
        s = get_session(sid)
        check_revision(s, req.revision)
        if not s.undo_stack:
            raise HTTPException(422, detail={"code": "NothingToUndo", "message": ""})
        s.lhs, s.rhs, s.steps, s.unfolded = s.undo_stack.pop()
        s.revision += 1
        return _session_json(s)

    @app.get("/sessions/{sid}/extract")
    def get_extract(sid: str):
        s = get_session(sid)
        return {
            "lhs": print_term(extract_expr(s.lhs.diagram)),
            "rhs": print_term(extract_expr(s.rhs.diagram)),
        }

    @app.get("/sessions/{sid}/export")
    def get_export(sid: str, format: str = "neutral"):
        s = get_session(sid)
        steps = list(s.steps)
        if s.done():
            steps.append(Close())
        trace = ProofTrace(s.tg.goal, steps)
        try:
            return {"script": export_script(trace, format), "done": s.done()}
        except ValueError as exc:
            raise HTTPException(422, detail={"code": "BadDialect", "message": str(exc)})

    @app.get("/schema")
    def get_schema():
        return {
            "version": SCHEMA_VERSION,
            "diagram": {
                "inputs": "list of object names, left to right",
                "outputs": "list of object names, left to right",
                "nodes": "id, kind gen|box, name, src, tgt, x, y, w, h, shape, color, outline, inner",
                "edges": "id, obj, route (polyline points)",
                "width": "canvas width",
                "height": "canvas height",
            },
            "session": "id, revision, done, lhs, rhs, definitions, unfolded, hypotheses, steps",
        }

    return app
