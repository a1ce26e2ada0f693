"""String diagrams as combinatorial data, with layout and extraction.

A diagram has ordered outer input/output ports, nodes (generators or
recursive boxes) and edges; every port is incident to exactly one edge
and the graph is acyclic.  Extraction reads the diagram line by line,
bottom up, gathering as many nodes as possible per line, which yields
the canonical normal-form expression.  Layout assigns nodes to the
extracted lines and relaxes wire positions with a fixed, deterministic
schedule, so re-rendering the same diagram is byte-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .objects import Arity, Atom, arity_of
from .normalize import BoxNF, Cell, NMor, Row, Wire, nmor_has_empty_target
from .terms import Box, Comp, Gen, Id, MorTerm, Struct, Tens
from .typecheck import Env, infer


class DiagramError(Exception):
    pass


class EdgeCrossesTwicePlus(DiagramError):
    pass


class BadAlternation(DiagramError):
    pass


class InvalidSubdiagram(DiagramError):
    pass


# Ports: ("src", i) outer input, ("tgt", i) outer output,
# ("out", node_id, k) node output, ("in", node_id, k) node input.
Port = tuple


@dataclass(frozen=True)
class Edge:
    producer: Port
    consumer: Port
    obj: str


@dataclass
class Node:
    kind: str  # "gen" or "box"
    src: Arity
    tgt: Arity
    name: Optional[str] = None
    inner: Optional["StringDiagram"] = None
    style: dict = field(default_factory=dict)
    outline: Optional[list[tuple[float, float]]] = None  # user polygon, boxes only


@dataclass
class StringDiagram:
    inputs: Arity
    outputs: Arity
    nodes: dict[int, Node]
    edges: dict[int, Edge]
    _next: int = 0

    def fresh(self) -> int:
        self._next += 1
        return self._next

    def producer_edge(self, port: Port) -> int:
        for eid, e in self.edges.items():
            if e.producer == port:
                return eid
        raise DiagramError(f"no edge produced at {port}")

    def consumer_edge(self, port: Port) -> int:
        for eid, e in self.edges.items():
            if e.consumer == port:
                return eid
        raise DiagramError(f"no edge consumed at {port}")


# -- construction from terms ----------------------------------------------


def _d_id(ar: Arity) -> StringDiagram:
    d = StringDiagram(ar, ar, {}, {})
    for i, obj in enumerate(ar):
        d.edges[d.fresh()] = Edge(("src", i), ("tgt", i), obj)
    return d


def _d_node(node: Node) -> StringDiagram:
    d = StringDiagram(node.src, node.tgt, {}, {})
    nid = d.fresh()
    d.nodes[nid] = node
    for i, obj in enumerate(node.src):
        d.edges[d.fresh()] = Edge(("src", i), ("in", nid, i), obj)
    for j, obj in enumerate(node.tgt):
        d.edges[d.fresh()] = Edge(("out", nid, j), ("tgt", j), obj)
    return d


def _shift_port(
    p: Port, node_map: dict[int, int], din: int, dout: int, src_tag: str, tgt_tag: str
) -> Port:
    if p[0] == "src":
        return (src_tag, p[1] + din)
    if p[0] == "tgt":
        return (tgt_tag, p[1] + dout)
    return (p[0], node_map[p[1]], p[2])


def _merge_into(
    d: StringDiagram,
    other: StringDiagram,
    din: int = 0,
    dout: int = 0,
    src_tag: str = "src",
    tgt_tag: str = "tgt",
) -> dict[int, int]:
    """Copy other's nodes/edges into d with fresh ids and relabelled boundaries."""
    node_map = {nid: d.fresh() for nid in other.nodes}
    for nid, node in other.nodes.items():
        d.nodes[node_map[nid]] = node
    for e in other.edges.values():
        d.edges[d.fresh()] = Edge(
            _shift_port(e.producer, node_map, din, dout, src_tag, tgt_tag),
            _shift_port(e.consumer, node_map, din, dout, src_tag, tgt_tag),
            e.obj,
        )
    return node_map


def d_tensor(a: StringDiagram, b: StringDiagram) -> StringDiagram:
    d = StringDiagram(a.inputs + b.inputs, a.outputs + b.outputs, {}, {})
    _merge_into(d, a)
    _merge_into(d, b, len(a.inputs), len(a.outputs))
    return d


def d_compose(a: StringDiagram, b: StringDiagram) -> StringDiagram:
    if a.outputs != b.inputs:
        raise DiagramError("interface mismatch in composition")
    d = StringDiagram(a.inputs, b.outputs, {}, {})
    # a's outputs and b's inputs meet at relabelled "cut" ports, then fuse
    _merge_into(d, a, tgt_tag="cut")
    _merge_into(d, b, src_tag="cut")
    for i in range(len(a.outputs)):
        upper = d.consumer_edge(("cut", i))
        lower = d.producer_edge(("cut", i))
        ue, le = d.edges.pop(upper), d.edges.pop(lower)
        d.edges[d.fresh()] = Edge(ue.producer, le.consumer, ue.obj)
    return d


def _style_for(name: str, src: Arity, tgt: Arity, styles: dict) -> dict:
    style = dict(styles.get(name, {}))
    if "shape" not in style:
        if len(src) == 2 and len(tgt) == 1 and src[0] == src[1] == tgt[0]:
            style["shape"] = "triangle"
        elif len(src) == 2 and len(tgt) == 2 and (src[1], src[0]) == tgt:
            style["shape"] = "circle"
        else:
            style["shape"] = "rect"
    return style


def diagram_of_term(
    t: MorTerm, env: Env, styles: Optional[dict] = None
) -> StringDiagram:
    """Build the string diagram of an elaborated term."""
    styles = styles or {}
    if isinstance(t, Gen):
        src, tgt = env.gens[t.name]
        sa, ta = arity_of(src), arity_of(tgt)
        return _d_node(Node("gen", sa, ta, name=t.name, style=_style_for(t.name, sa, ta, styles)))
    if isinstance(t, Id):
        return _d_id(arity_of(t.on))
    if isinstance(t, Struct):
        return _d_id(arity_of(t.endpoints()[0]))
    if isinstance(t, Comp):
        return d_compose(
            diagram_of_term(t.f, env, styles), diagram_of_term(t.g, env, styles)
        )
    if isinstance(t, Tens):
        return d_tensor(
            diagram_of_term(t.f, env, styles), diagram_of_term(t.g, env, styles)
        )
    if isinstance(t, Box):
        inner = diagram_of_term(t.f, env, styles)
        return _d_node(Node("box", inner.inputs, inner.outputs, inner=inner))
    raise DiagramError(f"cannot draw unelaborated term: {t!r}")


# -- extraction ------------------------------------------------------------


@dataclass(frozen=True)
class LineEntry:
    """One slot in an extracted line: a passing wire or a gathered node."""

    kind: str  # "wire" or "cell"
    edges_in: tuple[int, ...]
    edges_out: tuple[int, ...]
    node: Optional[int] = None
    obj: Optional[str] = None


@dataclass(frozen=True)
class ExtractedLine:
    entries: tuple[LineEntry, ...]


def extract_lines(d: StringDiagram) -> list[ExtractedLine]:
    """Read the diagram bottom-up, gathering as many nodes as possible per line.

    Returns lines in top-to-bottom order.
    """
    frontier: list[int] = [d.consumer_edge(("tgt", i)) for i in range(len(d.outputs))]
    remaining = set(d.nodes)
    lines: list[ExtractedLine] = []
    first = True
    while remaining:
        placements: list[tuple[int, int]] = []  # (start position, node id)
        for nid in sorted(remaining):
            node = d.nodes[nid]
            outs = [d.producer_edge(("out", nid, k)) for k in range(len(node.tgt))]
            if not outs:
                if first:
                    placements.append((len(frontier), nid))
                continue
            try:
                positions = [frontier.index(e) for e in outs]
            except ValueError:
                continue
            if positions == list(range(positions[0], positions[0] + len(outs))):
                placements.append((positions[0], nid))
        if not placements:
            raise DiagramError("diagram is not sequential (extraction stuck)")
        placements.sort()
        entries: list[LineEntry] = []
        new_frontier: list[int] = []
        pos = 0
        for start, nid in placements:
            for p in range(pos, start):
                e = frontier[p]
                entries.append(LineEntry("wire", (e,), (e,), obj=d.edges[e].obj))
                new_frontier.append(e)
            node = d.nodes[nid]
            ins = tuple(d.consumer_edge(("in", nid, k)) for k in range(len(node.src)))
            outs = tuple(frontier[start : start + len(node.tgt)])
            entries.append(LineEntry("cell", ins, outs, node=nid))
            new_frontier.extend(ins)
            pos = start + len(node.tgt)
            remaining.discard(nid)
        for p in range(pos, len(frontier)):
            e = frontier[p]
            entries.append(LineEntry("wire", (e,), (e,), obj=d.edges[e].obj))
            new_frontier.append(e)
        frontier = new_frontier
        lines.append(ExtractedLine(tuple(entries)))
        first = False
    lines.reverse()
    return lines


def _entry_to_cell(d: StringDiagram, entry: LineEntry) -> Union[Wire, Cell]:
    if entry.kind == "wire":
        return Wire(entry.obj)
    node = d.nodes[entry.node]
    if node.kind == "box":
        atom: Union[str, BoxNF] = BoxNF(diagram_to_nmor(node.inner))
    else:
        atom = node.name
    return Cell(atom, node.src, node.tgt)


def diagram_to_nmor(d: StringDiagram) -> NMor:
    """The row normal form read off the diagram itself."""
    lines = extract_lines(d)
    rows = tuple(
        Row(tuple(_entry_to_cell(d, e) for e in line.entries)) for line in lines
    )
    return NMor(d.inputs, rows)


def extract_expr(d: StringDiagram) -> MorTerm:
    """The canonical normal-form expression denoting the diagram."""
    lines = extract_lines(d)
    if not lines:
        if not d.inputs:
            from .objects import Unit

            return Id(Unit())
        term: MorTerm = Id(Atom(d.inputs[0]))
        for obj in d.inputs[1:]:
            term = Tens(term, Id(Atom(obj)))
        return term
    row_terms = []
    for line in lines:
        parts: list[MorTerm] = []
        for entry in line.entries:
            if entry.kind == "wire":
                parts.append(Id(Atom(entry.obj)))
            else:
                node = d.nodes[entry.node]
                if node.kind == "box":
                    parts.append(Box(extract_expr(node.inner)))
                else:
                    parts.append(Gen(node.name))
        term = parts[0]
        for p in parts[1:]:
            term = Tens(term, p)
        row_terms.append(term)
    term = row_terms[0]
    for rt in row_terms[1:]:
        term = Comp(term, rt)
    return term


def inline_all_boxes(d: StringDiagram) -> StringDiagram:
    out = d
    while True:
        box_ids = [nid for nid, n in out.nodes.items() if n.kind == "box"]
        if not box_ids:
            return out
        out = unbox(out, box_ids[0])


def diagram_equiv(a: StringDiagram, b: StringDiagram) -> Optional[bool]:
    """Isomorphism test via normal forms; None when uniqueness may fail."""
    if a.inputs != b.inputs or a.outputs != b.outputs:
        return False
    na = diagram_to_nmor(inline_all_boxes(a))
    nb = diagram_to_nmor(inline_all_boxes(b))
    if na == nb:
        return True
    if nmor_has_empty_target(na) or nmor_has_empty_target(nb):
        return None
    return False


# -- unboxing --------------------------------------------------------------


def unbox(d: StringDiagram, box_id: int) -> StringDiagram:
    """Splice the content of a box back into the surrounding diagram."""
    node = d.nodes.get(box_id)
    if node is None or node.kind != "box":
        raise DiagramError(f"unknown box {box_id}")
    inner = node.inner
    out = StringDiagram(d.inputs, d.outputs, dict(), dict(), d._next)
    for nid, n in d.nodes.items():
        if nid != box_id:
            out.nodes[nid] = n
    for eid, e in d.edges.items():
        out.edges[eid] = e
    node_map = {nid: out.fresh() for nid in inner.nodes}
    for nid, n in inner.nodes.items():
        out.nodes[node_map[nid]] = n

    def inner_port(p: Port) -> Port:
        return (p[0], node_map[p[1]], p[2])

    # inner edges between inner nodes are copied; edges touching the inner
    # boundary are fused with the outer edges at the box ports
    for e in inner.edges.values():
        producer, consumer = e.producer, e.consumer
        if producer[0] == "src" and consumer[0] == "tgt":
            oe_id = out.consumer_edge(("in", box_id, producer[1]))
            le_id = out.producer_edge(("out", box_id, consumer[1]))
            oe, le = out.edges.pop(oe_id), out.edges.pop(le_id)
            out.edges[out.fresh()] = Edge(oe.producer, le.consumer, e.obj)
        elif producer[0] == "src":
            oe_id = out.consumer_edge(("in", box_id, producer[1]))
            oe = out.edges.pop(oe_id)
            out.edges[out.fresh()] = Edge(oe.producer, inner_port(consumer), e.obj)
        elif consumer[0] == "tgt":
            le_id = out.producer_edge(("out", box_id, consumer[1]))
            le = out.edges.pop(le_id)
            out.edges[out.fresh()] = Edge(inner_port(producer), le.consumer, e.obj)
        else:
            out.edges[out.fresh()] = Edge(
                inner_port(producer), inner_port(consumer), e.obj
            )
    return out


# -- layout ----------------------------------------------------------------

CANVAS_W = 1000.0
ROW_H = 80.0
MARGIN = 50.0
MIN_GAP = 18.0
RELAX_ITERS = 60


@dataclass
class LaidOutDiagram:
    diagram: StringDiagram
    node_pos: dict[int, tuple[float, float]]
    node_size: dict[int, tuple[float, float]]
    edge_routes: dict[int, list[tuple[float, float]]]
    width: float
    height: float


def _enforce_order(xs: list[float], lo: float, hi: float) -> list[float]:
    xs = list(xs)
    for i in range(1, len(xs)):
        xs[i] = max(xs[i], xs[i - 1] + MIN_GAP)
    for i in range(len(xs) - 2, -1, -1):
        xs[i] = min(xs[i], xs[i + 1] - MIN_GAP)
    span_lo, span_hi = lo + MIN_GAP, hi - MIN_GAP
    if xs and (xs[0] < span_lo or xs[-1] > span_hi):
        # squeeze back into the canvas, preserving order
        cur_lo, cur_hi = min(xs[0], span_lo), max(xs[-1], span_hi)
        scale = (span_hi - span_lo) / max(cur_hi - cur_lo, 1e-9)
        xs = [span_lo + (x - cur_lo) * scale for x in xs]
    return xs


def layout(d: StringDiagram) -> LaidOutDiagram:
    """Deterministic layered layout with rubber-band relaxation."""
    lines = extract_lines(d)
    n_ifaces = len(lines) + 1
    height = 2 * MARGIN + max(len(lines), 1) * ROW_H

    # interface k holds ordered (edge, x) slots; k=0 is the top boundary
    ifaces: list[list[int]] = []
    top = [d.producer_edge(("src", i)) for i in range(len(d.inputs))]
    ifaces.append(top)
    for line in lines:
        nxt: list[int] = []
        for e in line.entries:
            nxt.extend(e.edges_out)
        ifaces.append(nxt)

    def spread(n: int) -> list[float]:
        if n == 0:
            return []
        step = (CANVAS_W - 2 * MARGIN) / (n + 1)
        return [MARGIN + (i + 1) * step for i in range(n)]

    xs: list[dict[int, float]] = []
    for iface in ifaces:
        pos = spread(len(iface))
        xs.append({e: pos[i] for i, e in enumerate(iface)})

    # node of each cell entry lives between interface k and k+1
    cell_rows: list[list[LineEntry]] = [
        [e for e in line.entries if e.kind == "cell"] for line in lines
    ]
    node_x: dict[int, float] = {}

    def relax_nodes() -> None:
        for k, cells in enumerate(cell_rows):
            for entry in cells:
                coords = [xs[k][e] for e in entry.edges_in] + [
                    xs[k + 1][e] for e in entry.edges_out
                ]
                if coords:
                    node_x[entry.node] = sum(coords) / len(coords)
                else:
                    node_x[entry.node] = CANVAS_W / 2

    def node_w(nid: int) -> float:
        node = d.nodes[nid]
        return max(26.0, 16.0 * max(len(node.src), len(node.tgt), 1))

    def enforce_row_order() -> None:
        """Keep every row's nodes inside the planar slots left by its wires.

        A wire only constrains the band of the row that glyphs occupy, so
        its bounds are taken at the top and bottom of that band rather than
        at the interfaces.
        """
        band = (46.0 / 2) / ROW_H  # half the tallest glyph, as a row fraction

        def wire_band(k: int, e: int) -> tuple[float, float]:
            top, bot = xs[k][e], xs[k + 1][e]
            lo = top + (bot - top) * (0.5 - band)
            hi = top + (bot - top) * (0.5 + band)
            return min(lo, hi), max(lo, hi)

        for k, line in enumerate(lines):
            ub = CANVAS_W
            for entry in reversed(line.entries):
                if entry.kind == "wire":
                    ub = min(ub, wire_band(k, entry.edges_in[0])[0])
                else:
                    w = node_w(entry.node)
                    x = min(node_x[entry.node], ub - w / 2 - 8.0)
                    node_x[entry.node] = x
                    ub = x - w / 2 - 8.0
            lb = 0.0
            for entry in line.entries:
                if entry.kind == "wire":
                    lb = max(lb, wire_band(k, entry.edges_in[0])[1])
                else:
                    w = node_w(entry.node)
                    x = max(node_x[entry.node], lb + w / 2 + 8.0)
                    node_x[entry.node] = x
                    lb = x + w / 2 + 8.0

    relax_nodes()
    for _ in range(RELAX_ITERS):
        for k in range(1, n_ifaces - 1):
            new: list[float] = []
            for e in ifaces[k]:
                neigh: list[float] = []
                if e in xs[k - 1]:
                    neigh.append(xs[k - 1][e])
                else:  # produced by the node in row k-1
                    edge = d.edges[e]
                    if edge.producer[0] == "out":
                        neigh.append(node_x[edge.producer[1]])
                if e in xs[k + 1]:
                    neigh.append(xs[k + 1][e])
                else:
                    edge = d.edges[e]
                    if edge.consumer[0] == "in":
                        neigh.append(node_x[edge.consumer[1]])
                new.append(sum(neigh) / len(neigh) if neigh else xs[k][e])
            new = _enforce_order(new, 0.0, CANVAS_W)
            xs[k] = {e: new[i] for i, e in enumerate(ifaces[k])}
        relax_nodes()
    enforce_row_order()

    node_pos: dict[int, tuple[float, float]] = {}
    node_size: dict[int, tuple[float, float]] = {}
    for k, cells in enumerate(cell_rows):
        y = MARGIN + (k + 0.5) * ROW_H
        for entry in cells:
            nid = entry.node
            node = d.nodes[nid]
            w = node_w(nid)
            h = 46.0 if node.kind == "box" else 26.0
            node_pos[nid] = (node_x[nid], y)
            node_size[nid] = (w, h)

    def port_x(nid: int, k: int, n: int) -> float:
        x, _ = node_pos[nid]
        w, _h = node_size[nid]
        if n == 1:
            return x
        return x - w / 2 + w * (k + 1) / (n + 1)

    def port_point(p: Port, producing: bool) -> tuple[float, float]:
        if p[0] == "src":
            return xs[0][d.producer_edge(p)], MARGIN
        if p[0] == "tgt":
            return xs[-1][d.consumer_edge(p)], height - MARGIN
        nid = p[1]
        node = d.nodes[nid]
        _, y = node_pos[nid]
        _, h = node_size[nid]
        if producing:  # node output, leaves at the bottom edge of the glyph
            return port_x(nid, p[2], len(node.tgt)), y + h / 2
        return port_x(nid, p[2], len(node.src)), y - h / 2

    # interface y coordinates
    iface_y = [MARGIN + k * ROW_H for k in range(n_ifaces)]
    iface_y[-1] = height - MARGIN

    edge_routes: dict[int, list[tuple[float, float]]] = {}
    for eid, edge in d.edges.items():
        start = port_point(edge.producer, True)
        end = port_point(edge.consumer, False)
        vias = []
        for k in range(1, n_ifaces - 1):
            if eid in xs[k] and iface_y[k] > start[1] and iface_y[k] < end[1]:
                vias.append((xs[k][eid], iface_y[k]))
        edge_routes[eid] = [start] + vias + [end]

    return LaidOutDiagram(d, node_pos, node_size, edge_routes, CANVAS_W, height)


# -- boxing via user polygons ---------------------------------------------


def _seg_intersect(p1, p2, p3, p4) -> Optional[tuple[float, float, float]]:
    """Intersection of segments p1p2 and p3p4; returns (t, x, y), t along p1p2."""
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = p3
    x4, y4 = p4
    den = (x2 - x1) * (y4 - y3) - (y2 - y1) * (x4 - x3)
    if abs(den) < 1e-12:
        return None
    t = ((x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3)) / den
    u = ((x3 - x1) * (y2 - y1) - (y3 - y1) * (x2 - x1)) / den
    if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
        return t, x1 + t * (x2 - x1), y1 + t * (y2 - y1)
    return None


def point_in_polygon(pt: tuple[float, float], poly: list[tuple[float, float]]) -> bool:
    x, y = pt
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xcross = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
            if x < xcross:
                inside = not inside
    return inside


def polygon_is_simple(poly: list[tuple[float, float]]) -> bool:
    n = len(poly)
    if n < 3:
        return False
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _seg_intersect(a1, a2, poly[j], poly[(j + 1) % n]):
                return False
    return True


@dataclass(frozen=True)
class _Crossing:
    edge: int
    along_route: float
    along_poly: float
    point: tuple[float, float]
    entering: bool


def _route_point(route: list[tuple[float, float]], t: float) -> tuple[float, float]:
    si = min(int(t), len(route) - 2)
    frac = t - si
    (x1, y1), (x2, y2) = route[si], route[si + 1]
    return x1 + frac * (x2 - x1), y1 + frac * (y2 - y1)


def _route_crossings(
    route: list[tuple[float, float]], poly: list[tuple[float, float]], eid: int
) -> list[_Crossing]:
    found = []
    for si in range(len(route) - 1):
        a, b = route[si], route[si + 1]
        for pi in range(len(poly)):
            hit = _seg_intersect(a, b, poly[pi], poly[(pi + 1) % len(poly)])
            if hit:
                t, x, y = hit
                found.append((si + t, pi + _poly_frac(poly, pi, (x, y)), (x, y)))
    found.sort()
    # a via point lying exactly on the boundary registers once per adjacent
    # segment; merge those duplicates before orienting
    merged: list[tuple[float, float, tuple[float, float]]] = []
    for h in found:
        if merged and abs(h[0] - merged[-1][0]) < 1e-6 and _dist(h[2], merged[-1][2]) < 1e-6:
            continue
        merged.append(h)
    # orientation by sampling inside-ness between consecutive crossings; a
    # tangency (no flip) is not a crossing at all
    params = [0.0] + [h[0] for h in merged] + [float(len(route) - 1)]
    flags = []
    for k in range(len(merged) + 1):
        mid = _route_point(route, (params[k] + params[k + 1]) / 2)
        flags.append(point_in_polygon(mid, poly))
    out = []
    for k, (tr, tp, pt) in enumerate(merged):
        if flags[k] == flags[k + 1]:
            continue
        out.append(_Crossing(eid, tr, tp, pt, entering=flags[k + 1]))
    return out


def _poly_frac(poly, pi, pt) -> float:
    x1, y1 = poly[pi]
    x2, y2 = poly[(pi + 1) % len(poly)]
    dx, dy = x2 - x1, y2 - y1
    if abs(dx) >= abs(dy):
        return (pt[0] - x1) / dx if dx else 0.0
    return (pt[1] - y1) / dy if dy else 0.0


def box_polygon(ld: LaidOutDiagram, poly: list[tuple[float, float]]) -> tuple[LaidOutDiagram, int]:
    """Box the subdiagram enclosed by a user polygon.

    Returns the re-laid-out diagram and the id of the new box node.
    """
    if not polygon_is_simple(poly):
        raise InvalidSubdiagram("polygon must be simple with at least 3 vertices")
    d = ld.diagram
    inside_nodes = {
        nid for nid, _ in d.nodes.items() if point_in_polygon(ld.node_pos[nid], poly)
    }

    crossings: list[_Crossing] = []
    for eid, route in ld.edge_routes.items():
        cs = _route_crossings(route, poly, eid)
        if len(cs) > 2:
            raise EdgeCrossesTwicePlus(f"edge {eid} crosses the polygon {len(cs)} times")
        crossings.extend(cs)

    # alternation check along the polygon boundary (cyclic)
    ordered = sorted(crossings, key=lambda c: c.along_poly)
    labels = [c.entering for c in ordered]
    blocks = sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1])
    if labels and blocks > 2:
        raise BadAlternation("inputs and outputs interleave along the polygon")

    box_inputs = sorted(
        (c for c in crossings if c.entering), key=lambda c: c.point[0]
    )
    box_outputs = sorted(
        (c for c in crossings if not c.entering), key=lambda c: c.point[0]
    )

    # consistency between crossings and node membership
    per_edge: dict[int, list[_Crossing]] = {}
    for c in crossings:
        per_edge.setdefault(c.edge, []).append(c)

    def endpoint_inside(p: Port) -> bool:
        if p[0] in ("src", "tgt"):
            return False
        return p[1] in inside_nodes

    for eid, e in d.edges.items():
        n_cross = len(per_edge.get(eid, []))
        sep = endpoint_inside(e.producer) != endpoint_inside(e.consumer)
        if sep and n_cross % 2 == 0:
            raise InvalidSubdiagram(
                "polygon boundary does not separate the selected nodes"
            )
        if not sep and n_cross % 2 == 1:
            raise InvalidSubdiagram("edge crosses the polygon an odd number of times")

    # build the inner diagram
    inner = StringDiagram(
        tuple(d.edges[c.edge].obj for c in box_inputs),
        tuple(d.edges[c.edge].obj for c in box_outputs),
        {},
        {},
    )
    node_map = {nid: inner.fresh() for nid in sorted(inside_nodes)}
    for nid in sorted(inside_nodes):
        inner.nodes[node_map[nid]] = d.nodes[nid]
    in_pos = {c.edge: i for i, c in enumerate(box_inputs)}
    out_pos = {c.edge: i for i, c in enumerate(box_outputs)}

    def to_inner(p: Port) -> Port:
        return (p[0], node_map[p[1]], p[2])

    for eid, e in d.edges.items():
        pin, cin = endpoint_inside(e.producer), endpoint_inside(e.consumer)
        ncross = len(per_edge.get(eid, []))
        if pin and cin:
            inner.edges[inner.fresh()] = Edge(to_inner(e.producer), to_inner(e.consumer), e.obj)
        elif not pin and cin:
            inner.edges[inner.fresh()] = Edge(("src", in_pos[eid]), to_inner(e.consumer), e.obj)
        elif pin and not cin:
            inner.edges[inner.fresh()] = Edge(to_inner(e.producer), ("tgt", out_pos[eid]), e.obj)
        elif ncross == 2:  # through-wire
            inner.edges[inner.fresh()] = Edge(("src", in_pos[eid]), ("tgt", out_pos[eid]), e.obj)

    try:
        extract_lines(inner)
    except DiagramError as exc:
        raise InvalidSubdiagram(f"enclosed nodes do not form a valid diagram: {exc}") from exc

    # rewire the outer diagram through the new box node
    out = StringDiagram(d.inputs, d.outputs, {}, {}, d._next)
    for nid, n in d.nodes.items():
        if nid not in inside_nodes:
            out.nodes[nid] = n
    box_id = out.fresh()
    out.nodes[box_id] = Node(
        "box", inner.inputs, inner.outputs, inner=inner, outline=list(poly)
    )
    for eid, e in d.edges.items():
        pin, cin = endpoint_inside(e.producer), endpoint_inside(e.consumer)
        ncross = len(per_edge.get(eid, []))
        if pin and cin:
            continue
        if not pin and not cin and ncross == 0:
            out.edges[out.fresh()] = Edge(e.producer, e.consumer, e.obj)
        elif not pin and cin:
            out.edges[out.fresh()] = Edge(e.producer, ("in", box_id, in_pos[eid]), e.obj)
        elif pin and not cin:
            out.edges[out.fresh()] = Edge(("out", box_id, out_pos[eid]), e.consumer, e.obj)
        else:  # through-wire: split around the box
            out.edges[out.fresh()] = Edge(e.producer, ("in", box_id, in_pos[eid]), e.obj)
            out.edges[out.fresh()] = Edge(("out", box_id, out_pos[eid]), e.consumer, e.obj)

    new_ld = layout(out)
    return new_ld, _find_box(new_ld.diagram, box_id)


def _find_box(d: StringDiagram, box_id: int) -> int:
    if box_id in d.nodes:
        return box_id
    raise DiagramError("box lost during relayout")


def count_edge_crossings(ld: LaidOutDiagram) -> int:
    """Audit: number of crossing pairs among all routed edge segments."""
    segs = []
    for eid, route in ld.edge_routes.items():
        for i in range(len(route) - 1):
            segs.append((eid, route[i], route[i + 1]))
    count = 0
    for (e1, a1, a2), (e2, b1, b2) in itertools.combinations(segs, 2):
        if e1 == e2:
            continue
        hit = _seg_intersect(a1, a2, b1, b2)
        if hit is None:
            continue
        t = hit[0]
        # shared endpoints at a node or interface are not crossings
        if min(_dist(hit[1:], p) for p in (a1, a2, b1, b2)) < 1e-6:
            continue
        count += 1
    return count


def _dist(p, q) -> float:
    return ((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2) ** 0.5
