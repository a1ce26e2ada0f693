"""Deterministic SVG rendering of laid-out string diagrams.

Wires are coloured per object name from a fixed palette, generator
glyphs use their declared or inferred shapes, and boxes render as
dashed rounded rectangles around their recursively drawn content.
Rendering the same diagram twice yields byte-identical output.
"""

from __future__ import annotations

from .diagram import LaidOutDiagram, Node

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
    "#bcbd22",
    "#7f7f7f",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def color_for(obj: str, order: dict[str, int]) -> str:
    if obj not in order:
        order[obj] = len(order)
    return PALETTE[order[obj] % len(PALETTE)]


def render_svg(ld: LaidOutDiagram) -> str:
    """Render a laid-out diagram as a standalone SVG document."""
    d = ld.diagram
    order: dict[str, int] = {}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(ld.width)}" '
        f'height="{_fmt(ld.height)}" viewBox="0 0 {_fmt(ld.width)} {_fmt(ld.height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for eid in sorted(ld.edge_routes):
        route = ld.edge_routes[eid]
        color = color_for(d.edges[eid].obj, order)
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in route)
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    for nid in sorted(ld.node_pos):
        parts.append(_render_node(ld, nid, order))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_node(ld: LaidOutDiagram, nid: int, order: dict[str, int]) -> str:
    node = ld.diagram.nodes[nid]
    x, y = ld.node_pos[nid]
    w, h = ld.node_size[nid]
    if node.kind == "box":
        return (
            f'<rect x="{_fmt(x - w / 2)}" y="{_fmt(y - h / 2)}" width="{_fmt(w)}" '
            f'height="{_fmt(h)}" rx="6" fill="none" stroke="#444" '
            'stroke-width="1.5" stroke-dasharray="5,3"/>'
        )
    shape = node.style.get("shape", "rect")
    fill = node.style.get("color")
    if fill is None:
        key = node.tgt[0] if node.tgt else (node.src[0] if node.src else "")
        fill = color_for(key, order) if key else "#333"
    label = node.name or ""
    glyph = _glyph(shape, x, y, w, h, fill)
    text = (
        f'<text x="{_fmt(x)}" y="{_fmt(y + h / 2 + 14)}" font-size="11" '
        f'text-anchor="middle" fill="#333">{label}</text>'
    )
    return glyph + text


def _glyph(shape: str, x: float, y: float, w: float, h: float, fill: str) -> str:
    if shape == "triangle":
        pts = f"{_fmt(x - w / 2)},{_fmt(y - h / 2)} {_fmt(x + w / 2)},{_fmt(y - h / 2)} {_fmt(x)},{_fmt(y + h / 2)}"
        return f'<polygon points="{pts}" fill="{fill}" stroke="#222"/>'
    if shape == "circle":
        r = min(w, h) / 2
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{fill}" stroke="#222"/>'
    return (
        f'<rect x="{_fmt(x - w / 2)}" y="{_fmt(y - h / 2)}" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" fill="{fill}" stroke="#222"/>'
    )
