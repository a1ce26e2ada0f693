/** Pure scene-graph construction from diagram JSON.
 *
 * The UI never interprets diagram semantics: it draws exactly what the
 * server sent.  Wires are coloured per object name in first-appearance
 * order over ascending edge ids (the same convention the server's own
 * renderer uses), generator glyphs follow their declared shapes, and
 * boxes keep their hand-drawn outline when one is stored.
 */

import type { DiagramJson, NodeJson, Point } from "./types.js";
import { SUPPORTED_SCHEMA } from "./types.js";

export const PALETTE = [
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
];

export interface WireShape {
  edgeId: number;
  obj: string;
  color: string;
  points: [number, number][];
}

export interface GlyphShape {
  nodeId: number;
  kind: "gen" | "box";
  shape: "rect" | "triangle" | "circle";
  label: string;
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
  outline: [number, number][] | null;
}

export interface Scene {
  width: number;
  height: number;
  wires: WireShape[];
  glyphs: GlyphShape[];
}

export class SchemaMismatch extends Error {
  constructor(public readonly got: string) {
    super(`diagram schema ${got} (client supports ${SUPPORTED_SCHEMA})`);
  }
}

export function colorFor(obj: string, order: Map<string, number>): string {
  if (!order.has(obj)) order.set(obj, order.size);
  return PALETTE[order.get(obj)! % PALETTE.length];
}

export function buildScene(d: DiagramJson): Scene {
  if (d.schema !== SUPPORTED_SCHEMA) throw new SchemaMismatch(d.schema);
  const order = new Map<string, number>();
  const wires = [...d.edges]
    .sort((a, b) => a.id - b.id)
    .map((e) => ({
      edgeId: e.id,
      obj: e.obj,
      color: colorFor(e.obj, order),
      points: e.route,
    }));
  const glyphs = [...d.nodes]
    .sort((a, b) => a.id - b.id)
    .map((n) => ({
      nodeId: n.id,
      kind: n.kind,
      shape: n.kind === "box" ? ("rect" as const) : n.shape,
      label: n.kind === "box" ? (n.inner ?? "") : n.name,
      x: n.x,
      y: n.y,
      w: n.w,
      h: n.h,
      fill: glyphFill(n, order),
      outline: n.outline,
    }));
  return { width: d.width, height: d.height, wires, glyphs };
}

function glyphFill(n: NodeJson, order: Map<string, number>): string {
  if (n.kind === "box") return "none";
  if (n.color) return n.color;
  const key = n.tgt[0] ?? n.src[0];
  return key ? colorFor(key, order) : "#333";
}

/** Topmost glyph whose bounding rectangle contains the point, if any. */
export function glyphAt(scene: Scene, p: Point): GlyphShape | null {
  for (let i = scene.glyphs.length - 1; i >= 0; i--) {
    const g = scene.glyphs[i];
    if (Math.abs(p.x - g.x) <= g.w / 2 && Math.abs(p.y - g.y) <= g.h / 2) return g;
  }
  return null;
}

const fmt = (v: number): string => {
  const s = v.toFixed(2);
  return s.replace(/\.?0+$/, "");
};

/** Serialize a scene (plus an optional in-progress lasso) to SVG markup. */
export function sceneToSvg(scene: Scene, lasso: Point[] | null = null): string {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fmt(scene.width)}" ` +
      `height="${fmt(scene.height)}" viewBox="0 0 ${fmt(scene.width)} ${fmt(scene.height)}">`,
    '<rect width="100%" height="100%" fill="white"/>',
  ];
  for (const w of scene.wires) {
    const pts = w.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${w.color}" stroke-width="2"/>`,
    );
  }
  for (const g of scene.glyphs) parts.push(glyphSvg(g));
  if (lasso && lasso.length > 1) {
    const pts = lasso.map((p) => `${fmt(p.x)},${fmt(p.y)}`).join(" ");
    parts.push(
      `<polygon points="${pts}" fill="rgba(80,120,255,0.15)" stroke="#56f" stroke-dasharray="4,2"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function glyphSvg(g: GlyphShape): string {
  if (g.kind === "box") {
    const body = g.outline
      ? `<polygon points="${g.outline.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ")}" ` +
        'fill="none" stroke="#444" stroke-width="1.5" stroke-dasharray="5,3"/>'
      : `<rect x="${fmt(g.x - g.w / 2)}" y="${fmt(g.y - g.h / 2)}" width="${fmt(g.w)}" ` +
        `height="${fmt(g.h)}" rx="6" fill="none" stroke="#444" stroke-width="1.5" stroke-dasharray="5,3"/>`;
    return body;
  }
  const label =
    `<text x="${fmt(g.x)}" y="${fmt(g.y + g.h / 2 + 14)}" font-size="11" ` +
    `text-anchor="middle" fill="#333">${g.label}</text>`;
  if (g.shape === "triangle") {
    const pts = `${fmt(g.x - g.w / 2)},${fmt(g.y - g.h / 2)} ${fmt(g.x + g.w / 2)},${fmt(g.y - g.h / 2)} ${fmt(g.x)},${fmt(g.y + g.h / 2)}`;
    return `<polygon points="${pts}" fill="${g.fill}" stroke="#222"/>` + label;
  }
  if (g.shape === "circle") {
    const r = Math.min(g.w, g.h) / 2;
    return `<circle cx="${fmt(g.x)}" cy="${fmt(g.y)}" r="${fmt(r)}" fill="${g.fill}" stroke="#222"/>` + label;
  }
  return (
    `<rect x="${fmt(g.x - g.w / 2)}" y="${fmt(g.y - g.h / 2)}" width="${fmt(g.w)}" ` +
    `height="${fmt(g.h)}" fill="${g.fill}" stroke="#222"/>` + label
  );
}
