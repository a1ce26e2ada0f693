/** Browser bootstrap: wires DOM events to the Editor controller.
 *
 * Left untested by the node suite — all logic it touches lives in the
 * editor/scene/polygon modules, which are covered directly.
 */

import { ApiClient } from "./api.js";
import { Editor } from "./editor.js";
import { sceneToSvg } from "./scene.js";
import type { Point, Side } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

export function mount(baseUrl: string): Editor {
  const editor = new Editor(new ApiClient(baseUrl));
  const panes: Record<Side, HTMLElement> = { l: $("lhs"), r: $("rhs") };
  let trace: Point[] = [];
  let tracing: Side | null = null;

  const render = () => {
    const scenes = editor.state.scenes;
    if (scenes) {
      panes.l.innerHTML = sceneToSvg(scenes.lhs, tracing === "l" ? trace : null);
      panes.r.innerHTML = sceneToSvg(scenes.rhs, tracing === "r" ? trace : null);
    }
    $("banner").textContent = editor.state.banner ?? "";
    $("error").textContent = editor.state.error ?? "";
    const matches = editor.state.activeBox?.matches ?? [];
    const list = $("matches");
    list.innerHTML = "";
    for (const m of matches) {
      const btn = document.createElement("button");
      btn.textContent = `${m.hyp} (${m.direction})`;
      btn.onclick = () => void editor.applyMatch(m.hyp, m.direction).then(render);
      list.appendChild(btn);
    }
    const hist = $("history");
    hist.innerHTML = "";
    for (const step of editor.history()) {
      const li = document.createElement("li");
      li.textContent =
        step.kind === "unfold"
          ? `unfold ${step.name}`
          : step.kind === "trans"
            ? `trans-${step.side} ${step.term}`
            : step.kind === "rewrite"
              ? `rewrite ${step.direction === "rl" ? "<- " : ""}${step.hyp}`
              : "close";
      hist.appendChild(li);
    }
  };

  const local = (pane: HTMLElement, ev: MouseEvent): Point => {
    const r = pane.getBoundingClientRect();
    return { x: ev.clientX - r.left, y: ev.clientY - r.top };
  };

  for (const side of ["l", "r"] as const) {
    const pane = panes[side];
    pane.addEventListener("mousedown", (ev) => {
      tracing = side;
      trace = [local(pane, ev)];
    });
    pane.addEventListener("mousemove", (ev) => {
      if (tracing === side) {
        trace.push(local(pane, ev));
        render();
      }
    });
    pane.addEventListener("mouseup", () => {
      if (tracing !== side) return;
      tracing = null;
      void editor.drawPolygon(side, trace).then(render);
      trace = [];
    });
  }

  $("load").onclick = () => {
    const goal = ($("goal") as HTMLTextAreaElement).value;
    void editor.loadGoal(goal).then(render);
  };
  $("undo").onclick = () => void editor.undo().then(render);
  $("export").onclick = () =>
    void editor.exportScript().then((script) => {
      ($("script") as HTMLTextAreaElement).value = script;
    });
  $("unfold").onclick = () => {
    const name = editor.state.session?.definitions.find(
      (d) => !editor.state.session?.unfolded.includes(d),
    );
    if (name) void editor.unfold(name).then(render);
  };

  return editor;
}
