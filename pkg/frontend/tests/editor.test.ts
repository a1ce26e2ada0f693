import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Editor } from "../src/editor.js";
import { rectPolygon } from "../src/polygon.js";
import type { DiagramJson, SessionJson } from "../src/types.js";

const emptyDiagram = (): DiagramJson => ({
  schema: "1",
  inputs: ["A"],
  outputs: ["A"],
  nodes: [],
  edges: [{ id: 0, obj: "A", route: [[100, 50], [100, 350]] }],
  width: 1000,
  height: 400,
});

function makeSession(revision = 0, done = false): SessionJson {
  return {
    id: "s1",
    revision,
    done,
    lhs: emptyDiagram(),
    rhs: emptyDiagram(),
    definitions: [],
    unfolded: [],
    hypotheses: {},
    steps: [],
  };
}

type Handler = (body: any) => { status: number; body: unknown };

/** In-memory stand-in for the session service. */
function fakeFetch(routes: Record<string, Handler>) {
  const calls: string[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const path = url.replace("http://test", "");
    calls.push(path);
    const handler = routes[path];
    if (!handler) return new Response(JSON.stringify({}), { status: 404 });
    const { status, body } = handler(init?.body ? JSON.parse(init.body as string) : {});
    return new Response(JSON.stringify(body), { status });
  };
  return { fetchFn, calls };
}

function editorWith(routes: Record<string, Handler>) {
  const { fetchFn, calls } = fakeFetch(routes);
  return { editor: new Editor(new ApiClient("http://test", fetchFn)), calls };
}

describe("Editor", () => {
  it("loads a goal and builds both scenes", async () => {
    const { editor } = editorWith({
      "/sessions": () => ({ status: 200, body: makeSession() }),
    });
    await editor.loadGoal("f : A ~> A\n===\nf ≡' f");
    expect(editor.state.scenes?.lhs.wires).toHaveLength(1);
    expect(editor.state.banner).toBeNull();
    expect(editor.done).toBe(false);
  });

  it("rejects a self-intersecting trace before sending", async () => {
    const { editor, calls } = editorWith({
      "/sessions": () => ({ status: 200, body: makeSession() }),
    });
    await editor.loadGoal("goal");
    const bowtie = [
      { x: 0, y: 0 },
      { x: 100, y: 100 },
      { x: 100, y: 0 },
      { x: 0, y: 100 },
    ];
    const res = await editor.drawPolygon("l", bowtie);
    expect(res).toBeNull();
    expect(editor.state.error).toMatch(/crosses itself/);
    expect(calls.filter((c) => c.includes("/box"))).toHaveLength(0);
  });

  it("stores the active box and its matches, then clears it on apply", async () => {
    const { editor } = editorWith({
      "/sessions": () => ({ status: 200, body: makeSession(0) }),
      "/sessions/s1/box": () => ({
        status: 200,
        body: { ...makeSession(1), box: 7, matches: [{ hyp: "nx", direction: "lr" }] },
      }),
      "/sessions/s1/rewrite": (body) => {
        expect(body).toMatchObject({ box: 7, hyp: "nx", direction: "lr", revision: 1 });
        return { status: 200, body: makeSession(2, true) };
      },
    });
    await editor.loadGoal("goal");
    const active = await editor.drawPolygon("l", rectPolygon(10, 10, 200, 200));
    expect(active).toEqual({ side: "l", box: 7, matches: [{ hyp: "nx", direction: "lr" }] });
    expect(await editor.applyMatch("nx", "lr")).toBe(true);
    expect(editor.state.activeBox).toBeNull();
    expect(editor.state.banner).toMatch(/closed/);
  });

  it("refetches and asks for a retry on a stale revision", async () => {
    const { editor } = editorWith({
      "/sessions": () => ({ status: 200, body: makeSession(0) }),
      "/sessions/s1/box": () => ({
        status: 409,
        body: { detail: { code: "StaleRevision", message: "expected 3, got 0" } },
      }),
      "/sessions/s1": () => ({ status: 200, body: makeSession(3) }),
    });
    await editor.loadGoal("goal");
    const res = await editor.drawPolygon("l", rectPolygon(10, 10, 200, 200));
    expect(res).toBeNull();
    expect(editor.state.session?.revision).toBe(3);
    expect(editor.state.error).toMatch(/retry/);
  });

  it("surfaces server geometric errors verbatim", async () => {
    const { editor } = editorWith({
      "/sessions": () => ({ status: 200, body: makeSession(0) }),
      "/sessions/s1/box": () => ({
        status: 422,
        body: { detail: { code: "BadAlternation", message: "4 crossing blocks" } },
      }),
    });
    await editor.loadGoal("goal");
    expect(await editor.drawPolygon("l", rectPolygon(10, 10, 200, 200))).toBeNull();
    expect(editor.state.error).toBe("BadAlternation: 4 crossing blocks");
  });
});
