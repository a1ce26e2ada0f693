/** End-to-end UI loop against a real service process.
 *
 * Spawns the Python session service, loads the composite-monoid goal,
 * draws a lasso around the `n·M ; x` region, applies the offered
 * rewrite, repeats for the remaining three steps, checks the
 * completion banner, and validates the exported script with the
 * command-line replayer.
 */

import { type ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Editor } from "../src/editor.js";
import type { Direction, Point, SessionJson, Side } from "../src/types.js";

const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
const GOAL_PATH = join(ROOT, "goals", "composite-monoid.goal");
const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/schema`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "moncat", "serve", "--port", String(PORT)], {
    cwd: ROOT,
    stdio: "ignore",
  });
  await waitForServer();
}, 40_000);

afterAll(() => {
  server.kill();
});

/** A hand-drawn-looking rectangle trace around the picked nodes. */
function lassoAround(session: SessionJson, side: Side, picks: [string, number][]): Point[] {
  const diagram = side === "l" ? session.lhs : session.rhs;
  const chosen = diagram.nodes.filter((n) =>
    picks.some(([name, y]) => n.name === name && Math.round(n.y) === y),
  );
  expect(chosen).toHaveLength(picks.length);
  const pad = 36;
  const x0 = Math.min(...chosen.map((n) => n.x)) - pad;
  const x1 = Math.max(...chosen.map((n) => n.x)) + pad;
  const y0 = Math.min(...chosen.map((n) => n.y)) - pad;
  const y1 = Math.max(...chosen.map((n) => n.y)) + pad;
  const corners: [number, number][] = [
    [x0, y0],
    [x1, y0],
    [x1, y1],
    [x0, y1],
    [x0, y0],
  ];
  const trace: Point[] = [];
  for (let i = 0; i < corners.length - 1; i++) {
    const [ax, ay] = corners[i];
    const [bx, by] = corners[i + 1];
    for (let t = 0; t < 8; t++) {
      const f = t / 8;
      trace.push({ x: ax + (bx - ax) * f + (t % 2), y: ay + (by - ay) * f + ((t + 1) % 2) });
    }
  }
  return trace;
}

const STEPS: [Side, [string, number][], string, Direction][] = [
  ["l", [["n", 170], ["x", 250]], "nx", "lr"],
  ["r", [["m", 170], ["x", 250]], "mx", "lr"],
  ["l", [["m", 250], ["m", 330]], "mA", "lr"],
  ["r", [["n", 250], ["n", 330]], "nA", "rl"],
];

function replayWithCli(goalPath: string, script: string): { status: number | null; out: string } {
  const dir = mkdtempSync(join(tmpdir(), "moncat-ui-"));
  const scriptPath = join(dir, "proof.txt");
  writeFileSync(scriptPath, script);
  const res = spawnSync(
    "python3",
    ["-m", "moncat", "replay", "--goal", goalPath, "--script", scriptPath],
    { cwd: ROOT, encoding: "utf-8" },
  );
  return { status: res.status, out: res.stdout + res.stderr };
}

describe("full proving loop", () => {
  it("closes the composite-monoid goal in four lasso steps", async () => {
    const editor = new Editor(new ApiClient(BASE));
    await editor.loadGoal(readFileSync(GOAL_PATH, "utf-8"));
    expect(editor.done).toBe(false);
    expect(await editor.unfold("mn")).toBe(true);

    for (const [i, [side, picks, hyp, direction]] of STEPS.entries()) {
      const active = await editor.drawPolygon(
        side,
        lassoAround(editor.state.session!, side, picks),
      );
      expect(active, `step ${i + 1}: ${editor.state.error}`).not.toBeNull();
      expect(active!.matches).toEqual([{ hyp, direction }]);
      expect(await editor.applyMatch(hyp, direction)).toBe(true);
    }

    expect(editor.done).toBe(true);
    expect(editor.state.banner).toMatch(/closed/);
    expect(editor.history().filter((s) => s.kind === "rewrite")).toHaveLength(4);

    for (const format of ["neutral", "rocq"] as const) {
      const script = await editor.exportScript(format);
      const { status, out } = replayWithCli(GOAL_PATH, script);
      expect(out).toContain("Ok");
      expect(status).toBe(0);
    }
  }, 60_000);

  it("undo steps back and the session stays replayable", async () => {
    const editor = new Editor(new ApiClient(BASE));
    await editor.loadGoal(readFileSync(GOAL_PATH, "utf-8"));
    await editor.unfold("mn");
    const before = await new ApiClient(BASE).extract(editor.state.session!.id);
    const [side, picks, hyp, direction] = STEPS[0];
    await editor.drawPolygon(side, lassoAround(editor.state.session!, side, picks));
    await editor.applyMatch(hyp, direction);
    expect(await editor.undo()).toBe(true); // the rewrite
    expect(await editor.undo()).toBe(true); // the box
    const after = await new ApiClient(BASE).extract(editor.state.session!.id);
    expect(after).toEqual(before);
  }, 30_000);
});
