/** Editor controller: the human steering loop.
 *
 * Holds the ViewState, forwards every mutation to the session service,
 * and re-renders from the returned JSON.  All semantics live on the
 * server; the editor only draws, selects and relays.  A stale-revision
 * conflict refetches the authoritative state and asks the user to
 * retry rather than guessing.
 */

import { ApiClient, ApiError } from "./api.js";
import { pointInPolygon, selfIntersects, simplifyTrace } from "./polygon.js";
import { buildScene, Scene } from "./scene.js";
import type { Direction, Match, Point, SessionJson, Side, StepJson } from "./types.js";

export interface ActiveBox {
  side: Side;
  box: number;
  matches: Match[];
}

export interface ViewState {
  session: SessionJson | null;
  scenes: { lhs: Scene; rhs: Scene } | null;
  activeBox: ActiveBox | null;
  banner: string | null;
  error: string | null;
}

export class Editor {
  readonly state: ViewState = {
    session: null,
    scenes: null,
    activeBox: null,
    banner: null,
    error: null,
  };

  constructor(private readonly api: ApiClient) {}

  private accept(session: SessionJson): SessionJson {
    this.state.session = session;
    this.state.scenes = { lhs: buildScene(session.lhs), rhs: buildScene(session.rhs) };
    this.state.banner = session.done ? "Goal closed — both sides are the same diagram." : null;
    this.state.error = null;
    return session;
  }

  private get session(): SessionJson {
    const s = this.state.session;
    if (!s) throw new Error("no session loaded");
    return s;
  }

  private async mutate<T extends SessionJson>(op: (s: SessionJson) => Promise<T>): Promise<T | null> {
    try {
      const result = await op(this.session);
      this.accept(result);
      return result;
    } catch (err) {
      if (err instanceof ApiError && err.code === "StaleRevision") {
        // another tab moved the session on; show its state and let the
        // user decide whether the action still makes sense
        this.accept(await this.api.getSession(this.session.id));
        this.state.error = "Session changed elsewhere — state refreshed, please retry.";
        return null;
      }
      this.state.error = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      return null;
    }
  }

  async loadGoal(goal: string): Promise<SessionJson> {
    return this.accept(await this.api.createSession(goal));
  }

  async refresh(): Promise<void> {
    this.accept(await this.api.getSession(this.session.id));
  }

  /** Simplify a freehand trace and submit it as a selection polygon. */
  async drawPolygon(side: Side, trace: Point[]): Promise<ActiveBox | null> {
    const poly = simplifyTrace(trace);
    if (poly.length < 3) {
      this.state.error = "Selection too small.";
      return null;
    }
    if (selfIntersects(poly)) {
      this.state.error = "Selection crosses itself — draw a simple loop.";
      return null;
    }
    const res = await this.mutate((s) => this.api.box(s.id, s.revision, side, poly));
    if (!res) return null;
    this.state.activeBox = { side, box: res.box, matches: res.matches };
    return this.state.activeBox;
  }

  /** Apply one of the matches listed for the active box. */
  async applyMatch(hyp: string, direction: Direction): Promise<boolean> {
    const active = this.state.activeBox;
    if (!active) {
      this.state.error = "No selection to rewrite.";
      return false;
    }
    const res = await this.mutate((s) =>
      this.api.rewrite(s.id, s.revision, active.side, active.box, hyp, direction),
    );
    if (res) this.state.activeBox = null;
    return res !== null;
  }

  /** Dissolve the active box without rewriting. */
  async dismissBox(): Promise<void> {
    const active = this.state.activeBox;
    if (!active) return;
    await this.mutate((s) => this.api.unbox(s.id, s.revision, active.side, active.box));
    this.state.activeBox = null;
  }

  async unfold(name: string): Promise<boolean> {
    return (await this.mutate((s) => this.api.unfold(s.id, s.revision, name))) !== null;
  }

  async dragNode(side: Side, node: number, x: number, y: number): Promise<boolean> {
    return (await this.mutate((s) => this.api.drag(s.id, s.revision, side, node, x, y))) !== null;
  }

  async undo(): Promise<boolean> {
    const res = await this.mutate((s) => this.api.undo(s.id, s.revision));
    if (res) this.state.activeBox = null;
    return res !== null;
  }

  async exportScript(format: "neutral" | "rocq" = "neutral"): Promise<string> {
    return (await this.api.exportScript(this.session.id, format)).script;
  }

  history(): StepJson[] {
    return this.state.session?.steps ?? [];
  }

  get done(): boolean {
    return this.state.session?.done ?? false;
  }

  /** Node ids of the given side whose anchors fall inside the polygon. */
  nodesInside(side: Side, poly: Point[]): number[] {
    const d = side === "l" ? this.session.lhs : this.session.rhs;
    return d.nodes.filter((n) => pointInPolygon({ x: n.x, y: n.y }, poly)).map((n) => n.id);
  }
}
