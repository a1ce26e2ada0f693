/** Thin typed client for the session API.
 *
 * Every mutation echoes the last acknowledged revision; a 409 from the
 * server surfaces as an ApiError with code "StaleRevision" so the
 * editor can refetch and prompt a retry.  The fetch function is
 * injectable for tests.
 */

import type {
  BoxResponse,
  Direction,
  ExportResponse,
  Match,
  Point,
  SessionJson,
  Side,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const detail = (body as { detail?: { code?: string; message?: string } }).detail;
    throw new ApiError(res.status, detail?.code ?? "HttpError", detail?.message ?? res.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    return unwrap<T>(res);
  }

  private async get<T>(path: string): Promise<T> {
    return unwrap<T>(await this.fetchFn(`${this.baseUrl}${path}`));
  }

  createSession(goal: string): Promise<SessionJson> {
    return this.post("/sessions", { goal });
  }

  getSession(id: string): Promise<SessionJson> {
    return this.get(`/sessions/${id}`);
  }

  box(id: string, revision: number, side: Side, polygon: Point[]): Promise<BoxResponse> {
    return this.post(`/sessions/${id}/box`, {
      revision,
      side,
      polygon: polygon.map((p) => [p.x, p.y]),
    });
  }

  rewrite(
    id: string,
    revision: number,
    side: Side,
    box: number,
    hyp: string,
    direction: Direction,
  ): Promise<SessionJson> {
    return this.post(`/sessions/${id}/rewrite`, { revision, side, box, hyp, direction });
  }

  drag(id: string, revision: number, side: Side, node: number, x: number, y: number): Promise<SessionJson> {
    return this.post(`/sessions/${id}/drag`, { revision, side, node, x, y });
  }

  unfold(id: string, revision: number, name: string): Promise<SessionJson> {
    return this.post(`/sessions/${id}/unfold`, { revision, name });
  }

  unbox(id: string, revision: number, side: Side, box: number): Promise<SessionJson> {
    return this.post(`/sessions/${id}/unbox`, { revision, side, box });
  }

  undo(id: string, revision: number): Promise<SessionJson> {
    return this.post(`/sessions/${id}/undo`, { revision });
  }

  matches(id: string, side: Side, box: number): Promise<{ matches: Match[] }> {
    return this.get(`/sessions/${id}/matches?side=${side}&box=${box}`);
  }

  extract(id: string): Promise<{ lhs: string; rhs: string }> {
    return this.get(`/sessions/${id}/extract`);
  }

  exportScript(id: string, format: "neutral" | "rocq" = "neutral"): Promise<ExportResponse> {
    return this.get(`/sessions/${id}/export?format=${format}`);
  }

  schema(): Promise<{ version: string }> {
    return this.get("/schema");
  }
}
