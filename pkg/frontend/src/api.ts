// HTTP client for the game service.  The server is the sole rule authority;
// error bodies are passed through verbatim so the UI can surface them.

import type { ApiErrorBody, MoveJson, SessionView } from "./types.js";

export type MoveOutcome =
  | { ok: true; view: SessionView }
  | { ok: false; error: ApiErrorBody };

export interface CreateSessionRequest {
  kind: { variant: string; dimension: number; beta: number; alpha?: number; beta0?: number };
  initial_ball: { center: number[]; radius: number };
  engine_side?: "alice" | "bob";
  engine_strategy?: Record<string, unknown>;
  idempotency_key?: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(private baseUrl: string,
              private fetchImpl: FetchLike = (...a) => fetch(...a)) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body as ApiErrorBody);
    }
    return body;
  }

  async createSession(req: CreateSessionRequest): Promise<SessionView> {
    return (await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    })) as SessionView;
  }

  async getSession(id: string): Promise<SessionView> {
    return (await this.request(`/sessions/${id}`)) as SessionView;
  }

  /** Post the human move; a rejected move returns the server's error body
   *  untouched rather than throwing, so callers can show it verbatim. */
  async postMove(id: string, move: MoveJson, final = false): Promise<MoveOutcome> {
    try {
      const view = (await this.request(`/sessions/${id}/moves`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ move, final }),
      })) as SessionView;
      return { ok: true, view };
    } catch (err) {
      if (err instanceof ApiError && err.status !== 404) {
        return { ok: false, error: err.body };
      }
      throw err;
    }
  }
}

export class ApiError extends Error {
  constructor(public status: number, public body: ApiErrorBody) {
    super(body.message ?? "request failed");
  }
}
