// Thin client for the tutoring service. All session mutation goes
// through these endpoints and nowhere else.

import type {
  CreatedSession,
  SceneView,
  SessionView,
  TurnOutcome,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public retryable: boolean,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function fail(response: Response): Promise<never> {
  let code = `HTTP${response.status}`;
  let detail = response.statusText;
  let retryable = false;
  try {
    const body = await response.json();
    code = body.error ?? code;
    detail = body.detail ?? detail;
    retryable = body.retryable === true || response.status === 503;
  } catch {
    retryable = response.status === 503;
  }
  throw new ApiError(response.status, code, retryable, detail);
}

export class ApiClient {
  constructor(
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private base: string = "",
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.base + path);
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await fail(response);
    return response.json() as Promise<T>;
  }

  listScenes(): Promise<{ scenes: SceneView[] }> {
    return this.getJson("/scenes");
  }

  createSession(
    sceneId: string,
    language: string,
    maxTurns?: number,
  ): Promise<CreatedSession> {
    const body: Record<string, unknown> = { scene_id: sceneId, language };
    if (maxTurns !== undefined) body.max_turns = maxTurns;
    return this.postJson("/sessions", body);
  }

  postTextTurn(sessionId: string, text: string, token: string): Promise<TurnOutcome> {
    return this.postJson(`/sessions/${sessionId}/turns`, {
      text,
      turn_token: token,
    });
  }

  postAudioTurn(sessionId: string, audioRef: string, token: string): Promise<TurnOutcome> {
    return this.postJson(`/sessions/${sessionId}/turns`, {
      audio_ref: audioRef,
      turn_token: token,
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.getJson(`/sessions/${sessionId}`);
  }

  async uploadAudio(blob: Blob): Promise<string> {
    const response = await this.fetchImpl(this.base + "/media", {
      method: "POST",
      headers: { "content-type": blob.type || "application/octet-stream" },
      body: blob,
    });
    if (!response.ok) await fail(response);
    const body = (await response.json()) as { audio_ref: string };
    return body.audio_ref;
  }
}

export function newTurnToken(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return `tok-${Date.now()}-${Math.random().toString(36).slice(2)}`;
}
