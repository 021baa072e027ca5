/** REST client for the correction service. */

import type { EventResponse, ExportResponse, SessionEvent, SessionState } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    if (!resp.ok) {
      let message = text;
      try {
        message = (JSON.parse(text) as { error?: string }).error ?? text;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(resp.status, message);
    }
    return JSON.parse(text) as T;
  }

  async createTrial(body: Record<string, unknown>): Promise<string> {
    const out = await this.request<{ trial_id: string }>("POST", "/api/trials", body);
    return out.trial_id;
  }

  async createSession(trialId: string, algorithm: string, params?: Record<string, unknown>): Promise<{ session_id: string; state: SessionState }> {
    return this.request("POST", "/api/sessions", { trial_id: trialId, algorithm, params });
  }

  async getState(sessionId: string): Promise<SessionState> {
    const out = await this.request<{ state: SessionState }>("GET", `/api/sessions/${sessionId}`);
    return out.state;
  }

  async sendEvent(sessionId: string, event: SessionEvent): Promise<EventResponse> {
    return this.request("POST", `/api/sessions/${sessionId}/events`, event);
  }

  async exportSession(sessionId: string): Promise<ExportResponse> {
    return this.request("GET", `/api/sessions/${sessionId}/export`);
  }

  async getAoisCsv(trialId: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/trials/${trialId}/aois`);
    if (!resp.ok) throw new ApiError(resp.status, await resp.text());
    return resp.text();
  }

  stimulusUrl(trialId: string): string {
    return `${this.baseUrl}/api/trials/${trialId}/stimulus`;
  }
}
