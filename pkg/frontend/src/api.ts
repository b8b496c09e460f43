// Typed client over the documented session/library API. Fetch is injected
// so tests can record the exact call trace.

import type { PromptListing, PromptRecord, SessionView } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await response.json();
    if (!response.ok) {
      const error = payload?.error ?? { code: "Unknown", message: "request failed" };
      throw new ApiError(error.code, error.message, response.status);
    }
    return payload as T;
  }

  async getSession(sessionId: string): Promise<SessionView> {
    const body = await this.request<{ session: SessionView }>(
      "GET",
      `/sessions/${sessionId}`,
    );
    return body.session;
  }

  async runTestPass(sessionId: string): Promise<SessionView> {
    const body = await this.request<{ session: SessionView }>(
      "POST",
      `/sessions/${sessionId}/test`,
    );
    return body.session;
  }

  async submitComments(
    sessionId: string,
    comments: { text: string; module_hint?: string | null }[],
  ): Promise<SessionView> {
    const body = await this.request<{ session: SessionView }>(
      "POST",
      `/sessions/${sessionId}/comments`,
      { comments },
    );
    return body.session;
  }

  async reflect(sessionId: string): Promise<SessionView> {
    const body = await this.request<{ session: SessionView }>(
      "POST",
      `/sessions/${sessionId}/reflect`,
    );
    return body.session;
  }

  async finalize(sessionId: string): Promise<{ session_id: string; document: string; role_name: string }> {
    return this.request("POST", `/sessions/${sessionId}/finalize`);
  }

  async listPrompts(filter?: string): Promise<PromptListing[]> {
    const query = filter ? `?filter=${encodeURIComponent(filter)}` : "";
    const body = await this.request<{ prompts: PromptListing[] }>("GET", `/prompts${query}`);
    return body.prompts;
  }

  async getPrompt(id: string, version?: string): Promise<PromptRecord> {
    const query = version ? `?version=${encodeURIComponent(version)}` : "";
    return this.request("GET", `/prompts/${id}${query}`);
  }
}
