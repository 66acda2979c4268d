/** Thin typed client for the workbench HTTP API. */

import type { ApiErrorBody, MetaResponse, ProgramNode, RunResponse } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

export class NetworkError extends Error {}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new NetworkError(String(err));
    }
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  meta(): Promise<MetaResponse> {
    return this.request<MetaResponse>("/api/meta");
  }

  run(program: ProgramNode[], trace = true): Promise<RunResponse> {
    return this.post<RunResponse>("/api/run", { program, trace });
  }

  parseQuestion(question: string): Promise<{ program: ProgramNode[] }> {
    return this.post<{ program: ProgramNode[] }>("/api/parse", { question });
  }

  complete(kind: string, prefix: string, limit = 10): Promise<string[]> {
    const params = new URLSearchParams({ kind, prefix, limit: String(limit) });
    return this.request<{ candidates: string[] }>(`/api/completion?${params}`).then(
      (body) => body.candidates,
    );
  }
}
