/**
 * Thin HTTP client for the scoring service. All methods throw ServiceError
 * with the server's error code on a non-2xx body; transport failures
 * propagate as whatever the fetch implementation throws, so the sender can
 * tell "server said no" from "never reached the server".
 */

import type {
  AppendAck,
  ErrorBody,
  EventBatch,
  FinalizeResponse,
  ParticipantIn,
  SessionCreated,
  SessionStatusOut,
  VariantManifest,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  createSession(participant: ParticipantIn): Promise<SessionCreated> {
    return this.request("POST", "/v1/sessions", participant);
  }

  appendEvents(sessionId: string, batch: EventBatch): Promise<AppendAck> {
    return this.request("POST", `/v1/sessions/${sessionId}/events`, batch);
  }

  finalize(sessionId: string): Promise<FinalizeResponse> {
    return this.request("POST", `/v1/sessions/${sessionId}/finalize`);
  }

  getSession(sessionId: string): Promise<SessionStatusOut> {
    return this.request("GET", `/v1/sessions/${sessionId}`);
  }

  getManifest(variant: string): Promise<VariantManifest> {
    return this.request("GET", `/v1/manifest/${variant}`);
  }

  /** Upload a model artifact (raw JSON bytes) and activate it. */
  activateModel(artifact: string): Promise<{ version: string; variant: string }> {
    return this.request("POST", "/v1/models", artifact, "application/json");
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    rawContentType?: string,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token !== undefined) headers["x-api-token"] = this.token;
    let payload: string | undefined;
    if (body !== undefined) {
      if (rawContentType !== undefined) {
        headers["content-type"] = rawContentType;
        payload = body as string;
      } else {
        headers["content-type"] = "application/json";
        payload = JSON.stringify(body);
      }
    }
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: payload,
    });
    if (!response.ok) {
      let parsed: Partial<ErrorBody> = {};
      try {
        parsed = (await response.json()) as ErrorBody;
      } catch {
        // non-JSON error body; keep the status alone
      }
      throw new ServiceError(
        response.status,
        parsed.code ?? "unknown",
        parsed.message ?? `request failed with status ${response.status}`,
        parsed.details ?? {},
      );
    }
    return (await response.json()) as T;
  }
}
