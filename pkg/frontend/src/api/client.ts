/**
 * Thin typed client for the service HTTP/JSON API.
 *
 * All gating decisions live on the server; this client's only job is to
 * shape requests, attach the bearer token, and translate error envelopes
 * into ApiError values the views can render.  The fetch function is
 * injectable so tests can stub the server per response.
 */

import type {
  AdvanceResponse,
  ErrorEnvelope,
  EvaluationResponse,
  ExplanationDetailResponse,
  ExplanationSummaryResponse,
  LoginResponse,
  ScenarioDoc,
  ScenarioListResponse,
  WorkStatusResponse,
} from "./types";

export type FetchLike = (
  url: string,
  init: {
    method: string;
    headers: Record<string, string>;
    body?: string;
  },
) => Promise<{
  status: number;
  json(): Promise<unknown>;
}>;

/** A non-2xx response, carrying the server's error envelope fields. */
export class ApiError extends Error {
  readonly status: number;
  readonly reason: string;
  readonly gate?: string;
  readonly context?: Record<string, unknown>;

  constructor(status: number, body: ErrorEnvelope["error"]) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.reason = body.reason;
    this.gate = body.gate;
    this.context = body.context;
  }
}

function errorFromPayload(status: number, payload: unknown): ApiError {
  const envelope = payload as Partial<ErrorEnvelope> | null;
  const body = envelope?.error;
  if (body && typeof body.reason === "string") {
    return new ApiError(status, body);
  }
  return new ApiError(status, {
    reason: "HTTP_" + status,
    message: `unexpected response (status ${status})`,
  });
}

export interface ClientOptions {
  baseUrl: string;
  fetch: FetchLike;
  token?: string;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private token?: string;

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, "");
    this.fetchFn = options.fetch;
    this.token = options.token;
  }

  setToken(token: string): void {
    this.token = token;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = { Accept: "application/json" };
    if (this.token) headers.Authorization = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (response.status < 200 || response.status >= 300) {
      throw errorFromPayload(response.status, payload);
    }
    return payload as T;
  }

  async login(username: string, password: string): Promise<LoginResponse> {
    const result = await this.request<LoginResponse>("POST", "/api/login", {
      username,
      password,
    });
    this.token = result.token;
    return result;
  }

  getWork(groupId: string, step: number, owner?: string): Promise<unknown> {
    const query = owner === undefined ? "" : `?owner=${encodeURIComponent(owner)}`;
    return this.request("GET", `/api/groups/${groupId}/steps/${step}/work${query}`);
  }

  putWork(
    groupId: string,
    step: number,
    content: unknown,
  ): Promise<WorkStatusResponse> {
    return this.request("PUT", `/api/groups/${groupId}/steps/${step}/work`, {
      content,
    });
  }

  shareWork(groupId: string, step: number): Promise<WorkStatusResponse> {
    return this.request("POST", `/api/groups/${groupId}/steps/${step}/share`);
  }

  advance(groupId: string, step: number): Promise<AdvanceResponse> {
    return this.request("POST", `/api/groups/${groupId}/advance`, { step });
  }

  listScenarios(groupId: string): Promise<ScenarioListResponse> {
    return this.request("GET", `/api/groups/${groupId}/scenarios`);
  }

  createScenario(
    groupId: string,
    definition: {
      name: string;
      evidence: Record<string, string>;
      outputs?: string[];
      description?: string;
    },
  ): Promise<{ scenario: ScenarioDoc }> {
    return this.request("POST", `/api/groups/${groupId}/scenarios`, definition);
  }

  evaluateScenario(
    groupId: string,
    scenarioId: string,
  ): Promise<EvaluationResponse> {
    return this.request(
      "POST",
      `/api/groups/${groupId}/scenarios/${scenarioId}/evaluate`,
    );
  }

  getExplanation(
    groupId: string,
    scenarioId: string,
    level: "summary",
  ): Promise<ExplanationSummaryResponse>;
  getExplanation(
    groupId: string,
    scenarioId: string,
    level: "detail",
  ): Promise<ExplanationDetailResponse>;
  getExplanation(
    groupId: string,
    scenarioId: string,
    level: "summary" | "detail",
  ): Promise<ExplanationSummaryResponse | ExplanationDetailResponse> {
    return this.request(
      "GET",
      `/api/groups/${groupId}/scenarios/${scenarioId}/explanation?level=${level}`,
    );
  }
}
