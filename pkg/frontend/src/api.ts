/** Typed client for the annotation service. One method per endpoint, nothing else. */

import type {
  AgreementResponse,
  Label,
  NextItemResponse,
  ProgressResponse,
  SubmitResponse,
} from "./types.js";

/** A failed request: HTTP status (0 for network-level failures) plus the server detail. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** What the session and dashboard need from the backend; `Api` is the real implementation. */
export interface ApiClient {
  labelChoices(): Promise<{ labels: string[] }>;
  nextItem(annotator: string): Promise<NextItemResponse>;
  submitLabel(annotator: string, queryId: string, label: Label): Promise<SubmitResponse>;
  progress(): Promise<ProgressResponse>;
  agreement(): Promise<AgreementResponse>;
}

export class Api implements ApiClient {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  labelChoices(): Promise<{ labels: string[] }> {
    return this.request("GET", "/api/labels/choices");
  }

  nextItem(annotator: string): Promise<NextItemResponse> {
    return this.request("GET", `/api/items/next?annotator=${encodeURIComponent(annotator)}`);
  }

  submitLabel(annotator: string, queryId: string, label: Label): Promise<SubmitResponse> {
    return this.request("POST", "/api/labels", {
      annotator,
      query_id: queryId,
      label,
    });
  }

  progress(): Promise<ProgressResponse> {
    return this.request("GET", "/api/progress");
  }

  agreement(): Promise<AgreementResponse> {
    return this.request("GET", "/api/agreement");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (exc) {
      throw new ApiError(0, `network error: ${String(exc)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as T;
  }
}

/** Pull the human-readable detail out of an error response body. */
async function errorDetail(response: Response): Promise<string> {
  let data: unknown;
  try {
    data = await response.json();
  } catch {
    return `HTTP ${response.status}`;
  }
  if (data && typeof data === "object" && "detail" in data) {
    const detail = (data as { detail: unknown }).detail;
    // Validation errors arrive as a list of objects; flatten for display.
    return typeof detail === "string" ? detail : JSON.stringify(detail);
  }
  return `HTTP ${response.status}`;
}
