import type {
  ApiErrorBody, ApiResult, CompareMatrix, ComposeRequest, ComposeResponse,
  QueryResponse, RecordEnvelope,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin client over /api/v1; the fetch implementation is injectable so tests
 * can run against recorded responses without a backend. */
export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<ApiResult<T>> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    const doc = await response.json();
    if (response.status >= 400) {
      return { ok: false, error: doc as ApiErrorBody, status: response.status };
    }
    return { ok: true, data: doc as T };
  }

  query(mql: string): Promise<ApiResult<QueryResponse>> {
    return this.request("POST", "/api/v1/query", { mql });
  }

  record(kind: string, id: string): Promise<ApiResult<RecordEnvelope>> {
    return this.request("GET", `/api/v1/records/${kind}/${encodeURIComponent(id)}`);
  }

  compare(ids: string[]): Promise<ApiResult<CompareMatrix>> {
    return this.request("GET", `/api/v1/compare?ids=${encodeURIComponent(ids.join(","))}`);
  }

  compose(doc: ComposeRequest): Promise<ApiResult<ComposeResponse>> {
    return this.request("POST", "/api/v1/compose", doc);
  }

  health(): Promise<ApiResult<{ status: string; record_counts: Record<string, number> }>> {
    return this.request("GET", "/api/v1/health");
  }
}
