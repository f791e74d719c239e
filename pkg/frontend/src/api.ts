/**
 * The inspector's only doorway to tapaudit: the HTTP API. No module
 * in this package talks to a browser engine or recomputes analysis —
 * everything shown comes from these endpoints.
 */

import type {
  AnalyzeRequest,
  AnalyzeResponse,
  DeviceProfile,
  StoredReport,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  /** Failure stage reported by the server (e.g. "connect", "navigate"). */
  readonly stage: string | null;

  constructor(status: number, message: string, stage: string | null = null) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.stage = stage;
  }
}

type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; text(): Promise<string> }>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(path: string, init?: Parameters<FetchLike>[1]): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const body = await response.text();
    if (!response.ok) {
      let detail = body || `request failed with status ${response.status}`;
      let stage: string | null = null;
      try {
        const parsed = JSON.parse(body);
        if (typeof parsed.detail === "string") {
          detail = parsed.detail;
        }
        if (typeof parsed.stage === "string") {
          stage = parsed.stage;
        }
      } catch {
        // non-JSON error body: keep the raw text
      }
      throw new ApiError(response.status, detail, stage);
    }
    return JSON.parse(body) as T;
  }

  devices(): Promise<DeviceProfile[]> {
    return this.request<DeviceProfile[]>("/api/devices");
  }

  analyze(request: AnalyzeRequest): Promise<AnalyzeResponse> {
    return this.request<AnalyzeResponse>("/api/analyze", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  report(reportId: string): Promise<StoredReport> {
    return this.request<StoredReport>(`/api/reports/${reportId}`);
  }

  /** The unannotated screenshot the overlay is drawn on. */
  rawScreenshotUrl(reportId: string): string {
    return `${this.baseUrl}/api/reports/${reportId}/raw.png`;
  }

  /** The server-annotated screenshot (canonical export). */
  annotatedScreenshotUrl(reportId: string): string {
    return `${this.baseUrl}/api/reports/${reportId}/screenshot.png`;
  }

  /** Submit, then load the resulting report in one step. */
  async submitAnalysis(request: AnalyzeRequest): Promise<StoredReport> {
    const submitted = await this.analyze(request);
    return this.report(submitted.report_id);
  }
}
