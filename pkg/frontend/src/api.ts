import type {
  ContributionRow,
  DiachronicPoint,
  LanguageScore,
  TaskReport,
  TaskSummary,
  UnderservedRanking,
  WhatIfResult,
} from "./types.js";

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

// Thin typed wrapper over the JSON endpoints. Injectable fetch so tests can
// serve committed fixture bodies instead of a live server.
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    let resp;
    try {
      resp = await this.fetchFn(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(0, `API unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body && body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  tasks(): Promise<TaskSummary[]> {
    return this.get("/tasks");
  }

  report(task: string): Promise<TaskReport> {
    return this.get(`/tasks/${task}/report`);
  }

  underserved(task: string, tau: number, limit: number): Promise<UnderservedRanking> {
    return this.get(`/tasks/${task}/underserved?tau=${tau}&limit=${limit}`);
  }

  languages(task: string): Promise<LanguageScore[]> {
    return this.get(`/tasks/${task}/languages`);
  }

  diachronic(task: string, tau: 0 | 1): Promise<DiachronicPoint[]> {
    return this.get(`/tasks/${task}/diachronic?tau=${tau}`);
  }

  contributions(task: string, kind: "system" | "dataset", tau: number): Promise<ContributionRow[]> {
    return this.get(`/tasks/${task}/contributions?kind=${kind}&tau=${tau}`);
  }

  whatif(task: string, language: string, utility: number): Promise<WhatIfResult> {
    return this.get(`/whatif?task=${task}&language=${language}&utility=${utility}`);
  }
}
