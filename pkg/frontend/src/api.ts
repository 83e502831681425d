/** Typed client for the scoring service; all UI traffic funnels through here. */

import type {
  AuditResponse,
  AxisDefinition,
  AxisSummary,
  BrushClauseDto,
  BrushResponse,
  End,
  HistogramData,
  IntersectionalResponse,
  NeutralSetDto,
  ScalingMode,
  ScoresPage,
  WordNotFoundDetail,
  WordProfileDto,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class WordNotFound extends ApiError {
  constructor(public detail: WordNotFoundDetail) {
    super(404, `'${detail.word}' is not in the vocabulary`);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({ detail: resp.statusText }));
      throw new ApiError(resp.status, JSON.stringify(body.detail ?? body));
    }
    return resp.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string; words: number; axes: string[] }> {
    return this.request("/healthz");
  }

  async axes(): Promise<AxisSummary[]> {
    const body = await this.request<{ axes: AxisSummary[] }>("/axes");
    return body.axes;
  }

  addAxis(definition: AxisDefinition): Promise<AxisSummary> {
    return this.post("/axes", definition);
  }

  async deleteAxis(name: string): Promise<void> {
    const resp = await this.fetchFn(`${this.baseUrl}/axes/${encodeURIComponent(name)}`, {
      method: "DELETE",
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, `cannot delete axis '${name}'`);
    }
  }

  scoresPage(mode: ScalingMode, offset: number, limit: number): Promise<ScoresPage> {
    return this.request(`/scores?mode=${mode}&offset=${offset}&limit=${limit}`);
  }

  /** Every score row, walking the paged endpoint until exhausted. */
  async allScores(mode: ScalingMode, pageSize = 1000, maxRows = 60_000): Promise<ScoresPage> {
    const first = await this.scoresPage(mode, 0, pageSize);
    const rows = [...first.rows];
    while (rows.length < Math.min(first.total, maxRows)) {
      const page = await this.scoresPage(mode, rows.length, pageSize);
      if (page.rows.length === 0) break;
      rows.push(...page.rows);
    }
    return { ...first, rows };
  }

  histogram(selector: string, mode: ScalingMode, bins: number): Promise<HistogramData> {
    return this.request(
      `/histogram?selector=${encodeURIComponent(selector)}&mode=${mode}&bins=${bins}`,
    );
  }

  brush(clauses: BrushClauseDto[], mode: ScalingMode): Promise<BrushResponse> {
    return this.post("/query/brush", { clauses, mode });
  }

  intersectional(
    subgroups: { axis: string; end: End }[],
    threshold: number,
  ): Promise<IntersectionalResponse> {
    return this.post("/query/intersectional", { subgroups, threshold });
  }

  async neutralSets(): Promise<NeutralSetDto[]> {
    const body = await this.request<{ sets: NeutralSetDto[] }>("/neutral-sets");
    return body.sets;
  }

  audit(set: string, threshold: number, mode: ScalingMode): Promise<AuditResponse> {
    return this.post("/audit", { set, threshold, mode });
  }

  async word(word: string, k = 10): Promise<WordProfileDto> {
    const resp = await this.fetchFn(
      `${this.baseUrl}/words/${encodeURIComponent(word)}?k=${k}`,
    );
    if (resp.status === 404) {
      const body = await resp.json();
      throw new WordNotFound(body.detail as WordNotFoundDetail);
    }
    if (!resp.ok) {
      throw new ApiError(resp.status, resp.statusText);
    }
    return resp.json() as Promise<WordProfileDto>;
  }

  exportUrl(mode: ScalingMode): string {
    return `${this.baseUrl}/export.csv?mode=${mode}`;
  }
}
