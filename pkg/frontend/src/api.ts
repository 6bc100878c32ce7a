/** Typed client for the cohortdiff API with stale-response discarding.
 *
 * Responses are keyed by (revision, request); when concurrent requests for
 * the same view race, only the latest issued one wins.
 */

import type {
  DistributionResponse,
  GeometryResponse,
  HeatmapResponse,
  Metric,
  Mode,
  ProjectResponse,
  QueryResponse,
  QueryWire,
  RankResponse,
  SubjectWire,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public field?: string,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body.error ?? response.statusText, body.field);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private get<T>(path: string, params: Record<string, string>): Promise<T> {
    const search = new URLSearchParams(params).toString();
    const url = `${this.baseUrl}${path}${search ? `?${search}` : ""}`;
    return this.fetchFn(url).then((r) => parse<T>(r));
  }

  project(): Promise<ProjectResponse> {
    return this.get("/project", {});
  }

  distributions(subject: SubjectWire, mode: Mode, grid = 128): Promise<DistributionResponse> {
    return this.get("/distributions", {
      subject: JSON.stringify(subject),
      mode,
      grid: String(grid),
    });
  }

  heatmap(variant: "difference" | "metric", metric?: Metric): Promise<HeatmapResponse> {
    const params: Record<string, string> = { variant };
    if (metric) params.metric = metric;
    return this.get("/heatmap", params);
  }

  rank(metric: Metric, mode: Mode): Promise<RankResponse> {
    return this.get("/rank", { metric, mode });
  }

  geometry(sampleId: string, highlight?: SubjectWire): Promise<GeometryResponse> {
    const params: Record<string, string> = {};
    if (highlight !== undefined) params.highlight = JSON.stringify(highlight);
    return this.get(`/samples/${encodeURIComponent(sampleId)}/geometry`, params);
  }

  query(query: QueryWire, mode: Mode, metric: Metric): Promise<QueryResponse> {
    return this.fetchFn(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query, mode, metric }),
    }).then((r) => parse<QueryResponse>(r));
  }
}

/** Wraps an async slot so that out-of-order resolutions never overwrite
 *  newer ones: only the most recently issued request may apply. */
export class LatestSlot<T> {
  private ticket = 0;

  async run(task: () => Promise<T>, apply: (value: T) => void): Promise<T | undefined> {
    const mine = ++this.ticket;
    const value = await task();
    if (mine === this.ticket) {
      apply(value);
      return value;
    }
    return undefined;
  }
}
