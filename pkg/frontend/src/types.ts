/** Wire types of the cohortdiff HTTP API. */

export interface QueryWire {
  center: string[];
  env: string[];
  exclusive: boolean;
}

/** A subject is a set of type labels or a microenvironment query. */
export type SubjectWire = string[] | QueryWire;

export function isQuerySubject(subject: SubjectWire): subject is QueryWire {
  return !Array.isArray(subject);
}

export interface SampleValue {
  sample: string;
  value: number;
}

export interface CurveWire {
  grid: number[];
  density: number[];
  bandwidth: number;
}

export interface FencesWire {
  q1: number;
  q3: number;
  iqr: number;
  low: number;
  high: number;
}

export interface OutlierEntryWire {
  sample: string;
  value: number;
  flag: "low" | "high" | "none";
}

export interface CohortOutliersWire {
  fences: FencesWire;
  entries: OutlierEntryWire[];
}

export interface DistributionWire {
  subject: SubjectWire;
  mode: string;
  values: { a: SampleValue[]; b: SampleValue[] };
  curves?: { a: CurveWire; b: CurveWire } | null;
  outliers?: { a: CohortOutliersWire; b: CohortOutliersWire } | null;
}

export interface DistributionResponse extends DistributionWire {
  revision: number;
}

export interface HeatmapResponse {
  variant: "difference" | "metric";
  labels: string[];
  matrix: number[][];
  max_abs: number;
  metric?: string | null;
  flagged_rows?: { a: string[]; b: string[] } | null;
  sentinels: number[][];
  revision: number;
}

export interface RemainingEntryWire {
  extension: string | null;
  query: QueryWire;
  distribution: DistributionWire;
  score: number;
  sentinel: boolean;
}

export interface QueryResponse {
  distribution: DistributionWire;
  matches: Record<string, string[]>;
  remaining: RemainingEntryWire[];
  revision: number;
}

export interface GeometryCellWire {
  cell_id: string;
  type: string;
  x: number;
  y: number;
  highlighted: boolean;
  outline?: number[][] | null;
}

export interface GeometryResponse {
  sample: string;
  cohort: "A" | "B";
  cells: GeometryCellWire[];
  revision: number;
}

export interface RankEntryWire {
  types: string[];
  score: number;
  sentinel: boolean;
}

export interface RankResponse {
  metric: string;
  mode: string;
  ranking: RankEntryWire[];
  revision: number;
}

export interface CohortSummaryWire {
  label: string;
  samples: string[];
  n_samples: number;
  n_cells: number;
}

export interface ProjectResponse {
  summary: {
    types: string[];
    radius: number;
    cohorts: { A: CohortSummaryWire; B: CohortSummaryWire };
    n_cells: number;
  };
  revision: number;
}

export type Metric = "silhouette" | "dunn";
export type Mode = "absolute" | "relative";
