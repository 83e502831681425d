/** Wire formats of the scoring service, mirrored one-to-one. */

export type ScalingMode = "raw" | "minmax" | "percentile";
export type End = "neg" | "pos";

export const SCALING_MODES: ScalingMode[] = ["raw", "minmax", "percentile"];
export const ALL_AXES = "ALL";

export interface SubgroupSummary {
  name: string;
  resolved_words: number;
}

export interface AxisSummary {
  name: string;
  neg: SubgroupSummary;
  pos: SubgroupSummary;
}

export interface ScoreRow {
  word: string;
  scores: Record<string, number>;
  mean_abs: number;
}

export interface ScoresPage {
  mode: ScalingMode;
  offset: number;
  limit: number;
  total: number;
  axes: string[];
  rows: ScoreRow[];
}

export interface HistogramData {
  selector: string;
  mode: ScalingMode;
  bin_edges: number[];
  counts: number[];
}

export interface BrushClauseDto {
  axis: string;
  end: End;
  range: [number, number];
}

export interface BrushResultEntry {
  word: string;
  scores: Record<string, number>;
}

export interface BrushResponse {
  mode: ScalingMode;
  words: BrushResultEntry[];
}

export interface AxisScoresDto {
  axis: string;
  raw: number;
  minmax: number;
  percentile: number;
}

export interface WordProfileDto {
  word: string;
  per_axis: AxisScoresDto[];
  mean_abs: Record<ScalingMode, number>;
  neighbors: { word: string; distance: number }[];
}

export interface WordNotFoundDetail {
  word: string;
  suggestions: string[];
}

export interface NeutralSetDto {
  name: string;
  words: string[];
}

export interface AuditFlagDto {
  word: string;
  axis: string;
  end: End;
  score: number;
}

export interface AuditResponse {
  query: { set: string };
  mode: ScalingMode;
  threshold: number;
  results: { word: string; scores: Record<string, number> }[];
  flags: AuditFlagDto[];
  coverage: number;
}

export interface IntersectionalResponse {
  query: { subgroups: { axis: string; end: End }[] };
  mode: "percentile";
  threshold: number;
  results: { word: string; scores: Record<string, number> }[];
}

export interface AxisDefinition {
  name: string;
  neg: { name: string; words: string[] };
  pos: { name: string; words: string[] };
}
