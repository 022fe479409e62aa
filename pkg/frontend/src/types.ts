// Shapes of the API bodies the dashboard consumes. Field names mirror the
// server's JSON exactly; the dashboard never derives numbers from them.

export interface MetricInfo {
  name: string;
  range_min: number;
  range_max: number;
  max_mode: "empirical" | { fixed: number };
}

export interface TaskSummary {
  id: string;
  category: string;
  metric: MetricInfo;
  language_role: "single" | "mt_source" | "mt_target";
  dataset_count: number;
  submission_count: number;
  covered_language_count: number;
}

export interface PerLanguageBest {
  best_value: number;
  utility: number;
  system: string;
  dataset: string;
}

export interface TaskReport {
  task: string;
  demographic_avg: number;
  linguistic_avg: number;
  gini: number;
  pop_coverage_pct: number;
  covered_language_count: number;
  per_language: Record<string, PerLanguageBest>;
}

export interface UnderservedEntry {
  code: string;
  population: number;
  utility: number;
  score: number;
}

export interface UnderservedRanking {
  task: string;
  tau: number;
  entries: UnderservedEntry[];
}

export interface LanguageScore {
  code: string;
  best_value: number;
  system: string;
}

export interface DiachronicPoint {
  at: string;
  value: number;
}

export interface ContributionRow {
  beneficiary: string;
  kind: "system" | "dataset";
  tau: number;
  total: number;
  events: number;
}

export interface WhatIfResult {
  task: string;
  language: string;
  utility: number;
  delta_m: Record<string, number>;
  new_rank_of_language: number;
  displaced_top3: string[];
}
