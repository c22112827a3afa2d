/** Wire types of the bias-analysis API. The UI never recomputes any of these. */

export interface ModelParams {
  lambda: number;
  pi0: number;
  pi1: number;
  p0: number;
  p1: number;
  gamma: number;
}

export type SweepParameter = "lambda" | "pi0" | "pi1" | "gamma" | "p0" | "p1";

export interface Observables {
  ell: number;
  omega: number;
  pi_star0: number;
  pi_star1: number;
}

export interface BiasResult {
  bias_cm: number;
  bias_msm: number;
  observables: Observables;
}

export interface CurvePoint {
  value: number;
  /** null where the bias is undefined (positivity violations etc.) */
  bias_cm: number | null;
  bias_msm: number | null;
}

export interface CurveResult {
  parameter: string;
  points: CurvePoint[];
}

export interface SensitivityRequest {
  observables: Observables;
  sens_range: [number, number];
  spec_range: [number, number];
  gamma: number;
  draws: number;
  seed: number;
}

export interface DistributionSummary {
  estimator: string;
  mean: number;
  median: number;
  iqr: [number, number];
  histogram: { edges: number[]; counts: number[] };
  n_values: number;
}

export interface SensitivityResult {
  cm: DistributionSummary;
  msm: DistributionSummary;
  n_feasible: number;
  n_infeasible: number;
  proportion_infeasible: number;
}

export interface ApiEnvelope<T> {
  schema_version: string;
  inputs: unknown;
  result: T;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
