/** Thin fetch client. Every call is a POST of a JSON body to one endpoint. */

import type {
  ApiErrorBody,
  ApiEnvelope,
  BiasResult,
  CurveResult,
  ModelParams,
  SensitivityRequest,
  SensitivityResult,
  SweepParameter,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function post<T>(baseUrl: string, route: string, body: unknown): Promise<T> {
  const response = await fetch(baseUrl + route, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const payload = (await response.json()) as ApiEnvelope<T> | ApiErrorBody;
  if (!response.ok) {
    const err = (payload as ApiErrorBody).error ?? {
      code: "unknown",
      message: `HTTP ${response.status}`,
    };
    throw new ApiError(response.status, err.code, err.message);
  }
  return (payload as ApiEnvelope<T>).result;
}

export class Client {
  constructor(readonly baseUrl: string = "") {}

  bias(params: ModelParams): Promise<BiasResult> {
    return post<BiasResult>(this.baseUrl, "/api/bias", { params });
  }

  curve(
    params: ModelParams,
    parameter: SweepParameter,
    start: number,
    stop: number,
    points: number,
  ): Promise<CurveResult> {
    return post<CurveResult>(this.baseUrl, "/api/curve", {
      params,
      parameter,
      start,
      stop,
      points,
    });
  }

  sensitivity(request: SensitivityRequest): Promise<SensitivityResult> {
    return post<SensitivityResult>(this.baseUrl, "/api/sensitivity", request);
  }
}
