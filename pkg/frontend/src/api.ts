// Typed client for the delaydesign HTTP JSON API. Every number shown in the
// UI comes verbatim from one of these responses.

export interface Quasi {
  n: number;
  m: number;
  a: number[];
  b: number[];
  tau: number;
}

export interface Rect {
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
}

/** [re, im, multiplicity, residual] */
export type RootRow = [number, number, number, number];

export interface RootSet {
  rectangle: Rect;
  roots: RootRow[];
  winding_count: number;
  window_abscissa: number | null;
}

export interface Design {
  quasipolynomial: Quasi;
  residuals: number[];
  condition_estimate: number;
  solved_parameter: number | null;
}

export interface Contour {
  rectangle: { s0_min: number; s0_max: number; tau_min: number; tau_max: number };
  /** [rows (tau), cols (s0)] */
  grid_shape: [number, number];
  /** polylines of [s0, tau] vertices */
  polylines: [number, number][][];
  grid?: (number | null)[][];
}

export interface Sweep {
  epsilon: number;
  K: number;
  per_k: Record<string, RootSet>;
}

export interface Trajectory {
  t: number[];
  y: number[];
  h: number;
}

export interface Health {
  status: string;
  version: string;
  backend: string;
}

export interface ApiError {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}

export type InitialCondition =
  | { constant: number }
  | { polynomial: number[] }
  | { exponential: { amplitude: number; rate: number } }
  | { trigonometric: { amplitude: number; frequency: number; phase: number } };

export interface GenericMidRequest {
  n: number;
  m: number;
  tau: number;
  s0: number;
}

export interface GenericCrridRequest {
  n: number;
  m: number;
  tau: number;
  roots: number[];
}

export interface ControlMidRequest {
  n: number;
  m: number;
  a: number[];
  given: { tau: number } | { s0: number };
  search_min?: number;
  search_max?: number;
}

export interface AdmissibilityRequest {
  n: number;
  m: number;
  a: number[];
  s0_min: number;
  tau_max: number;
  grid?: [number, number];
}

export interface RootsRequest {
  q: Quasi;
  rect: Rect;
}

export interface SensitivityRequest {
  q: Quasi;
  rect: Rect;
  epsilon: number;
  K: number;
}

export interface SimulateRequest {
  q: Quasi;
  ic: InitialCondition;
  T: number;
  steps?: number;
}

/** A non-2xx response, carrying the service's structured error document. */
export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly error: ApiError,
  ) {
    super(`${error.code}: ${error.message}`);
    this.name = "ApiFailure";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    const payload = await resp.json();
    if (!resp.ok) throw new ApiFailure(resp.status, payload as ApiError);
    return payload as T;
  }

  async health(signal?: AbortSignal): Promise<Health> {
    const resp = await this.fetchImpl(this.base + "/health", { signal });
    const payload = await resp.json();
    if (!resp.ok) throw new ApiFailure(resp.status, payload as ApiError);
    return payload as Health;
  }

  genericMid(req: GenericMidRequest, signal?: AbortSignal): Promise<Design> {
    return this.post("/design/generic-mid", req, signal);
  }

  genericCrrid(req: GenericCrridRequest, signal?: AbortSignal): Promise<Design> {
    return this.post("/design/generic-crrid", req, signal);
  }

  controlMid(req: ControlMidRequest, signal?: AbortSignal): Promise<Design[]> {
    return this.post("/design/control-mid", req, signal);
  }

  admissibility(req: AdmissibilityRequest, signal?: AbortSignal): Promise<Contour> {
    return this.post("/admissibility", req, signal);
  }

  roots(req: RootsRequest, signal?: AbortSignal): Promise<RootSet> {
    return this.post("/roots", req, signal);
  }

  sensitivity(req: SensitivityRequest, signal?: AbortSignal): Promise<Sweep> {
    return this.post("/sensitivity", req, signal);
  }

  simulate(req: SimulateRequest, signal?: AbortSignal): Promise<Trajectory> {
    return this.post("/simulate", req, signal);
  }
}

/** Human-readable line for inline error display. */
export function describeFailure(err: unknown): string {
  if (err instanceof ApiFailure) {
    if (err.error.code === "blow_up" && typeof err.error.details?.time === "number") {
      return `${err.error.message} (diverged at t = ${err.error.details.time})`;
    }
    return `${err.error.code}: ${err.error.message}`;
  }
  if (err instanceof Error) return err.message;
  return String(err);
}
