import type {
  CompareResult,
  FieldError,
  JobView,
  NetworkPayload,
  Rankings,
  ScenarioPayload,
  SolveResult,
} from "./types.js";

export interface SolverOptions {
  tolerance?: number;
  max_iterations?: number;
  weight_access?: number;
  weight_charging?: number;
  gap_check_period?: number;
  seed?: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public fieldErrors: FieldError[] = [],
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the /v1 endpoints; all math stays on the server. */
export class ApiClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  setBase(base: string): void {
    this.base = base.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.base}${path}`, {
      method,
      headers: body !== undefined ? { "content-type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await resp.text();
    const payload = text ? JSON.parse(text) : null;
    if (!resp.ok) {
      const detail = payload?.detail;
      if (Array.isArray(detail)) {
        const fields = detail as FieldError[];
        const msg = fields.map((d) => `${d.field}: ${d.message}`).join("; ");
        throw new ApiError(resp.status, msg, fields);
      }
      throw new ApiError(resp.status, typeof detail === "string" ? detail : resp.statusText);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/v1/health");
  }

  validateNetwork(network: NetworkPayload): Promise<{ ok: boolean; nodes: number; stations: number }> {
    return this.request("POST", "/v1/networks/validate", network);
  }

  solve(network: NetworkPayload, options?: SolverOptions): Promise<{ job_id: string }> {
    return this.request("POST", "/v1/solve", { network, options });
  }

  compare(
    network: NetworkPayload,
    scenarios: ScenarioPayload[],
    options?: SolverOptions,
  ): Promise<{ job_id: string }> {
    return this.request("POST", "/v1/scenarios/compare", { network, scenarios, options });
  }

  job(jobId: string): Promise<JobView> {
    return this.request("GET", `/v1/jobs/${jobId}`);
  }

  solveResult(jobId: string): Promise<SolveResult> {
    return this.request("GET", `/v1/jobs/${jobId}/result`);
  }

  compareResult(jobId: string): Promise<CompareResult> {
    return this.request("GET", `/v1/jobs/${jobId}/result`);
  }

  rankings(
    jobId: string,
    criterion: "utilization" | "queue_delay",
    chargerClass?: "LEVEL2" | "DCFC" | "CUSTOM",
    limit?: number,
  ): Promise<Rankings> {
    const params = new URLSearchParams({ criterion });
    if (chargerClass) params.set("charger_class", chargerClass);
    if (limit !== undefined) params.set("limit", String(limit));
    return this.request("GET", `/v1/jobs/${jobId}/rankings?${params}`);
  }

  cancelJob(jobId: string): Promise<{ job_id: string; status: string }> {
    return this.request("DELETE", `/v1/jobs/${jobId}`);
  }
}
