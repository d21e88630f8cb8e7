// Client for the fairselect v1 HTTP endpoints.

export interface DatasetInfo {
  n: number;
  d: number;
  groups: string[];
  protectedShare: number;
  columnNames: string[];
}

export interface TopkRow {
  id: number;
  score: number;
  group: string;
}

export interface AuditResponse {
  fair: boolean;
  intervalMin: number;
  intervalMax: number;
  topkPreview: TopkRow[];
  wallMillis: number;
}

export interface RepairResult {
  verdict: "found" | "infeasible" | "budget-exhausted" | "timeout" | "cancelled";
  weight?: number[];
  subsetIds?: number[];
  wallMillis: number;
  verified: boolean;
}

export interface JobStatus {
  status: "queued" | "running" | "done" | "failed" | "cancelled";
  result?: RepairResult;
  error?: string;
}

export interface RepairRequest {
  w0: number[];
  eps: number;
  k: number;
  lower: number;
  upper: number;
  algorithm?: string;
  workers?: number;
  seed?: number;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson(response: Response): Promise<any> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && body.detail) detail = String(body.detail);
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json();
}

export class FairselectClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async dataset(): Promise<DatasetInfo> {
    return asJson(await this.fetchImpl(this.url("/v1/dataset")));
  }

  async audit(w: number[], k: number, lower: number, upper: number): Promise<AuditResponse> {
    const res = await this.fetchImpl(this.url("/v1/audit"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ w, k, lower, upper }),
    });
    return asJson(res);
  }

  async submitRepair(req: RepairRequest): Promise<string> {
    const res = await this.fetchImpl(this.url("/v1/repair"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    const body = await asJson(res);
    return body.jobId as string;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    return asJson(await this.fetchImpl(this.url(`/v1/jobs/${jobId}`)));
  }

  async cancelJob(jobId: string): Promise<JobStatus> {
    return asJson(
      await this.fetchImpl(this.url(`/v1/jobs/${jobId}`), { method: "DELETE" }),
    );
  }

  /** Poll a repair job until it settles; rejects on failure. */
  async waitForRepair(
    jobId: string,
    intervalMs = 150,
    isCancelled: () => boolean = () => false,
  ): Promise<RepairResult> {
    for (;;) {
      if (isCancelled()) {
        await this.cancelJob(jobId);
        throw new ApiError(499, "cancelled by user");
      }
      const job = await this.jobStatus(jobId);
      if (job.status === "done" && job.result) return job.result;
      if (job.status === "failed") throw new ApiError(500, job.error ?? "job failed");
      if (job.status === "cancelled") throw new ApiError(499, "job cancelled");
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }
}
