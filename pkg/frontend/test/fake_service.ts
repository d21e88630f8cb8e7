// In-memory stand-in for the v1 service, exact on the three-candidate demo
// dataset (A=(1,0) protected, B=(0,1), C=(0.5,0.5)): scores under (t, 1-t)
// are t, 1-t and 0.5, compared in integer milli-units so ties are exact.

import { FetchLike } from "../src/api.js";

interface Job {
  status: "queued" | "running" | "done" | "cancelled";
  result?: any;
  ticksLeft: number;
}

const CANDS = [
  { id: 0, group: "G1" },
  { id: 1, group: "G2" },
  { id: 2, group: "G2" },
];

function scoresMilli(t: number): number[] {
  const tm = Math.round(t * 1000);
  return [tm, 1000 - tm, 500];
}

export function auditExact(w: number[], k: number, lower: number, upper: number) {
  const vals = scoresMilli(w[0]);
  const order = [...CANDS.keys()].sort((a, b) => vals[b] - vals[a] || a - b);
  const kth = vals[order[k - 1]];
  const above = order.filter((i) => vals[i] > kth);
  const tied = order.filter((i) => vals[i] === kth);
  let strictly: number[];
  let pool: number[];
  let slots: number;
  if (above.length + tied.length === k) {
    strictly = [...above, ...tied];
    pool = [];
    slots = 0;
  } else {
    strictly = above;
    pool = tied;
    slots = k - above.length;
  }
  const fixed = strictly.filter((i) => CANDS[i].group === "G1").length;
  const g = pool.filter((i) => CANDS[i].group === "G1").length;
  const o = pool.length - g;
  const lo = fixed + Math.max(0, slots - o);
  const hi = fixed + Math.min(slots, g);
  return {
    fair: Math.max(lo, lower) <= Math.min(hi, upper),
    intervalMin: lo,
    intervalMax: hi,
    topkPreview: order.slice(0, 20).map((i) => ({
      id: i,
      score: vals[i] / 1000,
      group: CANDS[i].group,
    })),
    wallMillis: 0.1,
  };
}

export class FakeService {
  jobs = new Map<string, Job>();
  auditCalls = 0;
  repairCalls = 0;
  cancelCalls = 0;
  failNextAudit = false;
  jobTicks = 2; // polls before a repair job settles
  private nextId = 1;

  repairExact(w0: number[], eps: number) {
    // fair region for k=1, L=U=1 is t >= 0.5; earliest in the box is 0.5
    if (w0[0] + eps >= 0.5) {
      return {
        verdict: "found",
        weight: [0.5, 0.5],
        wallMillis: 1.0,
        verified: true,
      };
    }
    return { verdict: "infeasible", wallMillis: 1.0, verified: false };
  }

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const respond = (status: number, payload: any) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });

    if (url.endsWith("/v1/dataset")) {
      return respond(200, {
        n: 3,
        d: 2,
        groups: ["G1", "G2"],
        protectedShare: 1 / 3,
        columnNames: ["a", "b"],
      });
    }
    if (url.endsWith("/v1/audit") && method === "POST") {
      this.auditCalls += 1;
      if (this.failNextAudit) {
        this.failNextAudit = false;
        return respond(400, { detail: "bad audit request" });
      }
      return respond(200, auditExact(body.w, body.k, body.lower, body.upper));
    }
    if (url.endsWith("/v1/repair") && method === "POST") {
      this.repairCalls += 1;
      const id = `job${this.nextId++}`;
      this.jobs.set(id, {
        status: "running",
        result: this.repairExact(body.w0, body.eps),
        ticksLeft: this.jobTicks,
      });
      return respond(200, { jobId: id });
    }
    const jobMatch = url.match(/\/v1\/jobs\/([^/]+)$/);
    if (jobMatch) {
      const job = this.jobs.get(jobMatch[1]);
      if (!job) return respond(404, { detail: "unknown job" });
      if (method === "DELETE") {
        this.cancelCalls += 1;
        job.status = "cancelled";
        return respond(200, { status: "cancelled" });
      }
      if (job.status === "running" && --job.ticksLeft <= 0) {
        job.status = "done";
      }
      if (job.status === "done") {
        return respond(200, { status: "done", result: job.result });
      }
      return respond(200, { status: job.status });
    }
    return respond(404, { detail: `no route ${method} ${url}` });
  };
}
