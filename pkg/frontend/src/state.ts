// Explorer state and actions, kept DOM-free so the what-if loop is testable.
//
// The workflow mirrors the intended use: adjust attribute weights, see
// immediately whether the induced top-k meets the fairness bounds, and ask
// for a nearby fair vector when it does not - each answer steering the next
// adjustment.

import {
  AuditResponse,
  FairselectClient,
  RepairResult,
  TopkRow,
} from "./api.js";

export interface HistoryEntry {
  weights: number[];
  verdict: "fair" | "unfair";
}

export interface ViewModel {
  weights: number[];
  weightsValid: boolean;
  k: number;
  lower: number;
  upper: number;
  eps: number;
  badge: "fair" | "unfair" | "unknown";
  interval: [number, number] | null;
  preview: TopkRow[];
  repairEnabled: boolean;
  repairBusy: boolean;
  suggestion: number[] | null;
  lastRepairVerdict: string | null;
  widenEpsPrompt: boolean;
  error: string | null;
  validationMessage: string | null;
  history: HistoryEntry[];
}

const SIMPLEX_TOL = 1e-9;

export function simplexValid(weights: number[]): boolean {
  if (weights.length === 0) return false;
  if (weights.some((w) => !(w >= 0) || !Number.isFinite(w))) return false;
  const sum = weights.reduce((a, b) => a + b, 0);
  return Math.abs(sum - 1) <= SIMPLEX_TOL;
}

/** Set weights[index] = value, scaling the other entries proportionally so
 * the vector stays on the simplex (equal split when the rest are all 0). */
export function renormalize(weights: number[], index: number, value: number): number[] {
  const v = Math.min(1, Math.max(0, value));
  const rest = 1 - v;
  const othersSum = weights.reduce((acc, w, i) => (i === index ? acc : acc + w), 0);
  const out = weights.map((w, i) => {
    if (i === index) return v;
    if (othersSum <= 0) return rest / (weights.length - 1);
    return (w / othersSum) * rest;
  });
  // absorb float dust so the displayed vector always validates
  const drift = 1 - out.reduce((a, b) => a + b, 0);
  const j = index === 0 ? 1 : 0;
  if (out.length > 1) out[j] = Math.max(0, out[j] + drift);
  return out;
}

export class ExplorerController {
  private weights: number[];
  private k: number;
  private lower: number;
  private upper: number;
  private eps = 0.1;
  private n: number;
  private lastAudit: AuditResponse | null = null;
  private lastRepair: RepairResult | null = null;
  private suggestion: number[] | null = null;
  private widenEpsPrompt = false;
  private error: string | null = null;
  private validationMessage: string | null = null;
  private repairBusy = false;
  private repairCancelled = false;
  private history: HistoryEntry[] = [];

  constructor(
    private client: FairselectClient,
    d: number,
    n: number,
    defaults: { k: number; lower: number; upper: number },
  ) {
    this.weights = Array.from({ length: d }, () => 1 / d);
    this.n = n;
    this.k = defaults.k;
    this.lower = defaults.lower;
    this.upper = defaults.upper;
  }

  view(): ViewModel {
    return {
      weights: [...this.weights],
      weightsValid: simplexValid(this.weights),
      k: this.k,
      lower: this.lower,
      upper: this.upper,
      eps: this.eps,
      badge: this.lastAudit === null ? "unknown" : this.lastAudit.fair ? "fair" : "unfair",
      interval:
        this.lastAudit === null
          ? null
          : [this.lastAudit.intervalMin, this.lastAudit.intervalMax],
      preview: this.lastAudit?.topkPreview ?? [],
      repairEnabled: this.lastAudit !== null && !this.lastAudit.fair && !this.repairBusy,
      repairBusy: this.repairBusy,
      suggestion: this.suggestion ? [...this.suggestion] : null,
      lastRepairVerdict: this.lastRepair?.verdict ?? null,
      widenEpsPrompt: this.widenEpsPrompt,
      error: this.error,
      validationMessage: this.validationMessage,
      history: this.history.map((h) => ({ weights: [...h.weights], verdict: h.verdict })),
    };
  }

  setWeight(index: number, value: number): void {
    this.weights = renormalize(this.weights, index, value);
  }

  setEps(eps: number): void {
    this.eps = Math.min(1, Math.max(0, eps));
    this.widenEpsPrompt = false;
  }

  setBounds(k: number, lower: number, upper: number): void {
    this.k = k;
    this.lower = lower;
    this.upper = upper;
  }

  private validate(): boolean {
    if (this.k < 1 || this.k > this.n) {
      this.validationMessage = `k must be between 1 and ${this.n}`;
      return false;
    }
    if (!(0 <= this.lower && this.lower <= this.upper && this.upper <= this.k)) {
      this.validationMessage = "need 0 <= lower <= upper <= k";
      return false;
    }
    if (!simplexValid(this.weights)) {
      this.validationMessage = "weights must be non-negative and sum to 1";
      return false;
    }
    this.validationMessage = null;
    return true;
  }

  /** Audit the current weights; on transport errors the state is kept. */
  async audit(): Promise<void> {
    if (!this.validate()) return; // no request sent
    try {
      const res = await this.client.audit(this.weights, this.k, this.lower, this.upper);
      this.lastAudit = res;
      this.error = null;
      this.history.push({
        weights: [...this.weights],
        verdict: res.fair ? "fair" : "unfair",
      });
    } catch (e) {
      this.error = e instanceof Error ? e.message : String(e);
    }
  }

  /** Ask for a nearby fair vector; only callable from an unfair audit. */
  async repair(): Promise<void> {
    if (!this.view().repairEnabled) return;
    this.repairBusy = true;
    this.repairCancelled = false;
    this.widenEpsPrompt = false;
    this.suggestion = null;
    try {
      const jobId = await this.client.submitRepair({
        w0: this.weights,
        eps: this.eps,
        k: this.k,
        lower: this.lower,
        upper: this.upper,
      });
      const result = await this.client.waitForRepair(
        jobId,
        25,
        () => this.repairCancelled,
      );
      this.lastRepair = result;
      if (result.verdict === "found" && result.weight) {
        this.suggestion = result.weight;
      } else if (result.verdict === "infeasible") {
        this.widenEpsPrompt = true; // the "report a failure" path: widen eps
      }
      this.error = null;
    } catch (e) {
      if (!this.repairCancelled) {
        this.error = e instanceof Error ? e.message : String(e);
      }
    } finally {
      this.repairBusy = false;
    }
  }

  cancelRepair(): void {
    this.repairCancelled = true;
  }

  /** Adopt the repair suggestion as the new slider state and re-audit. */
  async applySuggestion(): Promise<void> {
    if (!this.suggestion) return;
    this.weights = [...this.suggestion];
    this.suggestion = null;
    await this.audit();
  }

  /** One-click revert to an earlier what-if step. */
  revert(historyIndex: number): void {
    const entry = this.history[historyIndex];
    if (entry) this.weights = [...entry.weights];
  }
}
