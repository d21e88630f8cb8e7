// The explorer round-trip: scripted slider states audit to exactly the
// service's answer, a repair suggestion re-audits as fair once applied, and
// the infeasible path surfaces the widen-eps prompt.

import { describe, expect, it } from "vitest";

import { FairselectClient } from "../src/api.js";
import { ExplorerController } from "../src/state.js";
import { FakeService, auditExact } from "./fake_service.js";

function makeController(svc: FakeService): ExplorerController {
  const client = new FairselectClient("", svc.fetch);
  return new ExplorerController(client, 2, 3, { k: 1, lower: 1, upper: 1 });
}

function setWeights(ctl: ExplorerController, w: [number, number]): void {
  ctl.setWeight(0, w[0]); // renormalization fixes the complement
}

describe("audit view", () => {
  it("badge and interval equal the service response for scripted states", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    const scripted: [number, number][] = [
      [0.5, 0.5],
      [0.0, 1.0],
      [0.45, 0.55],
      [0.7, 0.3],
      [0.55, 0.45],
    ];
    for (const w of scripted) {
      setWeights(ctl, w);
      await ctl.audit();
      const vm = ctl.view();
      const expected = auditExact([...w], 1, 1, 1);
      expect(vm.badge).toBe(expected.fair ? "fair" : "unfair");
      expect(vm.interval).toEqual([expected.intervalMin, expected.intervalMax]);
      expect(vm.preview).toEqual(expected.topkPreview);
    }
  });

  it("equal weights on the demo data are fair with interval [0, 1]", async () => {
    const ctl = makeController(new FakeService());
    setWeights(ctl, [0.5, 0.5]);
    await ctl.audit();
    expect(ctl.view().badge).toBe("fair");
    expect(ctl.view().interval).toEqual([0, 1]);
  });

  it("all weight on the second attribute is unfair", async () => {
    const ctl = makeController(new FakeService());
    setWeights(ctl, [0.0, 1.0]);
    await ctl.audit();
    expect(ctl.view().badge).toBe("unfair");
  });

  it("k > n yields a validation message and sends no request", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    ctl.setBounds(7, 1, 1);
    await ctl.audit();
    expect(svc.auditCalls).toBe(0);
    expect(ctl.view().validationMessage).toContain("k must be");
    expect(ctl.view().badge).toBe("unknown");
  });

  it("service failure shows a banner and preserves state", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    setWeights(ctl, [0.5, 0.5]);
    await ctl.audit();
    svc.failNextAudit = true;
    setWeights(ctl, [0.4, 0.6]);
    await ctl.audit();
    const vm = ctl.view();
    expect(vm.error).toBe("bad audit request");
    expect(vm.badge).toBe("fair"); // previous audit kept
    expect(vm.weights[0]).toBeCloseTo(0.4, 9);
  });
});

describe("repair action", () => {
  it("is disabled until an audit reports unfair", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    expect(ctl.view().repairEnabled).toBe(false);
    await ctl.repair();
    expect(svc.repairCalls).toBe(0);
    setWeights(ctl, [0.45, 0.55]);
    await ctl.audit();
    expect(ctl.view().repairEnabled).toBe(true);
  });

  it("suggestion applied to the sliders re-audits as fair", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    setWeights(ctl, [0.45, 0.55]);
    await ctl.audit();
    expect(ctl.view().badge).toBe("unfair");
    await ctl.repair();
    expect(ctl.view().suggestion).toEqual([0.5, 0.5]);
    await ctl.applySuggestion();
    const vm = ctl.view();
    expect(vm.weights).toEqual([0.5, 0.5]);
    expect(vm.badge).toBe("fair");
    expect(vm.suggestion).toBeNull();
    // the what-if trail recorded both steps
    expect(vm.history.map((h) => h.verdict)).toEqual(["unfair", "fair"]);
  });

  it("infeasible repair shows the widen-eps prompt", async () => {
    const svc = new FakeService();
    const ctl = makeController(svc);
    setWeights(ctl, [0.2, 0.8]);
    await ctl.audit();
    ctl.setEps(0.05); // not enough to reach the fair region
    await ctl.repair();
    const vm = ctl.view();
    expect(vm.widenEpsPrompt).toBe(true);
    expect(vm.suggestion).toBeNull();
    // widening eps clears the prompt and then succeeds
    ctl.setEps(0.4);
    expect(ctl.view().widenEpsPrompt).toBe(false);
    await ctl.repair();
    expect(ctl.view().suggestion).toEqual([0.5, 0.5]);
  });

  it("cancel mid-repair leaves the previous state intact", async () => {
    const svc = new FakeService();
    svc.jobTicks = 10_000;
    const ctl = makeController(svc);
    setWeights(ctl, [0.45, 0.55]);
    await ctl.audit();
    const before = ctl.view();
    const running = ctl.repair();
    ctl.cancelRepair();
    await running;
    const vm = ctl.view();
    expect(vm.repairBusy).toBe(false);
    expect(vm.suggestion).toBeNull();
    expect(vm.error).toBeNull();
    expect(vm.badge).toBe(before.badge);
    expect(vm.weights).toEqual(before.weights);
  });
});

describe("history", () => {
  it("is append-only and supports one-click revert", async () => {
    const ctl = makeController(new FakeService());
    setWeights(ctl, [0.5, 0.5]);
    await ctl.audit();
    setWeights(ctl, [0.3, 0.7]);
    await ctl.audit();
    expect(ctl.view().history).toHaveLength(2);
    ctl.revert(0);
    expect(ctl.view().weights[0]).toBeCloseTo(0.5, 9);
    // reverting does not rewrite the trail
    expect(ctl.view().history).toHaveLength(2);
  });
});
