import { describe, expect, it } from "vitest";

import { renormalize, simplexValid } from "../src/state.js";

describe("renormalize", () => {
  it("keeps the vector on the simplex", () => {
    let w = [0.25, 0.25, 0.25, 0.25];
    for (const [i, v] of [[0, 0.7], [2, 0.05], [3, 0.9], [1, 0]] as const) {
      w = renormalize(w, i, v);
      expect(simplexValid(w)).toBe(true);
      expect(w[i]).toBeCloseTo(Math.min(1, Math.max(0, v)), 9);
    }
  });

  it("scales the untouched weights proportionally", () => {
    const w = renormalize([0.2, 0.4, 0.4], 0, 0.5);
    expect(w[0]).toBeCloseTo(0.5, 12);
    expect(w[1] / w[2]).toBeCloseTo(1.0, 9);
    const w2 = renormalize([0.2, 0.6, 0.2], 0, 0.0);
    expect(w2[1] / w2[2]).toBeCloseTo(3.0, 9);
  });

  it("splits evenly when the remaining weights are all zero", () => {
    const w = renormalize([1, 0, 0], 0, 0.4);
    expect(w[1]).toBeCloseTo(0.3, 12);
    expect(w[2]).toBeCloseTo(0.3, 12);
  });

  it("clamps the edited value into [0, 1]", () => {
    expect(renormalize([0.5, 0.5], 0, 1.7)[0]).toBe(1);
    expect(renormalize([0.5, 0.5], 0, -3)[0]).toBe(0);
  });
});

describe("simplexValid", () => {
  it("accepts exact simplex vectors", () => {
    expect(simplexValid([0.5, 0.5])).toBe(true);
    expect(simplexValid([1])).toBe(true);
  });

  it("rejects negatives, bad sums and non-finite entries", () => {
    expect(simplexValid([-0.1, 1.1])).toBe(false);
    expect(simplexValid([0.6, 0.6])).toBe(false);
    expect(simplexValid([Number.NaN, 1])).toBe(false);
    expect(simplexValid([])).toBe(false);
  });
});
