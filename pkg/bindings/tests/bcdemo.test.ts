/**
 * The behavioral-cloning demo must finish quickly and its scorer must match
 * the expert on held-out decisions more often than uniform-random guessing.
 */

import { describe, expect, it } from "vitest";

import { runBcDemo } from "../src/bcDemo.js";

describe("behavioral cloning demo", () => {
  it("beats the uniform baseline on held-out decisions within the time budget", async () => {
    const report = await runBcDemo({ quiet: true });
    expect(report.seconds).toBeLessThan(120);
    expect(report.trainPairs).toBeGreaterThanOrEqual(20);
    expect(report.heldOutPairs).toBeGreaterThanOrEqual(8);
    expect(report.heldOutAccuracy).toBeGreaterThan(report.uniformBaseline);
    expect(report.allActionsInActionSet).toBe(true);
    expect(Number.isFinite(report.meanNodesLearned)).toBe(true);
    expect(Number.isFinite(report.meanNodesRandom)).toBe(true);
  }, 150_000);
});
