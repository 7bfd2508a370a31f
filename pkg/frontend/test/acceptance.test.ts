/**
 * Secondary acceptance: figures render from the shipped sample CSVs,
 * the divisor-5 debug dump is exactly std/5, and the synthetic
 * quadratic series is annotated with slope 2.00.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { parseCurvesCsv, parseScalingCsv } from "../src/csv.js";
import { renderScaling } from "../src/scaling.js";
import { renderTraces } from "../src/traces.js";

const SAMPLES = join(__dirname, "..", "samples");

function loadCurves(name: string) {
  return parseCurvesCsv(readFileSync(join(SAMPLES, name), "utf8"), name);
}

describe("shipped samples", () => {
  it("traces figure: one line and band per method from sample curves", () => {
    const curves = [loadCurves("curves_rs.csv"), loadCurves("curves_sa.csv")];
    const { svg } = renderTraces(curves, { stdDivisor: 1 });
    expect(svg).toContain("<svg");
    expect(svg).toContain(">rs</text>");
    expect(svg).toContain(">sa</text>");
    expect((svg.match(/<path /g) ?? []).length).toBe(4); // 2 bands + 2 lines
  });

  it("divisor-5 debug dump equals std/5 exactly", () => {
    const curve = loadCurves("curves_rs.csv");
    const { debug } = renderTraces([curve], { stdDivisor: 5 });
    const expected = curve.points.map((p) => p.stdBest / 5);
    expect(debug.curves[0].bandHalfWidth).toEqual(expected);
  });

  it("scaling figure annotates the quadratic series with slope 2.00", () => {
    const points = parseScalingCsv(
      readFileSync(join(SAMPLES, "scaling_quadratic.csv"), "utf8"),
    );
    const { svg, debug } = renderScaling(points, { logLog: true });
    const quad = debug.series.find((s) => s.name === "quadratic");
    expect(quad).toBeDefined();
    expect(Math.abs(quad!.slope - 2.0)).toBeLessThanOrEqual(0.01);
    expect(quad!.annotation).toBe("quadratic (slope 2.00)");
    expect(svg).toContain("quadratic (slope 2.00)");
    expect(svg).toContain("gp_reference (slope 2.49)");
  });
});
