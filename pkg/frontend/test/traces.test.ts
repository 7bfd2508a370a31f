import { describe, expect, it } from "vitest";
import type { Curve } from "../src/csv.js";
import { renderTraces } from "../src/traces.js";

function curve(label: string, means: number[], stds: number[]): Curve {
  return {
    label,
    nRuns: 5,
    points: means.map((m, i) => ({ iter: i, meanBest: m, stdBest: stds[i] })),
  };
}

describe("renderTraces", () => {
  it("draws one line and one band per curve", () => {
    const { svg } = renderTraces([curve("bvo", [3, 2, 1], [0.5, 0.4, 0.2])]);
    expect(svg).toContain("<svg");
    const paths = svg.match(/<path /g) ?? [];
    expect(paths).toHaveLength(2); // band + mean line
    expect(svg).toContain(">bvo</text>");
  });

  it("band half-width is exactly std over the divisor", () => {
    const stds = [0.5, 0.4, 0.2];
    const { debug } = renderTraces([curve("bvo", [3, 2, 1], stds)], { stdDivisor: 5 });
    expect(debug.curves[0].bandHalfWidth).toEqual(stds.map((s) => s / 5));
    const base = renderTraces([curve("bvo", [3, 2, 1], stds)], { stdDivisor: 1 });
    base.debug.curves[0].bandHalfWidth.forEach((w, i) => {
      expect(debug.curves[0].bandHalfWidth[i] * 5).toBeCloseTo(w, 12);
    });
  });

  it("is deterministic", () => {
    const a = renderTraces([curve("x", [2, 1], [0.1, 0.1])]);
    const b = renderTraces([curve("x", [2, 1], [0.1, 0.1])]);
    expect(a.svg).toBe(b.svg);
  });

  it("rejects empty input and bad divisors", () => {
    expect(() => renderTraces([])).toThrow(/no curves/);
    expect(() => renderTraces([curve("x", [], [])])).toThrow(/empty/);
    expect(() => renderTraces([curve("x", [1], [0])], { stdDivisor: 0 })).toThrow(/divisor/);
  });

  it("rejects mismatched iteration axes", () => {
    const a = curve("a", [1, 2], [0, 0]);
    const b: Curve = {
      label: "b",
      nRuns: 2,
      points: [{ iter: 5, meanBest: 1, stdBest: 0 }, { iter: 6, meanBest: 1, stdBest: 0 }],
    };
    expect(() => renderTraces([a, b])).toThrow(/iteration axis/);
  });

  it("legend lists every method", () => {
    const { svg } = renderTraces([
      curve("bvo", [1, 0.5], [0.1, 0.1]),
      curve("rs", [2, 1.5], [0.2, 0.2]),
      curve("sa", [1.5, 1.0], [0.1, 0.1]),
    ]);
    for (const label of ["bvo", "rs", "sa"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });
});
