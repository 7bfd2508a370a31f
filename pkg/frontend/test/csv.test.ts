import { describe, expect, it } from "vitest";
import { parseCurvesCsv, parseScalingCsv } from "../src/csv.js";

const CURVES = `# schema: bvopt-curves-v1
# std: population (divide by n)
iter,mean_best,std_best,n_runs,label
0,5.0,1.0,3,rs
1,4.0,0.5,3,rs
2,4.0,0.25,3,rs
`;

const SCALING = `# schema: bvopt-scaling-v1
# normalization: mean of first 3 points per series = 1
series,axis,size,time_s,normalized,slope
bvo,dimension,20,0.1,0.8,1.09
bvo,dimension,40,0.12,1.0,1.09
bvo,dimension,80,0.15,1.2,1.09
bvo,dimension,160,0.3,2.4,1.09
`;

describe("curves csv", () => {
  it("parses rows and label", () => {
    const curve = parseCurvesCsv(CURVES);
    expect(curve.label).toBe("rs");
    expect(curve.nRuns).toBe(3);
    expect(curve.points).toHaveLength(3);
    expect(curve.points[1]).toEqual({ iter: 1, meanBest: 4.0, stdBest: 0.5 });
  });

  it("rejects schema mismatches", () => {
    expect(() => parseCurvesCsv(SCALING)).toThrow(/expected schema/);
    expect(() => parseCurvesCsv("")).toThrow(/expected schema/);
  });

  it("rejects non-numeric fields", () => {
    const broken = CURVES.replace("4.0,0.5", "oops,0.5");
    expect(() => parseCurvesCsv(broken)).toThrow(/non-numeric/);
  });
});

describe("scaling csv", () => {
  it("parses series points", () => {
    const points = parseScalingCsv(SCALING);
    expect(points).toHaveLength(4);
    expect(points[0].series).toBe("bvo");
    expect(points[3].size).toBe(160);
    expect(points[0].slope).toBeCloseTo(1.09);
  });

  it("rejects schema mismatches", () => {
    expect(() => parseScalingCsv(CURVES)).toThrow(/expected schema/);
  });
});
