import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { main } from "../src/cli.js";

const CURVES = `# schema: bvopt-curves-v1
# std: population (divide by n)
iter,mean_best,std_best,n_runs,label
0,5.0,1.0,3,rs
1,4.0,0.5,3,rs
2,3.0,0.25,3,rs
`;

const SCALING = `# schema: bvopt-scaling-v1
# normalization: mean of first 3 points per series = 1
series,axis,size,time_s,normalized,slope
bvo,dimension,20,0.1,0.9,1.09
bvo,dimension,40,0.11,1.0,1.09
bvo,dimension,80,0.12,1.1,1.09
bvo,dimension,160,0.25,2.3,1.09
`;

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "bvopt-plot-"));
}

describe("plot cli", () => {
  it("renders traces with a divisor and a debug dump", () => {
    const dir = tempDir();
    const input = join(dir, "curves.csv");
    writeFileSync(input, CURVES);
    const out = join(dir, "fig.svg");
    const dump = join(dir, "fig.json");
    const code = main(["traces", "--in", input, "--out", out, "--std-div", "5",
                       "--debug", dump]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("<svg");
    const debug = JSON.parse(readFileSync(dump, "utf8"));
    expect(debug.stdDivisor).toBe(5);
    expect(debug.curves[0].bandHalfWidth).toEqual([0.2, 0.1, 0.05]);
  });

  it("renders scaling with loglog", () => {
    const dir = tempDir();
    const input = join(dir, "scaling.csv");
    writeFileSync(input, SCALING);
    const out = join(dir, "scaling.svg");
    const code = main(["scaling", "--in", input, "--out", out, "--loglog"]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("bvo (slope 1.09)");
  });

  it("fails with a JSON error on schema mismatch", () => {
    const dir = tempDir();
    const input = join(dir, "bad.csv");
    writeFileSync(input, "# schema: other\nx\ny\n");
    const code = main(["traces", "--in", input, "--out", join(dir, "f.svg")]);
    expect(code).toBe(2);
  });

  it("rejects unknown subcommands", () => {
    expect(main(["histogram", "--in", "x", "--out", "y"])).toBe(2);
  });
});
