#!/usr/bin/env node
/**
 * plot traces|scaling --in <csv...> --out <file> [--std-div k] [--loglog]
 *                     [--debug <json>]
 *
 * Writes an SVG figure and, when asked, a JSON dump of exactly the data
 * that was drawn (hash that in CI instead of pixels).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseCurvesCsv, parseScalingCsv } from "./csv.js";
import { renderScaling } from "./scaling.js";
import { renderTraces } from "./traces.js";

interface Args {
  command: string;
  inputs: string[];
  out: string;
  stdDiv: number;
  logLog: boolean;
  debug?: string;
}

function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  if (command !== "traces" && command !== "scaling") {
    throw new Error(`usage: plot traces|scaling --in <csv...> --out <file>`);
  }
  const args: Args = { command, inputs: [], out: "", stdDiv: 1, logLog: false };
  let i = 0;
  while (i < rest.length) {
    const flag = rest[i];
    if (flag === "--in") {
      i += 1;
      while (i < rest.length && !rest[i].startsWith("--")) {
        args.inputs.push(rest[i]);
        i += 1;
      }
    } else if (flag === "--out") {
      args.out = rest[i + 1];
      i += 2;
    } else if (flag === "--std-div") {
      args.stdDiv = Number(rest[i + 1]);
      i += 2;
    } else if (flag === "--loglog") {
      args.logLog = true;
      i += 1;
    } else if (flag === "--debug") {
      args.debug = rest[i + 1];
      i += 2;
    } else {
      throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.inputs.length === 0 || !args.out) {
    throw new Error("--in and --out are required");
  }
  return args;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    let svg: string;
    let debug: unknown;
    if (args.command === "traces") {
      const curves = args.inputs.map((p) => parseCurvesCsv(readFileSync(p, "utf8"), p));
      ({ svg, debug } = renderTraces(curves, { stdDivisor: args.stdDiv }));
    } else {
      const points = args.inputs.flatMap((p) =>
        parseScalingCsv(readFileSync(p, "utf8"), p),
      );
      ({ svg, debug } = renderScaling(points, { logLog: args.logLog }));
    }
    writeFileSync(args.out, svg);
    if (args.debug) {
      writeFileSync(args.debug, JSON.stringify(debug, null, 2) + "\n");
    }
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(JSON.stringify({
      error: err instanceof Error ? err.constructor.name : "Error",
      message: err instanceof Error ? err.message : String(err),
    }));
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
