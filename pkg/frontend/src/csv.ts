/**
 * Parsers for the harness CSV outputs. Each file carries a schema tag in
 * its first comment line; a mismatch is a hard error, never a guess.
 */

export const CURVES_SCHEMA = "bvopt-curves-v1";
export const SCALING_SCHEMA = "bvopt-scaling-v1";

export interface CurvePoint {
  iter: number;
  meanBest: number;
  stdBest: number;
}

export interface Curve {
  label: string;
  nRuns: number;
  points: CurvePoint[];
}

export interface ScalingPoint {
  series: string;
  axis: string;
  size: number;
  timeS: number;
  normalized: number;
  slope: number;
}

function splitRows(text: string, schema: string, source: string): string[][] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== `# schema: ${schema}`) {
    throw new Error(
      `${source}: expected schema "${schema}", found "${lines[0] ?? "<empty>"}"`,
    );
  }
  const body = lines.filter((l) => !l.startsWith("#"));
  if (body.length < 2) {
    throw new Error(`${source}: no data rows`);
  }
  return body.slice(1).map((l) => l.split(","));
}

function asNumber(token: string, source: string): number {
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new Error(`${source}: non-numeric field "${token}"`);
  }
  return value;
}

export function parseCurvesCsv(text: string, source = "curves.csv"): Curve {
  const rows = splitRows(text, CURVES_SCHEMA, source);
  const points = rows.map((r) => ({
    iter: asNumber(r[0], source),
    meanBest: asNumber(r[1], source),
    stdBest: asNumber(r[2], source),
  }));
  return {
    label: rows[0][4] ?? "",
    nRuns: asNumber(rows[0][3], source),
    points,
  };
}

export function parseScalingCsv(text: string, source = "scaling.csv"): ScalingPoint[] {
  const rows = splitRows(text, SCALING_SCHEMA, source);
  return rows.map((r) => ({
    series: r[0],
    axis: r[1],
    size: asNumber(r[2], source),
    timeS: asNumber(r[3], source),
    normalized: asNumber(r[4], source),
    slope: asNumber(r[5], source),
  }));
}
