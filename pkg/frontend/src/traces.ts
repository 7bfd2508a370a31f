/**
 * Best-so-far curves per method with a shaded +-std/divisor band.
 *
 * The plotting layer does no statistics: means and stds come straight
 * from the CSV, and the only arithmetic is the display divisor on the
 * band half-width. The debug dump carries exactly what was drawn.
 */

import type { Curve } from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  PALETTE,
  WIDTH,
  axes,
  bandPath,
  document,
  linearScale,
  polylinePath,
} from "./svg.js";

export interface TracesOptions {
  stdDivisor?: number;
  xLabel?: string;
  yLabel?: string;
}

export interface TracesDebug {
  stdDivisor: number;
  curves: {
    label: string;
    iters: number[];
    mean: number[];
    bandHalfWidth: number[];
  }[];
}

export function renderTraces(
  curves: Curve[],
  options: TracesOptions = {},
): { svg: string; debug: TracesDebug } {
  if (curves.length === 0) {
    throw new Error("no curves to plot");
  }
  const divisor = options.stdDivisor ?? 1;
  if (!(divisor > 0)) {
    throw new Error(`std divisor must be positive, got ${divisor}`);
  }
  const axis0 = curves[0].points.map((p) => p.iter).join(",");
  for (const c of curves) {
    if (c.points.length === 0) {
      throw new Error(`curve "${c.label}" is empty`);
    }
    if (c.points.map((p) => p.iter).join(",") !== axis0) {
      throw new Error(`curve "${c.label}" uses a different iteration axis`);
    }
  }

  const debug: TracesDebug = {
    stdDivisor: divisor,
    curves: curves.map((c) => ({
      label: c.label,
      iters: c.points.map((p) => p.iter),
      mean: c.points.map((p) => p.meanBest),
      bandHalfWidth: c.points.map((p) => p.stdBest / divisor),
    })),
  };

  let yLo = Infinity;
  let yHi = -Infinity;
  let xLo = Infinity;
  let xHi = -Infinity;
  for (const c of debug.curves) {
    for (let i = 0; i < c.iters.length; i += 1) {
      yLo = Math.min(yLo, c.mean[i] - c.bandHalfWidth[i]);
      yHi = Math.max(yHi, c.mean[i] + c.bandHalfWidth[i]);
      xLo = Math.min(xLo, c.iters[i]);
      xHi = Math.max(xHi, c.iters[i]);
    }
  }
  const pad = (yHi - yLo || 1) * 0.05;
  const x = linearScale(xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(yLo - pad, yHi + pad, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(axes({
    x,
    y,
    xLabel: options.xLabel ?? "iteration",
    yLabel: options.yLabel ?? "best objective value",
  }));
  debug.curves.forEach((c, ci) => {
    const color = PALETTE[ci % PALETTE.length];
    const px = c.iters.map((v) => x(v));
    const upper = c.mean.map((m, i) => y(m + c.bandHalfWidth[i]));
    const lower = c.mean.map((m, i) => y(m - c.bandHalfWidth[i]));
    parts.push(
      `<path d="${bandPath(px, upper, lower)}" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
      `<path d="${polylinePath(px, c.mean.map((m) => y(m)))}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    const ly = MARGIN.top + 16 + 16 * ci;
    parts.push(
      `<line x1="${WIDTH - 170}" y1="${ly - 4}" x2="${WIDTH - 146}" y2="${ly - 4}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${WIDTH - 140}" y="${ly}" font-size="12">${c.label}</text>`,
    );
  });
  return { svg: document(parts.join("\n")), debug };
}
