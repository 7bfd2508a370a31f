/**
 * Normalized run-time versus problem size on log-log axes, one series
 * per name, each annotated with its fitted slope from the CSV.
 */

import type { ScalingPoint } from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  PALETTE,
  WIDTH,
  axes,
  document,
  linearScale,
  logScale,
  polylinePath,
} from "./svg.js";

export interface ScalingOptions {
  logLog?: boolean;
  xLabel?: string;
  yLabel?: string;
}

export interface ScalingDebug {
  logLog: boolean;
  series: {
    name: string;
    sizes: number[];
    normalized: number[];
    slope: number;
    annotation: string;
  }[];
}

export function renderScaling(
  points: ScalingPoint[],
  options: ScalingOptions = {},
): { svg: string; debug: ScalingDebug } {
  if (points.length === 0) {
    throw new Error("no scaling points to plot");
  }
  const names = [...new Set(points.map((p) => p.series))];
  const logLog = options.logLog ?? true;
  const series = names.map((name) => {
    const rows = points
      .filter((p) => p.series === name)
      .sort((a, b) => a.size - b.size);
    if (rows.length < 4) {
      throw new Error(`series "${name}" has ${rows.length} points, need at least 4`);
    }
    const slope = rows[0].slope;
    return {
      name,
      sizes: rows.map((r) => r.size),
      normalized: rows.map((r) => r.normalized),
      slope,
      annotation: `${name} (slope ${slope.toFixed(2)})`,
    };
  });

  const allSizes = series.flatMap((s) => s.sizes);
  const allNorm = series.flatMap((s) => s.normalized);
  const xLo = Math.min(...allSizes);
  const xHi = Math.max(...allSizes);
  const yLo = Math.min(...allNorm);
  const yHi = Math.max(...allNorm);

  const x = logLog
    ? logScale(xLo, xHi, MARGIN.left, WIDTH - MARGIN.right)
    : linearScale(xLo, xHi, MARGIN.left, WIDTH - MARGIN.right);
  const y = logLog
    ? logScale(yLo / 1.3, yHi * 1.3, HEIGHT - MARGIN.bottom, MARGIN.top)
    : linearScale(yLo, yHi * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  const axisLabel = points[0].axis === "data_size" ? "data size" : "variable dimension";
  parts.push(axes({
    x,
    y,
    xLabel: options.xLabel ?? axisLabel,
    yLabel: options.yLabel ?? "normalized run time",
  }));
  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    const px = s.sizes.map((v) => x(v));
    const py = s.normalized.map((v) => y(v));
    parts.push(
      `<path d="${polylinePath(px, py)}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    px.forEach((vx, i) => {
      parts.push(
        `<circle cx="${vx.toFixed(2)}" cy="${py[i].toFixed(2)}" r="3" fill="${color}"/>`,
      );
    });
    const ly = MARGIN.top + 16 + 16 * si;
    parts.push(
      `<line x1="${MARGIN.left + 12}" y1="${ly - 4}" x2="${MARGIN.left + 36}" y2="${ly - 4}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${MARGIN.left + 42}" y="${ly}" font-size="12">${s.annotation}</text>`,
    );
  });
  return {
    svg: document(parts.join("\n")),
    debug: { logLog, series },
  };
}
