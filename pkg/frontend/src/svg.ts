/**
 * Minimal deterministic SVG assembly. No randomness, fixed palette and
 * number formatting, so identical inputs give byte-identical output.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 28, bottom: 52 };

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

export interface Scale {
  (v: number): number;
  ticks: number[];
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function linearScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  const span = hi - lo || 1;
  const fn = ((v: number) => rLo + ((v - lo) / span) * (rHi - rLo)) as Scale;
  fn.ticks = niceTicks(lo, hi);
  return fn;
}

export function logScale(lo: number, hi: number, rLo: number, rHi: number): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error("log scale needs positive bounds");
  }
  const [a, b] = [Math.log10(lo), Math.log10(hi)];
  const span = b - a || 1;
  const fn = ((v: number) => rLo + ((Math.log10(v) - a) / span) * (rHi - rLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.floor(a); e <= Math.ceil(b); e += 1) {
    const t = Math.pow(10, e);
    if (t >= lo / 1.0001 && t <= hi * 1.0001) {
      ticks.push(t);
    }
  }
  fn.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  return fn;
}

export function fmt(v: number): string {
  if (v === 0) {
    return "0";
  }
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    return v.toExponential(1);
  }
  return Number(v.toPrecision(4)).toString();
}

export function polylinePath(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${ys[i].toFixed(2)}`).join("");
}

export function bandPath(xs: number[], upper: number[], lower: number[]): string {
  const fwd = xs.map((x, i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${upper[i].toFixed(2)}`);
  const back = [...xs.keys()]
    .reverse()
    .map((i) => `L${xs[i].toFixed(2)},${lower[i].toFixed(2)}`);
  return fwd.join("") + back.join("") + "Z";
}

export interface AxisSpec {
  x: Scale;
  y: Scale;
  xLabel: string;
  yLabel: string;
}

export function axes(spec: AxisSpec): string {
  const { x, y } = spec;
  const bottom = HEIGHT - MARGIN.bottom;
  const parts: string[] = [];
  parts.push(
    `<line x1="${MARGIN.left}" y1="${bottom}" x2="${WIDTH - MARGIN.right}" y2="${bottom}" stroke="#333"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${bottom}" stroke="#333"/>`,
  );
  for (const t of x.ticks) {
    const px = x(t);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${bottom}" x2="${px.toFixed(2)}" y2="${bottom + 5}" stroke="#333"/>`,
      `<text x="${px.toFixed(2)}" y="${bottom + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of y.ticks) {
    const py = y(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${py.toFixed(2)}" x2="${MARGIN.left}" y2="${py.toFixed(2)}" stroke="#333"/>`,
      `<text x="${MARGIN.left - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">${spec.xLabel}</text>`,
    `<text x="18" y="${(MARGIN.top + bottom) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(MARGIN.top + bottom) / 2})">${spec.yLabel}</text>`,
  );
  return parts.join("\n");
}

export function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n${body}\n</svg>\n`
  );
}
