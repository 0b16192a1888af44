/**
 * Minimal deterministic SVG scene building: fixed canvas, fixed fonts,
 * numbers formatted with one fixed routine, no timestamps or ids.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

export interface Scale {
  (v: number): number;
  ticks: number[];
  log: boolean;
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * factor;
  const start = Math.ceil(lo / s) * s;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += s) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const e0 = Math.floor(Math.log10(lo));
  const e1 = Math.ceil(Math.log10(hi));
  for (let e = e0; e <= e1; e++) {
    const v = Math.pow(10, e);
    if (v >= lo / 1.0001 && v <= hi * 1.0001) {
      out.push(v);
    }
  }
  return out.length >= 2 ? out : [lo, hi];
}

export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  const span = hi > lo ? hi - lo : 1;
  const fn = ((v: number) => a + ((v - lo) / span) * (b - a)) as Scale;
  fn.ticks = niceTicks(lo, hi);
  fn.log = false;
  return fn;
}

export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const l0 = Math.log10(lo);
  const l1 = Math.log10(hi);
  const span = l1 > l0 ? l1 - l0 : 1;
  const fn = ((v: number) => a + ((Math.log10(v) - l0) / span) * (b - a)) as Scale;
  fn.ticks = logTicks(lo, hi);
  fn.log = true;
  return fn;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(1).replace("e-", "e-").replace("e+", "e");
  }
  return String(Math.round(v * 1e6) / 1e6);
}

export class Svg {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, style: string) {
    this.parts.push(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ${style}/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string) {
    this.parts.push(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${style}/>`);
  }

  path(points: Array<[number, number]>, style: string) {
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join(" ");
    this.parts.push(`<path d="${d}" fill="none" ${style}/>`);
  }

  circle(x: number, y: number, r: number, style: string) {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" ${style}/>`);
  }

  text(x: number, y: number, content: string, style = "", anchor = "start") {
    const esc = content
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ${FONT} ${style}>${esc}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

export interface AxesOptions {
  title?: string;
  xlabel?: string;
  ylabel?: string;
}

export function drawAxes(svg: Svg, xs: Scale, ys: Scale, opts: AxesOptions) {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  svg.line(x0, y0, x1, y0, 'stroke="black" stroke-width="1"');
  svg.line(x0, y0, x0, y1, 'stroke="black" stroke-width="1"');
  for (const t of xs.ticks) {
    const px = xs(t);
    svg.line(px, y0, px, y0 + 4, 'stroke="black" stroke-width="1"');
    svg.line(px, y0, px, y1, 'stroke="#dddddd" stroke-width="0.5"');
    svg.text(px, y0 + 18, xs.log ? `1e${Math.round(Math.log10(t))}` : fmt(t),
      'font-size="11"', "middle");
  }
  for (const t of ys.ticks) {
    const py = ys(t);
    svg.line(x0 - 4, py, x0, py, 'stroke="black" stroke-width="1"');
    svg.line(x0, py, x1, py, 'stroke="#dddddd" stroke-width="0.5"');
    svg.text(x0 - 8, py + 4, ys.log ? `1e${Math.round(Math.log10(t))}` : fmt(t),
      'font-size="11"', "end");
  }
  if (opts.title) {
    svg.text(WIDTH / 2, MARGIN.top - 16, opts.title, 'font-size="15"', "middle");
  }
  if (opts.xlabel) {
    svg.text((x0 + x1) / 2, HEIGHT - 16, opts.xlabel, 'font-size="12"', "middle");
  }
  if (opts.ylabel) {
    svg.text(16, (y0 + y1) / 2, opts.ylabel,
      `font-size="12" transform="rotate(-90 16 ${(y0 + y1) / 2})"`, "middle");
  }
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}
