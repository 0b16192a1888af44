/**
 * The four figure kinds. Every annotated number is read from the JSON
 * report and rendered verbatim; nothing is recomputed here.
 */

import {
  CsvTable,
  PlotSpec,
  SchemaError,
  column,
  parseCsv,
  readReport,
  reportValue,
  verbatim,
} from "./schema.js";
import {
  PALETTE,
  Scale,
  Svg,
  drawAxes,
  linearScale,
  logScale,
  plotArea,
} from "./svg.js";

function groupBy(table: CsvTable, key: string): Map<number, number[][]> {
  const idx = table.columns.indexOf(key);
  const out = new Map<number, number[][]>();
  for (const row of table.rows) {
    const k = row[idx];
    if (!out.has(k)) {
      out.set(k, []);
    }
    out.get(k)!.push(row);
  }
  return out;
}

function legend(svg: Svg, entries: Array<[string, string]>) {
  const { x1, y1 } = plotArea();
  let y = y1 + 14;
  for (const [label, color] of entries) {
    svg.line(x1 - 150, y - 4, x1 - 126, y - 4, `stroke="${color}" stroke-width="2"`);
    svg.text(x1 - 120, y, label, 'font-size="11"');
    y += 16;
  }
}

/** D_n(t) curves for every n with the |sin t| reference overlay. */
export function nonuniformOverlay(spec: PlotSpec): string {
  const table = parseCsv(spec.csv, "nonuniform");
  const ts = column(table, "t");
  const ds = column(table, "D");
  const groups = groupBy(table, "n");
  if (groups.size < 1) {
    throw new SchemaError(`${spec.csv}: no groups`);
  }
  const tmax = Math.max(...ts);
  const dmax = Math.max(...ds, 1.0);
  const a = plotArea();
  const xs = linearScale(0, tmax, a.x0, a.x1);
  const ys = linearScale(0, dmax * 1.05, a.y0, a.y1);
  const svg = new Svg();
  drawAxes(svg, xs, ys, {
    title: spec.title ?? "solution-pair distance against |sin t|",
    xlabel: spec.xlabel ?? "t",
    ylabel: spec.ylabel ?? "D_n(t)",
  });

  const tIdx = table.columns.indexOf("t");
  const dIdx = table.columns.indexOf("D");
  const entries: Array<[string, string]> = [];
  let ci = 0;
  for (const [n, rows] of [...groups.entries()].sort((p, q) => p[0] - q[0])) {
    const color = PALETTE[ci++ % PALETTE.length];
    const pts = rows
      .slice()
      .sort((p, q) => p[tIdx] - q[tIdx])
      .map((r) => [xs(r[tIdx]), ys(r[dIdx])] as [number, number]);
    svg.path(pts, `stroke="${color}" stroke-width="1.8"`);
    entries.push([`n = ${n}`, color]);
  }
  // |sin t| reference curve (dashed)
  const ref: Array<[number, number]> = [];
  for (let i = 0; i <= 100; i++) {
    const t = (tmax * i) / 100;
    ref.push([xs(t), ys(Math.abs(Math.sin(t)))]);
  }
  svg.path(ref, 'stroke="black" stroke-width="1.2" stroke-dasharray="6 4"');
  entries.push(["|sin t|", "black"]);
  legend(svg, entries);

  if (spec.report) {
    const report = readReport(spec.report);
    const perN = reportValue(report, "per_n") as Record<string, unknown>;
    let y = a.y1 + 14;
    for (const key of Object.keys(perN).sort((p, q) => Number(p) - Number(q))) {
      const ratio = reportValue(report, `per_n/${key}/sin_ratio`);
      svg.text(a.x0 + 10, y, `sin_ratio(n=${key}) = ${verbatim(ratio)}`, 'font-size="11"');
      y += 16;
    }
  }
  return svg.render();
}

/** log-log rate points for one series plus the fitted-slope annotation. */
export function rateLoglog(spec: PlotSpec): string {
  const experiment = spec.series === "drift" ? "duhamel" : "residuals";
  const table = parseCsv(spec.csv, experiment);
  const series = spec.series ?? "E_norm";
  const ns = column(table, "n");
  const vals = column(table, series);
  if (vals.some((v) => v <= 0) || ns.some((v) => v <= 0)) {
    throw new SchemaError(`column '${series}' must be positive for a log-log plot`);
  }
  const a = plotArea();
  const xs = logScale(Math.min(...ns), Math.max(...ns), a.x0, a.x1);
  const ys = logScale(Math.min(...vals), Math.max(...vals), a.y0, a.y1);
  const svg = new Svg();
  drawAxes(svg, xs, ys, {
    title: spec.title ?? `decay of ${series}`,
    xlabel: spec.xlabel ?? "n",
    ylabel: spec.ylabel ?? series,
  });
  const nIdx = table.columns.indexOf("n");
  const vIdx = table.columns.indexOf(series);
  const tIdx = table.columns.indexOf("t");
  const byT = groupBy(table, "t");
  let ci = 0;
  const entries: Array<[string, string]> = [];
  for (const [t, rows] of [...byT.entries()].sort((p, q) => p[0] - q[0])) {
    const color = PALETTE[ci++ % PALETTE.length];
    const pts = rows
      .slice()
      .sort((p, q) => p[nIdx] - q[nIdx])
      .map((r) => [xs(r[nIdx]), ys(r[vIdx])] as [number, number]);
    svg.path(pts, `stroke="${color}" stroke-width="1.2" stroke-dasharray="2 3"`);
    for (const [px, py] of pts) {
      svg.circle(px, py, 3, `fill="${color}"`);
    }
    entries.push([`t = ${t}`, color]);
  }
  legend(svg, entries);
  if (spec.report && spec.slope_key) {
    const report = readReport(spec.report);
    const slope = reportValue(report, spec.slope_key);
    svg.text(a.x0 + 10, a.y1 + 14, `slope = ${verbatim(slope)}`, 'font-size="12"');
  }
  return svg.render();
}

/** Relative errors of the three scaled quantities against n. */
export function asymptoticsConvergence(spec: PlotSpec): string {
  const table = parseCsv(spec.csv, "asymptotics");
  const report = spec.report ? readReport(spec.report) : undefined;
  const phiL2 = report
    ? (reportValue(report, "phi_l2") as number)
    : undefined;
  if (report && (typeof phiL2 !== "number" || !(phiL2 > 0))) {
    throw new SchemaError("report key 'phi_l2' must be a positive number");
  }
  const groups = groupBy(table, "n");
  const ns = [...groups.keys()].sort((p, q) => p - q);
  const cols = ["plain", "cos_scaled", "sin_scaled"];
  // without a report the curves show the raw quantities; with one they show
  // relative errors against the reference constant it carries
  const series: number[][] = cols.map((name) => {
    const vals = column(table, name);
    if (!phiL2) {
      return vals;
    }
    const target = name === "plain" ? phiL2 : phiL2 / Math.SQRT2;
    return vals.map((v) => Math.abs(v - target) / target);
  });
  const flat = series.flat().filter((v) => v > 0);
  if (flat.length === 0) {
    throw new SchemaError("all values are zero; nothing to plot on a log axis");
  }
  const a = plotArea();
  const xs = logScale(Math.min(...ns), Math.max(...ns), a.x0, a.x1);
  const ys = logScale(Math.min(...flat), Math.max(...flat), a.y0, a.y1);
  const svg = new Svg();
  drawAxes(svg, xs, ys, {
    title: spec.title ?? (phiL2 ? "scaling-limit relative errors" : "scaled quantities"),
    xlabel: spec.xlabel ?? "n",
    ylabel: spec.ylabel ?? (phiL2 ? "relative error" : "value"),
  });
  const nIdx = table.columns.indexOf("n");
  const entries: Array<[string, string]> = [];
  cols.forEach((name, ci) => {
    const color = PALETTE[ci % PALETTE.length];
    const colIdx = table.columns.indexOf(name);
    const pts: Array<[number, number]> = [];
    for (const n of ns) {
      const rows = groups.get(n)!;
      let v = Math.max(...rows.map((r) => {
        const raw = r[colIdx];
        if (!phiL2) return raw;
        const target = name === "plain" ? phiL2 : phiL2 / Math.SQRT2;
        return Math.abs(raw - target) / target;
      }));
      if (v > 0) {
        pts.push([xs(n), ys(v)]);
      }
    }
    svg.path(pts, `stroke="${color}" stroke-width="1.8"`);
    for (const [px, py] of pts) {
      svg.circle(px, py, 3, `fill="${color}"`);
    }
    entries.push([name, color]);
  });
  legend(svg, entries);
  if (report) {
    svg.text(a.x0 + 10, a.y1 + 14, `phi_l2 = ${verbatim(phiL2)}`, 'font-size="12"');
  }
  return svg.render();
}

/** Solution distance against data distance across perturbation halvings. */
export function continuityDecay(spec: PlotSpec): string {
  const table = parseCsv(spec.csv, "continuity");
  const eps = column(table, "eps").filter((v) => v > 0);
  const rows = table.rows.filter((r) => r[table.columns.indexOf("eps")] > 0);
  if (rows.length === 0) {
    throw new SchemaError(`${spec.csv}: no positive perturbation levels`);
  }
  const dIdx = table.columns.indexOf("data_dist");
  const sIdx = table.columns.indexOf("sol_dist");
  const all = rows.flatMap((r) => [r[dIdx], r[sIdx]]).filter((v) => v > 0);
  const a = plotArea();
  const xs = logScale(Math.min(...eps), Math.max(...eps), a.x0, a.x1);
  const ys = logScale(Math.min(...all), Math.max(...all), a.y0, a.y1);
  const svg = new Svg();
  drawAxes(svg, xs, ys, {
    title: spec.title ?? "solution distance under perturbation halvings",
    xlabel: spec.xlabel ?? "perturbation size",
    ylabel: spec.ylabel ?? "distance",
  });
  const eIdx = table.columns.indexOf("eps");
  const sorted = rows.slice().sort((p, q) => p[eIdx] - q[eIdx]);
  const entries: Array<[string, string]> = [];
  [["data_dist", dIdx], ["sol_dist", sIdx]].forEach(([name, idx], ci) => {
    const color = PALETTE[ci % PALETTE.length];
    const pts = sorted.map(
      (r) => [xs(r[eIdx]), ys(r[idx as number])] as [number, number],
    );
    svg.path(pts, `stroke="${color}" stroke-width="1.8"`);
    for (const [px, py] of pts) {
      svg.circle(px, py, 3, `fill="${color}"`);
    }
    entries.push([name as string, color]);
  });
  legend(svg, entries);
  if (spec.report) {
    const report = readReport(spec.report);
    const contraction = reportValue(report, "checks/contraction_ratio");
    svg.text(a.x0 + 10, a.y1 + 14,
      `contraction = ${verbatim(contraction)}`, 'font-size="12"');
  }
  return svg.render();
}

export function renderFigure(spec: PlotSpec): string {
  switch (spec.kind) {
    case "nonuniform_overlay":
      return nonuniformOverlay(spec);
    case "rate_loglog":
      return rateLoglog(spec);
    case "asymptotics_convergence":
      return asymptoticsConvergence(spec);
    case "continuity_decay":
      return continuityDecay(spec);
  }
}
