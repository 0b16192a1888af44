/**
 * Parsing and validation of the documented experiment outputs.
 *
 * The renderer only ever touches these contracts: the raw-series CSVs
 * (fixed headers per experiment) and the JSON reports whose annotated
 * values are passed through verbatim. A violation throws SchemaError
 * naming the offending column or key.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {}

export interface CsvTable {
  columns: string[];
  rows: number[][];
}

const CSV_HEADERS: Record<string, string[]> = {
  nonuniform: ["n", "t", "D", "sin_t", "bound_sum"],
  residuals: ["n", "t", "E_norm", "F_norm"],
  duhamel: ["n", "t", "drift"],
  asymptotics: ["n", "alpha", "plain", "cos_scaled", "sin_scaled"],
  continuity: ["level", "eps", "data_dist", "sol_dist"],
  gronwall: ["n", "t", "lhs", "rhs", "A_int"],
};

export function expectedHeader(experiment: string): string[] {
  const header = CSV_HEADERS[experiment];
  if (!header) {
    throw new SchemaError(`unknown experiment kind '${experiment}'`);
  }
  return header;
}

export function parseCsv(path: string, experiment: string): CsvTable {
  const text = readFileSync(path, "utf8").trim();
  if (text === "") {
    throw new SchemaError(`${path}: empty CSV`);
  }
  const lines = text.split(/\r?\n/);
  const columns = lines[0].split(",");
  const expected = expectedHeader(experiment);
  for (const col of expected) {
    if (!columns.includes(col)) {
      throw new SchemaError(`${path}: missing column '${col}'`);
    }
  }
  if (lines.length < 2) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new SchemaError(`${path}: row ${i} has ${parts.length} fields, header has ${columns.length}`);
    }
    const row = parts.map((p, j) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: row ${i}, column '${columns[j]}' is not a number: '${p}'`);
      }
      return v;
    });
    rows.push(row);
  }
  return { columns, rows };
}

export function column(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column '${name}'`);
  }
  return table.rows.map((r) => r[idx]);
}

/** Raw JSON report; annotation lookups keep the original token. */
export function readReport(path: string): Record<string, unknown> {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SchemaError(`${path}: invalid JSON (${(err as Error).message})`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    throw new SchemaError(`${path}: report root must be an object`);
  }
  return parsed as Record<string, unknown>;
}

/** Slash-separated path lookup (report keys may contain dots). */
export function reportValue(report: Record<string, unknown>, path: string): unknown {
  let node: unknown = report;
  for (const key of path.split("/")) {
    if (typeof node !== "object" || node === null || !(key in (node as object))) {
      throw new SchemaError(`report key '${path}' missing at '${key}'`);
    }
    node = (node as Record<string, unknown>)[key];
  }
  return node;
}

/**
 * Verbatim rendering of a JSON value: numbers round-trip through
 * JSON.stringify, which reproduces the shortest form that parses back to
 * the same double, so annotations match the report text.
 */
export function verbatim(value: unknown): string {
  return JSON.stringify(value);
}

export interface PlotSpec {
  kind: "nonuniform_overlay" | "rate_loglog" | "asymptotics_convergence" | "continuity_decay";
  csv: string;
  report?: string;
  output: string;
  title?: string;
  xlabel?: string;
  ylabel?: string;
  /** for rate_loglog: which series to plot and where its slope lives */
  series?: string;
  slope_key?: string;
}

const KINDS = new Set([
  "nonuniform_overlay",
  "rate_loglog",
  "asymptotics_convergence",
  "continuity_decay",
]);

export function parseSpec(path: string): PlotSpec {
  const raw = readReport(path);
  const kind = raw["kind"];
  if (typeof kind !== "string" || !KINDS.has(kind)) {
    throw new SchemaError(`${path}: 'kind' must be one of ${[...KINDS].join(", ")}`);
  }
  const csv = raw["csv"];
  if (typeof csv !== "string") {
    throw new SchemaError(`${path}: 'csv' must be an input path`);
  }
  const output = raw["output"];
  if (typeof output !== "string") {
    throw new SchemaError(`${path}: 'output' must be a path`);
  }
  if (!output.endsWith(".svg")) {
    throw new SchemaError(
      `${path}: only .svg output is supported (no raster backend); got '${output}'`,
    );
  }
  const spec: PlotSpec = {
    kind: kind as PlotSpec["kind"],
    csv,
    output,
  };
  for (const key of ["report", "title", "xlabel", "ylabel", "series", "slope_key"] as const) {
    const v = raw[key];
    if (v !== undefined) {
      if (typeof v !== "string") {
        throw new SchemaError(`${path}: '${key}' must be a string`);
      }
      spec[key] = v;
    }
  }
  return spec;
}
