import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { SchemaError, column, parseCsv, parseSpec, reportValue, verbatim, readReport } from "../src/schema.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;

function tmpFile(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

describe("parseCsv", () => {
  it("reads the nonuniform series", () => {
    const table = parseCsv(join(FIXTURES, "nonuniform.csv"), "nonuniform");
    expect(table.columns).toEqual(["n", "t", "D", "sin_t", "bound_sum"]);
    expect(table.rows.length).toBeGreaterThan(10);
    const ds = column(table, "D");
    expect(Math.min(...ds)).toBeGreaterThanOrEqual(0);
  });

  it("rejects an empty CSV without writing", () => {
    const path = tmpFile("empty.csv", "");
    expect(() => parseCsv(path, "nonuniform")).toThrow(SchemaError);
  });

  it("names the missing column", () => {
    const path = tmpFile("bad.csv", "n,t,Q\n1,0.0,2.0\n");
    expect(() => parseCsv(path, "nonuniform")).toThrow(/missing column 'D'/);
  });

  it("names the non-numeric cell", () => {
    const path = tmpFile("nan.csv", "n,t,D,sin_t,bound_sum\n1,0.0,oops,0.1,3\n");
    expect(() => parseCsv(path, "nonuniform")).toThrow(/column 'D'/);
  });

  it("rejects ragged rows", () => {
    const path = tmpFile("ragged.csv", "n,t,D,sin_t,bound_sum\n1,0.0,1.0\n");
    expect(() => parseCsv(path, "nonuniform")).toThrow(/row 1/);
  });
});

describe("reports", () => {
  it("looks up dotted keys and renders verbatim", () => {
    const report = readReport(join(FIXTURES, "nonuniform.json"));
    const slope = reportValue(report, "D0_fit/slope");
    expect(typeof slope).toBe("number");
    // verbatim text reproduces the JSON token exactly
    const text = verbatim(slope);
    expect(JSON.parse(text)).toBe(slope);
    expect(verbatim(-1.25)).toBe("-1.25");
  });

  it("throws on missing keys", () => {
    const report = readReport(join(FIXTURES, "nonuniform.json"));
    expect(() => reportValue(report, "per_n/999/sin_ratio")).toThrow(/999/);
  });
});

describe("parseSpec", () => {
  it("accepts a valid spec", () => {
    const path = tmpFile("spec.json", JSON.stringify({
      kind: "nonuniform_overlay",
      csv: join(FIXTURES, "nonuniform.csv"),
      output: "/tmp/fig.svg",
    }));
    const spec = parseSpec(path);
    expect(spec.kind).toBe("nonuniform_overlay");
  });

  it("rejects unknown kinds and non-svg outputs", () => {
    const bad = tmpFile("spec.json", JSON.stringify({
      kind: "pie", csv: "x.csv", output: "fig.svg",
    }));
    expect(() => parseSpec(bad)).toThrow(/kind/);
    const png = tmpFile("spec2.json", JSON.stringify({
      kind: "rate_loglog", csv: "x.csv", output: "fig.png",
    }));
    expect(() => parseSpec(png)).toThrow(/svg/);
  });
});
