import { readFileSync } from "fs";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { renderFigure } from "../src/figures.js";
import { readReport, reportValue, verbatim, PlotSpec } from "../src/schema.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;

function fixture(name: string): string {
  return join(FIXTURES, name);
}

describe("nonuniform overlay", () => {
  const spec: PlotSpec = {
    kind: "nonuniform_overlay",
    csv: fixture("nonuniform.csv"),
    report: fixture("nonuniform.json"),
    output: "unused.svg",
  };

  it("draws one curve per n plus the reference", () => {
    const svg = renderFigure(spec);
    expect(svg).toContain("|sin t|");
    expect(svg).toContain("n = 2");
    expect(svg).toContain("n = 8");
    expect(svg).toContain("stroke-dasharray");
  });

  it("annotates sin_ratio values verbatim from the report", () => {
    const svg = renderFigure(spec);
    const report = readReport(fixture("nonuniform.json"));
    for (const n of ["2", "4", "8"]) {
      const ratio = reportValue(report, `per_n/${n}/sin_ratio`);
      expect(svg).toContain(`sin_ratio(n=${n}) = ${verbatim(ratio)}`);
    }
  });

  it("is deterministic", () => {
    expect(renderFigure(spec)).toBe(renderFigure(spec));
  });
});

describe("rate log-log", () => {
  it("annotates the fitted slope verbatim", () => {
    const spec: PlotSpec = {
      kind: "rate_loglog",
      csv: fixture("residuals.csv"),
      report: fixture("residuals.json"),
      series: "F_norm",
      slope_key: "fits/0.25/F/slope",
      output: "unused.svg",
    };
    const svg = renderFigure(spec);
    const report = readReport(fixture("residuals.json"));
    const slope = reportValue(report, "fits/0.25/F/slope");
    expect(svg).toContain(`slope = ${verbatim(slope)}`);
  });

  it("rejects nonpositive values for the log axis", () => {
    const spec: PlotSpec = {
      kind: "rate_loglog",
      csv: fixture("nonuniform.csv"),
      series: "sin_t",
      output: "unused.svg",
    };
    expect(() => renderFigure(spec)).toThrow();
  });
});

describe("asymptotics convergence", () => {
  it("plots relative errors when the report provides the reference", () => {
    const spec: PlotSpec = {
      kind: "asymptotics_convergence",
      csv: fixture("asymptotics.csv"),
      report: fixture("asymptotics.json"),
      output: "unused.svg",
    };
    const svg = renderFigure(spec);
    expect(svg).toContain("plain");
    expect(svg).toContain("sin_scaled");
    const report = readReport(fixture("asymptotics.json"));
    expect(svg).toContain(`phi_l2 = ${verbatim(reportValue(report, "phi_l2"))}`);
  });
});

describe("continuity decay", () => {
  it("shows both distances and the contraction annotation", () => {
    const spec: PlotSpec = {
      kind: "continuity_decay",
      csv: fixture("continuity.csv"),
      report: fixture("continuity.json"),
      output: "unused.svg",
    };
    const svg = renderFigure(spec);
    expect(svg).toContain("data_dist");
    expect(svg).toContain("sol_dist");
    const report = readReport(fixture("continuity.json"));
    const c = reportValue(report, "checks/contraction_ratio");
    expect(svg).toContain(`contraction = ${verbatim(c)}`);
  });
});
