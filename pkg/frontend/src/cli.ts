#!/usr/bin/env node
/**
 * plots render --spec spec.json
 *
 * Reads a plot spec naming the experiment CSV (and optionally the JSON
 * report for verbatim annotations), writes a deterministic SVG figure.
 * Schema violations exit nonzero without writing anything.
 */

import { writeFileSync } from "fs";
import { renderFigure } from "./figures.js";
import { SchemaError, parseSpec } from "./schema.js";

function usage(): never {
  process.stderr.write("usage: plots render --spec <spec.json>\n");
  process.exit(2);
}

export function main(argv: string[]): number {
  if (argv.length < 1 || argv[0] !== "render") {
    usage();
  }
  const flagIdx = argv.indexOf("--spec");
  if (flagIdx < 0 || flagIdx + 1 >= argv.length) {
    usage();
  }
  const specPath = argv[flagIdx + 1];
  let svg: string;
  let output: string;
  try {
    const spec = parseSpec(specPath);
    output = spec.output;
    svg = renderFigure(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 1;
    }
    if ((err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`missing input: ${(err as Error).message}\n`);
      return 1;
    }
    throw err;
  }
  writeFileSync(output, svg + "\n");
  process.stdout.write(`wrote ${output}\n`);
  return 0;
}

const invoked = process.argv[1] ?? "";
if (invoked.endsWith("cli.js") || invoked.endsWith("plots")) {
  process.exit(main(process.argv.slice(2)));
}
