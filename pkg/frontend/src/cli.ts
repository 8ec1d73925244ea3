#!/usr/bin/env node
/**
 * Command-line entry: `render --spec <json> [--format svg|png]`.
 *
 * Exit codes: 0 figure written; 1 rendering failed (schema mismatch,
 * empty series, unreadable input, unsupported raster output) with no file
 * written; 2 usage error.
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { CsvSchemaError } from "./csv.js";
import { FigureError } from "./figure.js";
import { renderFigure, type OutputFormat } from "./render.js";

const USAGE = "usage: hermapprox-figures render --spec <figure.json> [--format svg|png]";

export function main(argv: string[]): number {
  let values: { spec?: string; format?: string };
  let positionals: string[];
  try {
    ({ values, positionals } = parseArgs({
      args: argv,
      options: {
        spec: { type: "string" },
        format: { type: "string", default: "svg" },
      },
      allowPositionals: true,
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (positionals.length !== 1 || positionals[0] !== "render") {
    console.error(USAGE);
    return 2;
  }
  if (!values.spec) {
    console.error("error: --spec <figure.json> is required");
    console.error(USAGE);
    return 2;
  }
  const format = values.format ?? "svg";
  if (format !== "svg" && format !== "png") {
    console.error(`error: unknown format ${JSON.stringify(format)}; choose svg or png`);
    return 2;
  }
  try {
    const result = renderFigure(values.spec, format as OutputFormat);
    for (const note of result.notes) console.error(`[note] ${note}`);
    for (const line of result.slopes) console.error(line);
    console.log(`wrote ${result.output}`);
    return 0;
  } catch (err) {
    if (err instanceof FigureError || err instanceof CsvSchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(realpathSync(entry)).href) {
  process.exit(main(process.argv.slice(2)));
}
