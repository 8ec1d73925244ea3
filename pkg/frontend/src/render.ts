/**
 * End-to-end figure rendering: spec file in, SVG file out.  The SVG text
 * is fully assembled before anything touches the filesystem, so a failing
 * spec (schema mismatch, empty series, ...) never leaves a partial file.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { buildSeries, FigureError, loadFigureSpec, readCsvFile, slopeReport } from "./figure.js";
import { renderChart } from "./svg.js";

export type OutputFormat = "svg" | "png";

export interface RenderResult {
  /** absolute path of the written image */
  output: string;
  /** log-axis filtering notes, one per affected series */
  notes: string[];
  /** per-series slope self-check lines */
  slopes: string[];
  /** the SVG text that was written */
  svg: string;
}

export function renderFigure(specPath: string, format: OutputFormat = "svg"): RenderResult {
  if (format === "png") {
    throw new FigureError(
      "png output is not supported in this build (no raster backend available); use --format svg",
    );
  }
  const spec = loadFigureSpec(specPath);
  const parsed = spec.csv_paths.map(readCsvFile);
  const { series, notes } = buildSeries(spec, parsed);
  const slopes = slopeReport(spec, series);
  const svg = renderChart(series, {
    title: spec.title,
    xLabel: spec.x_label ?? (spec.x_axis === "sqrt_n" ? "sqrt(n)" : "n"),
    yLabel: spec.y_label ?? "error",
  });
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf8");
  return { output: spec.output, notes, slopes, svg };
}
