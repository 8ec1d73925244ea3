/**
 * Figure assembly: turn parsed experiment CSVs into plottable series
 * according to a JSON figure spec, with log-axis hygiene (nonpositive
 * values dropped, each drop noted) and a per-series least-squares slope
 * self-check of log(error) against the chosen x axis.
 */

import { readFileSync } from "node:fs";
import { basename, dirname, resolve } from "node:path";
import { parseCsv, type DataRow, type ParsedCsv } from "./csv.js";

export type XAxis = "sqrt_n" | "n";
export type Overlay = "bound" | "rate_ref" | "none";

export interface FigureSpec {
  csv_paths: string[];
  x_axis: XAxis;
  overlay: Overlay;
  title: string;
  x_label?: string;
  y_label?: string;
  output: string;
}

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  points: Point[];
  /** dashed reference curve taken from the overlay column, if requested */
  overlay: Point[];
}

export class FigureError extends Error {
  override name = "FigureError";
}

const X_AXES: readonly XAxis[] = ["sqrt_n", "n"];
const OVERLAYS: readonly Overlay[] = ["bound", "rate_ref", "none"];

/** Load and validate a figure spec; relative paths resolve against the spec file. */
export function loadFigureSpec(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new FigureError(`cannot read figure spec ${path}: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new FigureError(`figure spec ${path}: top level must be a JSON object`);
  }
  const obj = raw as Record<string, unknown>;
  const allowed = new Set(["csv_paths", "x_axis", "overlay", "title", "x_label", "y_label", "output"]);
  for (const key of Object.keys(obj)) {
    if (!allowed.has(key)) throw new FigureError(`figure spec ${path}: unknown field "${key}"`);
  }
  const paths = obj["csv_paths"];
  if (!Array.isArray(paths) || paths.length === 0 || !paths.every((p) => typeof p === "string")) {
    throw new FigureError(`figure spec ${path}: "csv_paths" must be a non-empty array of strings`);
  }
  const xAxis = obj["x_axis"];
  if (!X_AXES.includes(xAxis as XAxis)) {
    throw new FigureError(`figure spec ${path}: "x_axis" must be one of ${X_AXES.join(", ")}`);
  }
  const overlay = obj["overlay"] ?? "none";
  if (!OVERLAYS.includes(overlay as Overlay)) {
    throw new FigureError(`figure spec ${path}: "overlay" must be one of ${OVERLAYS.join(", ")}`);
  }
  for (const key of ["title", "output"] as const) {
    if (typeof obj[key] !== "string" || obj[key] === "") {
      throw new FigureError(`figure spec ${path}: "${key}" must be a non-empty string`);
    }
  }
  for (const key of ["x_label", "y_label"] as const) {
    if (key in obj && typeof obj[key] !== "string") {
      throw new FigureError(`figure spec ${path}: "${key}" must be a string`);
    }
  }
  const base = dirname(resolve(path));
  return {
    csv_paths: (paths as string[]).map((p) => resolve(base, p)),
    x_axis: xAxis as XAxis,
    overlay: overlay as Overlay,
    title: obj["title"] as string,
    x_label: obj["x_label"] as string | undefined,
    y_label: obj["y_label"] as string | undefined,
    output: resolve(base, obj["output"] as string),
  };
}

export function readCsvFile(path: string): ParsedCsv {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new FigureError(`cannot read ${path}: ${(err as Error).message}`);
  }
  return parseCsv(text, path);
}

function seriesLabel(csvPath: string, method: string, methodsInFile: number): string {
  const stem = basename(csvPath).replace(/\.csv$/i, "");
  return methodsInFile > 1 ? method : stem;
}

function xValue(n: number, axis: XAxis): number {
  return axis === "sqrt_n" ? Math.sqrt(n) : n;
}

/**
 * Group rows by method tag within each CSV and project them onto the
 * figure's axes.  Values that cannot sit on a log axis (zero, negative,
 * or non-finite) are dropped and reported through `notes`.
 */
export function buildSeries(
  spec: FigureSpec,
  parsed: ParsedCsv[],
): { series: Series[]; notes: string[] } {
  const series: Series[] = [];
  const notes: string[] = [];
  for (const csv of parsed) {
    const groups = new Map<string, DataRow[]>();
    for (const row of csv.rows) {
      const bucket = groups.get(row.method);
      if (bucket) bucket.push(row);
      else groups.set(row.method, [row]);
    }
    if (groups.size === 0) {
      throw new FigureError(`${csv.source}: no data rows, nothing to plot`);
    }
    for (const [method, rows] of groups) {
      const label = seriesLabel(csv.source, method, groups.size);
      const points: Point[] = [];
      const overlay: Point[] = [];
      let dropped = 0;
      for (const row of rows) {
        const x = xValue(row.n, spec.x_axis);
        if (Number.isFinite(row.measured) && row.measured > 0) {
          points.push({ x, y: row.measured });
        } else {
          dropped += 1;
        }
        if (spec.overlay !== "none") {
          const ref = spec.overlay === "bound" ? row.bound : row.rate_ref;
          if (Number.isFinite(ref) && ref > 0) overlay.push({ x, y: ref });
        }
      }
      if (dropped > 0) {
        notes.push(
          `dropped ${dropped} zero/negative/non-finite value${dropped === 1 ? "" : "s"} ` +
            `from series "${label}" (log axis)`,
        );
      }
      if (points.length === 0) {
        throw new FigureError(
          `${csv.source}: series "${label}" has no plottable points after log-axis filtering`,
        );
      }
      series.push({ label, points, overlay });
    }
  }
  return { series, notes };
}

/** Ordinary least-squares slope of log(y) against x; needs >= 3 points. */
export function logSlope(points: Point[]): number | null {
  if (points.length < 3) return null;
  let sx = 0;
  let sy = 0;
  let sxx = 0;
  let sxy = 0;
  for (const { x, y } of points) {
    const ly = Math.log(y);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  const m = points.length;
  const denom = m * sxx - sx * sx;
  if (denom === 0) return null;
  return (m * sxy - sx * sy) / denom;
}

/** One informational slope line per series, for the stderr self-check. */
export function slopeReport(spec: FigureSpec, series: Series[]): string[] {
  const unit = spec.x_axis === "sqrt_n" ? "per sqrt(n)" : "per n";
  const lines: string[] = [];
  for (const s of series) {
    const slope = logSlope(s.points);
    if (slope !== null) {
      lines.push(`[slope] ${s.label}: ${slope.toFixed(4)} ${unit} (log-linear fit, ${s.points.length} points)`);
    }
  }
  return lines;
}
