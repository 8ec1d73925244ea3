/**
 * Deterministic SVG line-chart emitter: linear x axis, log10 y axis,
 * per-series markers, optional dashed overlay curves, legend.  Output is
 * a pure function of the input series — no timestamps, generated ids, or
 * environment-dependent content — so re-renders are byte-identical.
 */

import type { Point, Series } from "./figure.js";

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
}

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { left: 64, right: 20, top: 44, bottom: 56 } as const;
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
const FONT = "Helvetica, Arial, sans-serif";

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtCoord(v: number): string {
  return v.toFixed(2);
}

function fmtTick(v: number): string {
  const s = v.toFixed(2).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

/** step from {1, 2, 5} x 10^k giving roughly `target` intervals */
function niceStep(span: number, target: number): number {
  const raw = span / Math.max(target, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= raw) return mag * mult;
  }
  return mag * 10;
}

interface XScale {
  min: number;
  max: number;
  toPx(v: number): number;
  ticks: number[];
}

interface YScale {
  decMin: number;
  decMax: number;
  toPx(v: number): number;
  tickDecades: number[];
}

function buildXScale(xs: number[]): XScale {
  let min = Math.min(...xs);
  let max = Math.max(...xs);
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const pad = 0.02 * (max - min);
  min -= pad;
  max += pad;
  const step = niceStep(max - min, 8);
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + 1e-9 * step; t += step) {
    ticks.push(Math.abs(t) < 1e-12 ? 0 : t);
  }
  return {
    min,
    max,
    toPx: (v) => MARGIN.left + ((v - min) / (max - min)) * PLOT_W,
    ticks,
  };
}

function buildYScale(ys: number[]): YScale {
  const decMin = Math.floor(Math.log10(Math.min(...ys)));
  let decMax = Math.ceil(Math.log10(Math.max(...ys)));
  if (decMax <= decMin) decMax = decMin + 1;
  const span = decMax - decMin;
  const every = Math.max(1, Math.ceil(span / 9));
  const tickDecades: number[] = [];
  for (let d = decMax; d >= decMin; d -= every) tickDecades.push(d);
  return {
    decMin,
    decMax,
    toPx: (v) => MARGIN.top + ((decMax - Math.log10(v)) / span) * PLOT_H,
    tickDecades,
  };
}

function polyline(points: Point[], x: XScale, y: YScale, attrs: string): string {
  const coords = points
    .map((p) => `${fmtCoord(x.toPx(p.x))},${fmtCoord(y.toPx(p.y))}`)
    .join(" ");
  return `<polyline fill="none" ${attrs} points="${coords}"/>`;
}

/** small marker centred on (cx, cy); shape cycles with the series index */
function marker(cx: number, cy: number, index: number, color: string): string {
  const r = 3.2;
  const X = fmtCoord;
  switch (index % 6) {
    case 0:
      return `<circle cx="${X(cx)}" cy="${X(cy)}" r="${r}" fill="${color}"/>`;
    case 1:
      return `<rect x="${X(cx - r)}" y="${X(cy - r)}" width="${X(2 * r)}" height="${X(2 * r)}" fill="${color}"/>`;
    case 2:
      return `<path d="M${X(cx)} ${X(cy - r)} L${X(cx + r)} ${X(cy + r)} L${X(cx - r)} ${X(cy + r)} Z" fill="${color}"/>`;
    case 3:
      return `<path d="M${X(cx)} ${X(cy - r)} L${X(cx + r)} ${X(cy)} L${X(cx)} ${X(cy + r)} L${X(cx - r)} ${X(cy)} Z" fill="${color}"/>`;
    case 4:
      return `<path d="M${X(cx - r)} ${X(cy)} H${X(cx + r)} M${X(cx)} ${X(cy - r)} V${X(cy + r)}" stroke="${color}" stroke-width="1.6" fill="none"/>`;
    default:
      return `<path d="M${X(cx - r)} ${X(cy - r)} L${X(cx + r)} ${X(cy + r)} M${X(cx - r)} ${X(cy + r)} L${X(cx + r)} ${X(cy - r)}" stroke="${color}" stroke-width="1.6" fill="none"/>`;
  }
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0) {
    throw new Error("no series to render");
  }
  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of series) {
    for (const p of s.points) {
      xs.push(p.x);
      ys.push(p.y);
    }
    for (const p of s.overlay) {
      xs.push(p.x);
      ys.push(p.y);
    }
  }
  const x = buildXScale(xs);
  const y = buildYScale(ys);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  parts.push(`<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);

  // horizontal gridlines at labelled decades
  for (const d of y.tickDecades) {
    const py = fmtCoord(y.toPx(Math.pow(10, d)));
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py}" x2="${WIDTH - MARGIN.right}" y2="${py}" stroke="#dddddd" stroke-width="1"/>`,
    );
  }

  // axes
  const axisBottom = MARGIN.top + PLOT_H;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisBottom}" stroke="#000000" stroke-width="1"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisBottom}" x2="${WIDTH - MARGIN.right}" y2="${axisBottom}" stroke="#000000" stroke-width="1"/>`,
  );

  for (const t of x.ticks) {
    const px = fmtCoord(x.toPx(t));
    parts.push(
      `<line x1="${px}" y1="${axisBottom}" x2="${px}" y2="${axisBottom + 5}" stroke="#000000" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px}" y="${axisBottom + 18}" font-family="${FONT}" font-size="12" text-anchor="middle">${fmtTick(t)}</text>`,
    );
  }
  for (const d of y.tickDecades) {
    const py = y.toPx(Math.pow(10, d));
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmtCoord(py)}" x2="${MARGIN.left}" y2="${fmtCoord(py)}" stroke="#000000" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${fmtCoord(py + 4)}" font-family="${FONT}" font-size="12" text-anchor="end">1e${d}</text>`,
    );
  }

  // series overlays first so data markers sit on top
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length] ?? "#000000";
    if (s.overlay.length >= 2) {
      parts.push(
        polyline(s.overlay, x, y, `stroke="${color}" stroke-width="1.3" stroke-dasharray="6 4" opacity="0.85"`),
      );
    }
  });
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length] ?? "#000000";
    parts.push(polyline(s.points, x, y, `stroke="${color}" stroke-width="1.6"`));
    for (const p of s.points) {
      parts.push(marker(x.toPx(p.x), y.toPx(p.y), i, color));
    }
  });

  // legend, top-right inside the plot
  const legendX = WIDTH - MARGIN.right - 240;
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length] ?? "#000000";
    const ly = MARGIN.top + 12 + 17 * i;
    parts.push(
      `<line x1="${legendX}" y1="${ly}" x2="${legendX + 26}" y2="${ly}" stroke="${color}" stroke-width="1.6"/>`,
    );
    parts.push(marker(legendX + 13, ly, i, color));
    parts.push(
      `<text x="${legendX + 32}" y="${ly + 4}" font-family="${FONT}" font-size="12">${escapeXml(s.label)}</text>`,
    );
  });
  if (series.some((s) => s.overlay.length >= 2)) {
    const ly = MARGIN.top + 12 + 17 * series.length;
    parts.push(
      `<line x1="${legendX}" y1="${ly}" x2="${legendX + 26}" y2="${ly}" stroke="#555555" stroke-width="1.3" stroke-dasharray="6 4"/>`,
    );
    parts.push(
      `<text x="${legendX + 32}" y="${ly + 4}" font-family="${FONT}" font-size="12">predicted reference</text>`,
    );
  }

  // title and axis labels
  parts.push(
    `<text x="${WIDTH / 2}" y="${MARGIN.top - 16}" font-family="${FONT}" font-size="15" text-anchor="middle">${escapeXml(opts.title)}</text>`,
  );
  parts.push(
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${HEIGHT - 14}" font-family="${FONT}" font-size="13" text-anchor="middle">${escapeXml(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + PLOT_H / 2}" font-family="${FONT}" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">${escapeXml(opts.yLabel)}</text>`,
  );

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
