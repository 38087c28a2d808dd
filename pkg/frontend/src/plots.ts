/**
 * The five figure kinds, each reading only the documented CSV schemas of a
 * run directory and rendering onto the software canvas.  Rendering touches
 * nothing inside the run directory and carries no timestamps, so a fixed
 * input directory always yields identical bytes.
 */
import { join } from "node:path";

import { BLACK, Color, GREY, PALETTE, Raster, colormap } from "./raster";
import {
  PlotDataError,
  SCHEMAS,
  Table,
  column,
  readTable,
  snapshotFiles,
  textColumn,
} from "./csv";

export const KINDS = ["field", "norms", "traces", "gowdy_heatmap", "constraint_decay"] as const;
export type Kind = (typeof KINDS)[number];

export interface InputRecord {
  file: string;
  columns: string[];
}

export interface Figure {
  raster: Raster;
  inputs: InputRecord[];
}

// --- small plotting toolkit -------------------------------------------------

interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(1).replace("e", "e");
  }
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const step0 = span / Math.max(1, n);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= step0) {
      step = m * mag;
      break;
    }
  }
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

interface Series {
  xs: number[];
  ys: number[];
  label: string;
  color: Color;
}

interface LinePlotOpts {
  title: string;
  xlabel: string;
  ylabel: string;
  logy?: boolean;
  annotation?: string;
}

function drawFrame(r: Raster, rect: Rect, title: string): void {
  r.line(rect.x, rect.y, rect.x, rect.y + rect.h, BLACK);
  r.line(rect.x, rect.y + rect.h, rect.x + rect.w, rect.y + rect.h, BLACK);
  r.line(rect.x + rect.w, rect.y, rect.x + rect.w, rect.y + rect.h, BLACK);
  r.line(rect.x, rect.y, rect.x + rect.w, rect.y, BLACK);
  r.textCenter(rect.x + rect.w / 2, rect.y - 16, title);
}

function linePlot(r: Raster, rect: Rect, series: Series[], opts: LinePlotOpts): void {
  const tiny = 1e-300;
  const ty = (v: number) => (opts.logy ? Math.log10(Math.max(v, tiny)) : v);
  let xlo = Infinity;
  let xhi = -Infinity;
  let ylo = Infinity;
  let yhi = -Infinity;
  for (const s of series) {
    for (const v of s.xs) {
      if (Number.isFinite(v)) {
        xlo = Math.min(xlo, v);
        xhi = Math.max(xhi, v);
      }
    }
    for (const v of s.ys) {
      const w = ty(v);
      if (Number.isFinite(w)) {
        ylo = Math.min(ylo, w);
        yhi = Math.max(yhi, w);
      }
    }
  }
  if (!Number.isFinite(xlo) || !Number.isFinite(ylo)) {
    throw new PlotDataError("no finite data points to plot");
  }
  if (xhi === xlo) xhi = xlo + 1;
  if (yhi === ylo) {
    yhi += Math.abs(yhi) * 0.5 + 1;
    ylo -= Math.abs(ylo) * 0.5 + 1;
  }
  const pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;

  const px = (v: number) => rect.x + ((v - xlo) / (xhi - xlo)) * rect.w;
  const py = (v: number) => rect.y + rect.h - ((ty(v) - ylo) / (yhi - ylo)) * rect.h;

  for (const t of niceTicks(xlo, xhi)) {
    const x = px(t);
    r.line(x, rect.y + rect.h, x, rect.y + rect.h + 4, BLACK);
    r.line(x, rect.y, x, rect.y + rect.h, GREY);
    r.textCenter(x, rect.y + rect.h + 8, fmt(t));
  }
  const yticks = opts.logy
    ? niceTicks(Math.floor(ylo), Math.ceil(yhi), 5).filter((v) => Number.isInteger(v))
    : niceTicks(ylo, yhi);
  for (const t of yticks) {
    const y = rect.y + rect.h - ((t - ylo) / (yhi - ylo)) * rect.h;
    r.line(rect.x - 4, y, rect.x, y, BLACK);
    r.line(rect.x, y, rect.x + rect.w, y, GREY);
    r.textRight(rect.x - 6, y - 3, opts.logy ? `1e${fmt(t)}` : fmt(t));
  }
  drawFrame(r, rect, opts.title);
  r.textCenter(rect.x + rect.w / 2, rect.y + rect.h + 22, opts.xlabel);
  r.text(6, rect.y - 16, opts.ylabel);

  series.forEach((s) => {
    const xs = s.xs.map(px);
    const ys = s.ys.map((v) => py(v));
    r.polyline(xs, ys, s.color);
    if (s.xs.length === 1) r.marker(xs[0], ys[0], s.color);
  });

  // legend, top-right inside the frame
  let ly = rect.y + 6;
  for (const s of series) {
    const lx = rect.x + rect.w - 10 - r.textWidth(s.label) - 18;
    r.fillRect(lx, ly + 2, 12, 3, s.color);
    r.text(lx + 16, ly, s.label);
    ly += 12;
  }
  if (opts.annotation) {
    r.text(rect.x + 8, rect.y + 6, opts.annotation, BLACK);
  }
}

function heatmapPanel(
  r: Raster,
  rect: Rect,
  grid: number[][], // [column][row], column = horizontal position
  title: string,
  xlabelTicks: Array<{ frac: number; label: string }>,
  ylabelTicks: Array<{ frac: number; label: string }>,
): void {
  let lo = Infinity;
  let hi = -Infinity;
  for (const col of grid) {
    for (const v of col) {
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo)) throw new PlotDataError("no finite data in heatmap");
  if (hi === lo) hi = lo + 1;
  const ncol = grid.length;
  const nrow = grid[0].length;
  for (let i = 0; i < ncol; i++) {
    const x0 = rect.x + (i / ncol) * rect.w;
    const x1 = rect.x + ((i + 1) / ncol) * rect.w;
    for (let j = 0; j < nrow; j++) {
      // row 0 at the bottom
      const y0 = rect.y + rect.h - ((j + 1) / nrow) * rect.h;
      const y1 = rect.y + rect.h - (j / nrow) * rect.h;
      const v = grid[i][j];
      const c = Number.isFinite(v) ? colormap((v - lo) / (hi - lo)) : ([255, 255, 255, 255] as Color);
      r.fillRect(x0, y0, Math.max(1, x1 - x0), Math.max(1, y1 - y0), c);
    }
  }
  drawFrame(r, rect, title);
  for (const t of xlabelTicks) {
    const x = rect.x + t.frac * rect.w;
    r.line(x, rect.y + rect.h, x, rect.y + rect.h + 4, BLACK);
    r.textCenter(x, rect.y + rect.h + 8, t.label);
  }
  for (const t of ylabelTicks) {
    const y = rect.y + rect.h - t.frac * rect.h;
    r.line(rect.x - 4, y, rect.x, y, BLACK);
    r.textRight(rect.x - 6, y - 3, t.label);
  }
  // colorbar
  const cb: Rect = { x: rect.x + rect.w + 14, y: rect.y, w: 14, h: rect.h };
  for (let y = 0; y < cb.h; y++) {
    const frac = 1 - y / cb.h;
    const c = colormap(frac);
    r.fillRect(cb.x, cb.y + y, cb.w, 1, c);
  }
  r.text(cb.x + cb.w + 4, cb.y - 3, fmt(hi));
  r.text(cb.x + cb.w + 4, cb.y + cb.h - 4, fmt(lo));
}

// --- the five kinds ----------------------------------------------------------

function plotField(dir: string): Figure {
  const snaps = snapshotFiles(dir, "field");
  if (snaps.length === 0) {
    throw new PlotDataError(`expected input file not found: ${join(dir, "field_<step>.csv")}`);
  }
  const chosen = snaps[snaps.length - 1];
  let table: Table;
  let twoD = false;
  try {
    table = readTable(chosen.file, SCHEMAS.field1d);
  } catch (err) {
    if (!(err instanceof PlotDataError) || !err.message.includes("schema mismatch")) throw err;
    table = readTable(chosen.file, SCHEMAS.field2d);
    twoD = true;
  }
  if (!twoD) {
    const r = new Raster(640, 420);
    const rect: Rect = { x: 64, y: 40, w: 540, h: 320 };
    linePlot(r, rect, [{ xs: column(table, "x"), ys: column(table, "u"), label: "u", color: PALETTE[0] }],
      { title: `field snapshot ${chosen.step}`, xlabel: "x", ylabel: "u" });
    return { raster: r, inputs: [{ file: chosen.file, columns: ["x", "u"] }] };
  }
  const xs = column(table, "x");
  const ys = column(table, "y");
  const us = column(table, "u");
  const xu = [...new Set(xs)].sort((a, b) => a - b);
  const yu = [...new Set(ys)].sort((a, b) => a - b);
  const index = new Map<string, number>();
  xu.forEach((v, i) => index.set(`x${v}`, i));
  yu.forEach((v, i) => index.set(`y${v}`, i));
  const grid: number[][] = xu.map(() => yu.map(() => NaN));
  for (let k = 0; k < us.length; k++) {
    grid[index.get(`x${xs[k]}`)!][index.get(`y${ys[k]}`)!] = us[k];
  }
  const r = new Raster(640, 480);
  const rect: Rect = { x: 64, y: 40, w: 480, h: 380 };
  heatmapPanel(r, rect, grid, `field snapshot ${chosen.step}`,
    [{ frac: 0, label: fmt(xu[0]) }, { frac: 1, label: fmt(xu[xu.length - 1]) }],
    [{ frac: 0, label: fmt(yu[0]) }, { frac: 1, label: fmt(yu[yu.length - 1]) }]);
  return { raster: r, inputs: [{ file: chosen.file, columns: ["x", "y", "u"] }] };
}

function plotNorms(dir: string): Figure {
  const normsPath = join(dir, "norms.csv");
  const seriesPath = join(dir, "gowdy_series.csv");
  const r = new Raster(640, 420);
  const rect: Rect = { x: 64, y: 40, w: 540, h: 320 };
  try {
    const table = readTable(normsPath, SCHEMAS.norms);
    const t = column(table, "t");
    const names = ["l1", "l2", "linf", "mass"];
    linePlot(r, rect,
      names.map((n, i) => ({ xs: t, ys: column(table, n), label: n, color: PALETTE[i] })),
      { title: "norm series", xlabel: "t", ylabel: "norm" });
    return { raster: r, inputs: [{ file: normsPath, columns: ["t", ...names] }] };
  } catch (err) {
    if (!(err instanceof PlotDataError) || !err.message.includes("not found")) throw err;
  }
  // gowdy run: total-variation series with the verdict annotated
  const table = readTable(seriesPath, SCHEMAS.gowdySeries);
  const t = column(table, "t");
  const names = ["tv_mu", "tv_v", "tv_w"];
  const verdict = textColumn(table, "verdict");
  linePlot(r, rect,
    names.map((n, i) => ({ xs: t, ys: column(table, n), label: n, color: PALETTE[i] })),
    { title: "total variation series", xlabel: "t", ylabel: "tv",
      annotation: `verdict: ${verdict[verdict.length - 1]}` });
  return { raster: r, inputs: [{ file: seriesPath, columns: ["t", ...names, "verdict"] }] };
}

function plotTraces(dir: string): Figure {
  const path = join(dir, "traces.csv");
  const table = readTable(path, SCHEMAS.traces);
  const t = column(table, "t");
  const names = textColumn(table, "entropy_name");
  const vals = column(table, "trace_norm");
  const groups = new Map<string, { xs: number[]; ys: number[] }>();
  for (let i = 0; i < t.length; i++) {
    if (!groups.has(names[i])) groups.set(names[i], { xs: [], ys: [] });
    const g = groups.get(names[i])!;
    g.xs.push(t[i]);
    g.ys.push(vals[i]);
  }
  const r = new Raster(640, 420);
  const rect: Rect = { x: 64, y: 40, w: 540, h: 320 };
  const series: Series[] = [...groups.entries()].map(([label, g], i) => ({
    xs: g.xs, ys: g.ys, label, color: PALETTE[i % PALETTE.length],
  }));
  linePlot(r, rect, series, { title: "entropy trace norms", xlabel: "t", ylabel: "trace norm" });
  return { raster: r, inputs: [{ file: path, columns: ["t", "entropy_name", "trace_norm"] }] };
}

function plotGowdyHeatmap(dir: string): Figure {
  const seriesPath = join(dir, "gowdy_series.csv");
  const seriesTable = readTable(seriesPath, SCHEMAS.gowdySeries);
  const times = column(seriesTable, "t");
  const fluid = snapshotFiles(dir, "gowdy_fluid");
  const geo = snapshotFiles(dir, "gowdy_geo");
  if (fluid.length === 0 || geo.length === 0) {
    throw new PlotDataError(
      `expected input files not found: ${join(dir, "gowdy_fluid_<step>.csv")} / gowdy_geo_<step>.csv`);
  }
  const inputs: InputRecord[] = [{ file: seriesPath, columns: ["t"] }];
  const muGrid: number[][] = [];
  const betaGrid: number[][] = [];
  const snapTimes: number[] = [];
  for (const { file, step } of fluid) {
    const table = readTable(file, SCHEMAS.gowdyFluid);
    muGrid.push(column(table, "mu"));
    snapTimes.push(step < times.length ? times[step] : times[times.length - 1]);
    inputs.push({ file, columns: ["x", "mu"] });
  }
  for (const { file } of geo) {
    const table = readTable(file, SCHEMAS.gowdyGeo);
    betaGrid.push(column(table, "beta"));
    inputs.push({ file, columns: ["x", "beta"] });
  }
  const xcol = column(readTable(fluid[0].file, SCHEMAS.gowdyFluid), "x");
  const r = new Raster(680, 600);
  const tickFor = (frac: number) => {
    const idx = Math.min(snapTimes.length - 1, Math.round(frac * (snapTimes.length - 1)));
    return { frac, label: fmt(snapTimes[idx]) };
  };
  const xticks = [tickFor(0), tickFor(0.5), tickFor(1)];
  const yticks = [
    { frac: 0, label: fmt(xcol[0]) },
    { frac: 1, label: fmt(xcol[xcol.length - 1]) },
  ];
  heatmapPanel(r, { x: 64, y: 40, w: 500, h: 220 }, muGrid, "mu(t,x)", xticks, yticks);
  heatmapPanel(r, { x: 64, y: 330, w: 500, h: 220 }, betaGrid, "beta(t,x)", xticks, yticks);
  r.textCenter(64 + 250, 592 - 18, "t (snapshot)");
  return { raster: r, inputs };
}

function plotConstraintDecay(dir: string): Figure {
  const path = join(dir, "gowdy_series.csv");
  const table = readTable(path, SCHEMAS.gowdySeries);
  const t = column(table, "t");
  const r = new Raster(640, 420);
  const rect: Rect = { x: 64, y: 40, w: 540, h: 320 };
  linePlot(r, rect, [
    { xs: t, ys: column(table, "max_r1"), label: "max_r1", color: PALETTE[0] },
    { xs: t, ys: column(table, "max_r2"), label: "max_r2", color: PALETTE[1] },
  ], { title: "constraint residuals", xlabel: "t", ylabel: "max residual", logy: true });
  return { raster: r, inputs: [{ file: path, columns: ["t", "max_r1", "max_r2"] }] };
}

export function render(kind: Kind, dir: string): Figure {
  switch (kind) {
    case "field":
      return plotField(dir);
    case "norms":
      return plotNorms(dir);
    case "traces":
      return plotTraces(dir);
    case "gowdy_heatmap":
      return plotGowdyHeatmap(dir);
    case "constraint_decay":
      return plotConstraintDecay(dir);
  }
}
