/**
 * CSV access against the documented run-directory schemas.  A file whose
 * header row does not match its schema exactly is rejected.
 */
import { existsSync, readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

export const SCHEMAS = {
  norms: ["t", "l1", "l2", "linf", "mass"],
  field1d: ["cell_id", "x", "u"],
  field2d: ["cell_id", "x", "y", "u"],
  traces: ["t", "entropy_name", "trace_norm"],
  distance: ["t", "l1_flux_distance"],
  gowdyFluid: ["cell", "x", "mu", "v", "tau", "S"],
  gowdyGeo: ["cell", "x", "a", "b", "c", "at", "ax", "bt", "bx", "ct", "cx", "alpha", "beta"],
  gowdySeries: ["t", "tv_mu", "tv_v", "tv_w", "sup_alpha_b", "sup_mu", "max_r1", "max_r2", "verdict"],
} as const;

export class PlotDataError extends Error {}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export function readTable(path: string, schema: readonly string[]): Table {
  if (!existsSync(path)) {
    throw new PlotDataError(`expected input file not found: ${path}`);
  }
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new PlotDataError(`empty file: ${path}`);
  }
  const header = lines[0].split(",");
  if (header.length !== schema.length || schema.some((c, i) => header[i] !== c)) {
    throw new PlotDataError(
      `schema mismatch in ${path}: expected header "${schema.join(",")}", got "${lines[0]}"`,
    );
  }
  const rows = lines.slice(1).map((l) => l.split(","));
  if (rows.length === 0) {
    throw new PlotDataError(`empty series (header only): ${path}`);
  }
  return { path, header, rows };
}

export function column(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new PlotDataError(`column ${name} missing from ${table.path}`);
  }
  return table.rows.map((r) => {
    const v = Number(r[idx]);
    if (Number.isNaN(v) && r[idx] !== "nan") {
      throw new PlotDataError(`non-numeric value "${r[idx]}" in column ${name} of ${table.path}`);
    }
    return v;
  });
}

export function textColumn(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new PlotDataError(`column ${name} missing from ${table.path}`);
  }
  return table.rows.map((r) => r[idx]);
}

/** Sorted list of snapshot files matching prefix_<step>.csv, with steps. */
export function snapshotFiles(dir: string, prefix: string): Array<{ file: string; step: number }> {
  const re = new RegExp(`^${prefix}_(\\d+)\\.csv$`);
  const out: Array<{ file: string; step: number }> = [];
  for (const name of readdirSync(dir)) {
    const m = re.exec(name);
    if (m) out.push({ file: join(dir, name), step: Number(m[1]) });
  }
  out.sort((a, b) => a.step - b.step);
  return out;
}
