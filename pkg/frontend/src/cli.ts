#!/usr/bin/env node
/**
 * plot --in <run-dir> --kind <kind> --out <file.png>
 *
 * Renders one figure from a curvedflux run directory and writes a sidecar
 * JSON (<out basename>.json) recording the exact input files and columns.
 * Never writes into the run directory.
 */
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { PlotDataError } from "./csv";
import { encodePng } from "./png";
import { Figure, KINDS, Kind, render } from "./plots";

interface Args {
  inDir: string;
  kind: Kind;
  out: string;
}

function usage(): string {
  return `usage: plot --in <run-dir> --kind <${KINDS.join("|")}> --out <file.png>`;
}

export function parseArgs(argv: string[]): Args {
  const values = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!["--in", "--kind", "--out"].includes(flag) || value === undefined) {
      throw new Error(usage());
    }
    values.set(flag, value);
  }
  const inDir = values.get("--in");
  const kind = values.get("--kind");
  const out = values.get("--out");
  if (!inDir || !kind || !out) {
    throw new Error(usage());
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown plot kind "${kind}"; known: ${KINDS.join(", ")}`);
  }
  return { inDir, kind: kind as Kind, out };
}

export function writeFigure(fig: Figure, args: Args): void {
  const png = encodePng(fig.raster.width, fig.raster.height, fig.raster.data);
  const outDir = dirname(args.out);
  if (outDir) mkdirSync(outDir, { recursive: true });
  writeFileSync(args.out, png);
  const sidecar = {
    kind: args.kind,
    input_dir: args.inDir,
    inputs: fig.inputs,
    output: args.out,
    size: [fig.raster.width, fig.raster.height],
  };
  writeFileSync(args.out.replace(/\.png$/i, "") + ".json",
    JSON.stringify(sidecar, null, 2) + "\n");
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const fig = render(args.kind, args.inDir);
    writeFigure(fig, args);
  } catch (err) {
    if (err instanceof PlotDataError) {
      console.error(`plot error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${args.out}`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
