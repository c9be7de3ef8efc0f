/**
 * Batch rendering for a directory of experiment outputs.
 *
 * Recognizes the standard experiment file names, pairs each CSV with its
 * metadata record (for the seed caption), renders one labeled figure per
 * recognized table and reports everything it skipped. Individual
 * failures never abort the batch.
 */

import { existsSync, mkdirSync, readdirSync, readFileSync, writeFileSync } from "fs";
import { join } from "path";

import { buildBarChart, buildLineChart, Series } from "./chart.js";
import { CsvTable, numericColumn, parseCsv, stringColumn } from "./csv.js";
import { buildFigureSvg, ImageFormat, svgToPng, withExtension } from "./render.js";
import { FigureSpec } from "./spec.js";

export interface BatchResult {
  written: string[];
  skipped: string[];
  failed: string[];
}

interface MetaInfo {
  seed?: number | null;
  version?: string;
}

function readMeta(dir: string, experiment: string): MetaInfo {
  const path = join(dir, `${experiment}.meta.json`);
  if (!existsSync(path)) return {};
  try {
    const meta = JSON.parse(readFileSync(path, "utf-8"));
    return { seed: meta.seed ?? null, version: meta.toolkit_version };
  } catch {
    return {};
  }
}

function caption(name: string, meta: MetaInfo): string {
  const parts = [name];
  if (meta.seed !== undefined && meta.seed !== null) parts.push(`seed ${meta.seed}`);
  if (meta.version) parts.push(`toolkit ${meta.version}`);
  return parts.join(" | ");
}

function spec(partial: Omit<FigureSpec, "out">, out: string): FigureSpec {
  return { ...partial, out };
}

/** example1.csv holds one row per model with per-node columns: transpose it. */
function example1Svg(table: CsvTable, cap: string): string {
  const nodeCols = table.columns.filter((c) => /^x_\d+$/.test(c));
  const models = stringColumn(table, "model");
  const series: Series[] = models.map((label, r) => ({
    label,
    values: nodeCols.map((c) => Number(table.rows[r][table.columns.indexOf(c)])),
  }));
  return buildBarChart({
    title: "Equilibrium opinions per node",
    xLabel: "node",
    yLabel: "equilibrium opinion",
    caption: cap,
    categories: nodeCols.map((c) => c.replace("x_", "")),
    series,
  });
}

/** homogeneous-sweep.csv stacks all graphs: one curve per graph plus the baseline. */
function homogeneousSvg(table: CsvTable, cap: string): string {
  const graphs = [...new Set(stringColumn(table, "graph"))];
  const betaAll = numericColumn(table, "beta0");
  const rhoAll = numericColumn(table, "rho_numeric");
  const graphCol = stringColumn(table, "graph");
  const x = [...new Set(betaAll)].sort((a, b) => a - b);
  const series: Series[] = graphs.map((g) => ({
    label: g,
    values: x.map((b) => {
      const idx = graphCol.findIndex((gc, i) => gc === g && betaAll[i] === b);
      return rhoAll[idx];
    }),
  }));
  const sigma = numericColumn(table, "sigma")[0];
  return buildLineChart({
    title: "Convergence rate vs memory weight (uniform susceptibility)",
    xLabel: "beta0",
    yLabel: "spectral radius",
    caption: cap,
    x,
    series,
    baselines: [{ value: sigma, label: "memoryless rate sigma" }],
  });
}

type Builder = (dir: string, file: string, cap: string) => string;

const CUSTOM: Record<string, Builder> = {
  "example1.csv": (dir, file, cap) => example1Svg(parseCsv(readFileSync(join(dir, file), "utf-8")), cap),
  "homogeneous-sweep.csv": (dir, file, cap) =>
    homogeneousSvg(parseCsv(readFileSync(join(dir, file), "utf-8")), cap),
};

const COLUMN_SPECS: Record<string, Omit<FigureSpec, "out" | "caption">> = {
  "example2.csv": {
    input: "example2.csv",
    kind: "line",
    x: "beta0",
    y: ["P"],
    title: "Polarization vs memory weight",
    xLabel: "beta0",
    yLabel: "polarization index P",
  },
  "example3.csv": {
    input: "example3.csv",
    kind: "multi-line",
    x: "t",
    y: ["mean_fj", "mean_fjmm", "mean_comparison"],
    title: "Network average opinion over time",
    xLabel: "t",
    yLabel: "average opinion",
  },
  "example3_final.csv": {
    input: "example3_final.csv",
    kind: "histogram",
    y: ["x_fj", "x_fjmm", "x_comparison"],
    title: "Final opinion distribution",
    xLabel: "opinion",
    yLabel: "number of nodes",
    bins: 10,
  },
  "fig2.csv": {
    input: "fig2.csv",
    kind: "multi-line",
    x: "beta0",
    y: ["rho_augmented", "rho_comparison"],
    title: "Stabilization by blending two unstable factors",
    xLabel: "beta0",
    yLabel: "spectral radius",
  },
  "heterogeneous-sweep.csv": {
    input: "heterogeneous-sweep.csv",
    kind: "multi-line",
    x: "beta0",
    y: ["rho_fjmm", "rho_comparison", "rho_fj"],
    title: "Convergence rate vs memory weight (stubborn subset)",
    xLabel: "beta0",
    yLabel: "spectral radius",
  },
};

function experimentOf(file: string): string {
  return file.replace(/\.csv$/, "").replace(/_final$/, "");
}

/** Render every recognized experiment CSV in ``dir``. */
export async function renderAll(
  dir: string,
  outDir?: string,
  format: ImageFormat = "png",
): Promise<BatchResult> {
  const target = outDir ?? dir;
  mkdirSync(target, { recursive: true });
  const result: BatchResult = { written: [], skipped: [], failed: [] };
  const files = readdirSync(dir).sort();
  for (const file of files) {
    if (!file.endsWith(".csv")) {
      if (!file.endsWith(".meta.json")) result.skipped.push(file);
      continue;
    }
    const cap = caption(experimentOf(file), readMeta(dir, experimentOf(file)));
    const out = withExtension(join(target, file.replace(/\.csv$/, "")), format);
    try {
      let svg: string;
      if (file in CUSTOM) {
        svg = CUSTOM[file](dir, file, cap);
      } else if (file in COLUMN_SPECS) {
        svg = buildFigureSvg({ ...COLUMN_SPECS[file], caption: cap, out }, dir);
      } else {
        result.skipped.push(file);
        continue;
      }
      if (format === "svg") {
        writeFileSync(out, svg, "utf-8");
      } else {
        writeFileSync(out, await svgToPng(svg));
      }
      result.written.push(out);
    } catch (err) {
      result.failed.push(`${file}: ${(err as Error).message}`);
    }
  }
  return result;
}
