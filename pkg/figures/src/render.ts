/**
 * Turn a figure spec into an image file.
 *
 * The chart is always built as SVG; PNG output (the default format)
 * rasterizes that SVG. Rendering is a pure function of the input files,
 * so identical inputs produce identical bytes.
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import { dirname, isAbsolute, join } from "path";

import {
  buildBarChart,
  buildHistogram,
  buildLineChart,
  Series,
} from "./chart.js";
import { numericColumn, parseCsv } from "./csv.js";
import { FigureSpec } from "./spec.js";

export type ImageFormat = "png" | "svg";

export function buildFigureSvg(spec: FigureSpec, baseDir = "."): string {
  const csvPath = isAbsolute(spec.input) ? spec.input : join(baseDir, spec.input);
  const table = parseCsv(readFileSync(csvPath, "utf-8"));
  const series: Series[] = spec.y.map((name) => ({
    label: name,
    values: numericColumn(table, name),
  }));
  const frame = {
    title: spec.title,
    xLabel: spec.xLabel,
    yLabel: spec.yLabel,
    caption: spec.caption,
  };
  switch (spec.kind) {
    case "line":
    case "multi-line":
      return buildLineChart({
        ...frame,
        x: numericColumn(table, spec.x as string),
        series,
        baselines: spec.baselines,
      });
    case "histogram":
      return buildHistogram({ ...frame, series, bins: spec.bins });
    case "bar": {
      const idx = table.columns.indexOf(spec.x as string);
      if (idx < 0) {
        throw new Error(`column "${spec.x}" not found; available: ${table.columns.join(", ")}`);
      }
      return buildBarChart({
        ...frame,
        categories: table.rows.map((r) => r[idx]),
        series,
      });
    }
  }
}

export function withExtension(path: string, format: ImageFormat): string {
  return path.replace(/\.(svg|png)$/i, "") + "." + format;
}

export async function svgToPng(svg: string): Promise<Buffer> {
  const { Resvg } = await import("@resvg/resvg-js");
  return new Resvg(svg, { font: { loadSystemFonts: true } }).render().asPng();
}

/** Render one spec; returns the written image path. */
export async function render(
  spec: FigureSpec,
  format: ImageFormat = "png",
  baseDir = ".",
): Promise<string> {
  const svg = buildFigureSvg(spec, baseDir);
  const outBase = isAbsolute(spec.out) ? spec.out : join(baseDir, spec.out);
  const out = withExtension(outBase, format);
  mkdirSync(dirname(out), { recursive: true });
  if (format === "svg") {
    writeFileSync(out, svg, "utf-8");
  } else {
    writeFileSync(out, await svgToPng(svg));
  }
  return out;
}

/** Render a spec loaded from a JSON file (paths resolve against it). */
export async function renderSpecFile(path: string, format: ImageFormat = "png"): Promise<string> {
  const { loadSpec } = await import("./spec.js");
  return render(loadSpec(path), format, dirname(path));
}
