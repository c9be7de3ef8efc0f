/**
 * User-facing figure specification: which CSV, which columns, what kind
 * of chart, where to write it.
 */

import { readFileSync } from "fs";

export type FigureKind = "line" | "multi-line" | "histogram" | "bar";

export interface FigureSpec {
  /** Path of the input CSV (relative paths resolve against the spec file). */
  input: string;
  kind: FigureKind;
  /** x column; required for line/multi-line/bar. */
  x?: string;
  /** y / value columns; at least one. */
  y: string[];
  title: string;
  xLabel: string;
  yLabel: string;
  /** Output image path; extension is replaced to match the format. */
  out: string;
  /** Histogram bin count (default 10). */
  bins?: number;
  /** Extra caption text (seeds, provenance). */
  caption?: string;
  /** Horizontal reference lines. */
  baselines?: { value: number; label: string }[];
}

export class SpecError extends Error {}

const KINDS: FigureKind[] = ["line", "multi-line", "histogram", "bar"];

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) throw new SpecError("spec must be a JSON object");
  const spec = raw as Record<string, unknown>;
  for (const key of ["input", "kind", "title", "xLabel", "yLabel", "out"]) {
    if (typeof spec[key] !== "string" || (spec[key] as string).length === 0) {
      throw new SpecError(`spec field "${key}" must be a non-empty string`);
    }
  }
  if (!KINDS.includes(spec.kind as FigureKind)) {
    throw new SpecError(`spec kind must be one of ${KINDS.join(", ")}, got "${spec.kind}"`);
  }
  if (!Array.isArray(spec.y) || spec.y.length === 0 || spec.y.some((c) => typeof c !== "string")) {
    throw new SpecError('spec field "y" must be a non-empty array of column names');
  }
  const kind = spec.kind as FigureKind;
  if (kind !== "histogram" && typeof spec.x !== "string") {
    throw new SpecError(`spec kind "${kind}" requires an "x" column`);
  }
  return spec as unknown as FigureSpec;
}

export function loadSpec(path: string): FigureSpec {
  let parsed: unknown;
  try {
    parsed = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new SpecError(`cannot read spec ${path}: ${(err as Error).message}`);
  }
  return validateSpec(parsed);
}
