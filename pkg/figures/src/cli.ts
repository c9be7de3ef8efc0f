#!/usr/bin/env node
/**
 * Figure rendering CLI.
 *
 *   render --spec FILE [--format png|svg]
 *   render-all DIR [--out DIR] [--format png|svg]
 *
 * PNG is the default output format. Exit codes: 0 success, 1 input error.
 */

import { renderSpecFile, ImageFormat } from "./render.js";
import { renderAll } from "./renderAll.js";

function parseFlags(argv: string[]): { positional: string[]; flags: Map<string, string> } {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined || value.startsWith("--")) {
        throw new Error(`flag ${arg} needs a value`);
      }
      flags.set(arg.slice(2), value);
      i += 1;
    } else {
      positional.push(arg);
    }
  }
  return { positional, flags };
}

function formatOf(flags: Map<string, string>): ImageFormat {
  const value = flags.get("format") ?? "png";
  if (value !== "png" && value !== "svg") {
    throw new Error(`--format must be png or svg, got ${value}`);
  }
  return value;
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    if (command === "render") {
      const { flags } = parseFlags(rest);
      const specPath = flags.get("spec");
      if (!specPath) throw new Error("render needs --spec FILE");
      const out = await renderSpecFile(specPath, formatOf(flags));
      console.log(`wrote ${out}`);
      return 0;
    }
    if (command === "render-all") {
      const { positional, flags } = parseFlags(rest);
      if (positional.length !== 1) throw new Error("render-all needs exactly one directory");
      const result = await renderAll(positional[0], flags.get("out"), formatOf(flags));
      for (const path of result.written) console.log(`wrote ${path}`);
      for (const file of result.skipped) console.log(`notice: skipped unrecognized ${file}`);
      for (const failure of result.failed) console.error(`notice: failed ${failure}`);
      console.log(`${result.written.length} figure(s) written`);
      return 0;
    }
    throw new Error(`unknown command ${command ?? "(none)"}; use render or render-all`);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
