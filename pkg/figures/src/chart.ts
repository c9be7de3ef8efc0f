/**
 * Hand-rolled SVG charts: line/multi-line, grouped histogram, grouped bar.
 *
 * Every chart embeds the exact numeric data it plots inside a
 * `<metadata id="figure-data">` element (JSON), so consumers and tests can
 * re-read the plotted series without rasterizing anything. The plot frame
 * carries its scale as data attributes, letting a reader invert pixel
 * coordinates back into data space.
 */

export interface Series {
  label: string;
  values: number[];
  color?: string;
  dash?: string;
}

export interface Baseline {
  value: number;
  label: string;
}

export interface ChartFrame {
  title: string;
  xLabel: string;
  yLabel: string;
  caption?: string;
}

export interface LineChartOptions extends ChartFrame {
  x: number[];
  series: Series[];
  baselines?: Baseline[];
}

export interface HistogramOptions extends ChartFrame {
  series: Series[];
  bins?: number;
}

export interface BarChartOptions extends ChartFrame {
  categories: string[];
  series: Series[];
}

const WIDTH = 720;
const HEIGHT = 440;
const MARGIN = { top: 48, right: 24, bottom: 72, left: 72 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;
const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f77f00", "#7b2cbf", "#118ab2"];

export class ChartError extends Error {}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  const abs = Math.abs(v);
  if (abs !== 0 && (abs >= 1e5 || abs < 1e-4)) return v.toExponential(2);
  return String(Number(v.toPrecision(6)));
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || Math.abs(max) || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) ticks.push(Number(v.toPrecision(12)));
  return ticks;
}

interface Scale {
  min: number;
  max: number;
  toPx(v: number): number;
}

function linearScale(min: number, max: number, pxFrom: number, pxTo: number): Scale {
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const f = (pxTo - pxFrom) / (max - min);
  return { min, max, toPx: (v: number) => pxFrom + (v - min) * f };
}

function pad(min: number, max: number, frac = 0.05): [number, number] {
  const span = max - min || Math.abs(max) || 1;
  return [min - span * frac, max + span * frac];
}

function color(series: Series, idx: number): string {
  return series.color ?? PALETTE[idx % PALETTE.length];
}

function frameParts(frame: ChartFrame, xScale: Scale, yScale: Scale): string[] {
  const parts: string[] = [];
  const bottom = MARGIN.top + PLOT_H;
  parts.push(
    `<g class="plot-frame" data-x-min="${xScale.min}" data-x-max="${xScale.max}" ` +
      `data-y-min="${yScale.min}" data-y-max="${yScale.max}" ` +
      `data-plot-x="${MARGIN.left}" data-plot-y="${MARGIN.top}" ` +
      `data-plot-w="${PLOT_W}" data-plot-h="${PLOT_H}">` +
      `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#333" stroke-width="1"/></g>`,
  );
  for (const t of niceTicks(yScale.min, yScale.max, 6)) {
    const y = yScale.toPx(t);
    parts.push(
      `<line x1="${MARGIN.left}" x2="${MARGIN.left + PLOT_W}" y1="${y.toFixed(2)}" y2="${y.toFixed(2)}" stroke="#ddd" stroke-width="0.5"/>`,
      `<text x="${MARGIN.left - 8}" y="${(y + 4).toFixed(2)}" text-anchor="end" font-size="11" fill="#333">${esc(fmt(t))}</text>`,
    );
  }
  for (const t of niceTicks(xScale.min, xScale.max, 8)) {
    const x = xScale.toPx(t);
    parts.push(
      `<line y1="${bottom}" y2="${bottom + 4}" x1="${x.toFixed(2)}" x2="${x.toFixed(2)}" stroke="#333"/>`,
      `<text x="${x.toFixed(2)}" y="${bottom + 18}" text-anchor="middle" font-size="11" fill="#333">${esc(fmt(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold" fill="#111">${esc(frame.title)}</text>`,
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${bottom + 38}" text-anchor="middle" font-size="12" fill="#111">${esc(frame.xLabel)}</text>`,
    `<text transform="rotate(-90 16 ${MARGIN.top + PLOT_H / 2})" x="16" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" font-size="12" fill="#111">${esc(frame.yLabel)}</text>`,
  );
  if (frame.caption) {
    parts.push(
      `<text class="caption" x="${MARGIN.left}" y="${HEIGHT - 10}" font-size="10" fill="#666">${esc(frame.caption)}</text>`,
    );
  }
  return parts;
}

function legend(series: Series[], extra: string[] = []): string[] {
  const entries = series.map((s, i) => ({ label: s.label, color: color(s, i), dash: s.dash }));
  const parts: string[] = [];
  let y = MARGIN.top + 10;
  const x = MARGIN.left + PLOT_W - 160;
  for (const e of entries) {
    parts.push(
      `<line x1="${x}" x2="${x + 22}" y1="${y}" y2="${y}" stroke="${e.color}" stroke-width="2"${e.dash ? ` stroke-dasharray="${e.dash}"` : ""}/>`,
      `<text x="${x + 28}" y="${y + 4}" font-size="11" fill="#333">${esc(e.label)}</text>`,
    );
    y += 16;
  }
  for (const note of extra) {
    parts.push(`<text x="${x}" y="${y + 4}" font-size="11" fill="#666">${esc(note)}</text>`);
    y += 16;
  }
  return parts;
}

function document(body: string[], data: unknown): string {
  const payload = JSON.stringify(data);
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<metadata id="figure-data">${esc(payload)}</metadata>`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    `</svg>`,
    ``,
  ].join("\n");
}

function checkSeries(series: Series[], length?: number): void {
  if (series.length === 0) throw new ChartError("no series to plot");
  for (const s of series) {
    if (s.values.length === 0) throw new ChartError(`series "${s.label}" is empty`);
    if (length !== undefined && s.values.length !== length) {
      throw new ChartError(
        `series "${s.label}" has ${s.values.length} values, expected ${length}`,
      );
    }
    for (const v of s.values) {
      if (!Number.isFinite(v)) throw new ChartError(`series "${s.label}" holds a non-finite value`);
    }
  }
}

export function buildLineChart(opts: LineChartOptions): string {
  checkSeries(opts.series, opts.x.length);
  if (opts.x.length === 0) throw new ChartError("no x values to plot");
  const yValues = opts.series.flatMap((s) => s.values).concat((opts.baselines ?? []).map((b) => b.value));
  const [yMin, yMax] = pad(Math.min(...yValues), Math.max(...yValues));
  const xScale = linearScale(Math.min(...opts.x), Math.max(...opts.x), MARGIN.left, MARGIN.left + PLOT_W);
  const yScale = linearScale(yMin, yMax, MARGIN.top + PLOT_H, MARGIN.top);
  const body = frameParts(opts, xScale, yScale);
  for (const [i, s] of opts.series.entries()) {
    const pts = s.values
      .map((v, k) => `${xScale.toPx(opts.x[k]).toFixed(4)},${yScale.toPx(v).toFixed(4)}`)
      .join(" ");
    body.push(
      `<polyline class="series" data-label="${esc(s.label)}" points="${pts}" fill="none" ` +
        `stroke="${color(s, i)}" stroke-width="1.8"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
    );
    if (s.values.length <= 40) {
      for (const [k, v] of s.values.entries()) {
        body.push(
          `<circle cx="${xScale.toPx(opts.x[k]).toFixed(4)}" cy="${yScale.toPx(v).toFixed(4)}" r="2.4" fill="${color(s, i)}"/>`,
        );
      }
    }
  }
  const notes: string[] = [];
  for (const b of opts.baselines ?? []) {
    const y = yScale.toPx(b.value);
    body.push(
      `<line x1="${MARGIN.left}" x2="${MARGIN.left + PLOT_W}" y1="${y.toFixed(2)}" y2="${y.toFixed(2)}" stroke="#888" stroke-width="1.2" stroke-dasharray="6,3"/>`,
    );
    notes.push(`${b.label} = ${fmt(b.value)}`);
  }
  body.push(...legend(opts.series, notes));
  return document(body, {
    kind: opts.series.length > 1 ? "multi-line" : "line",
    x: opts.x,
    series: opts.series.map((s) => ({ label: s.label, values: s.values })),
    baselines: opts.baselines ?? [],
  });
}

export interface BinnedSeries {
  label: string;
  counts: number[];
}

export function binValues(series: Series[], bins: number): { edges: number[]; binned: BinnedSeries[] } {
  const all = series.flatMap((s) => s.values);
  let lo = Math.min(...all);
  let hi = Math.max(...all);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const edges = Array.from({ length: bins + 1 }, (_, i) => lo + ((hi - lo) * i) / bins);
  const binned = series.map((s) => {
    const counts = new Array(bins).fill(0);
    for (const v of s.values) {
      let idx = Math.floor(((v - lo) / (hi - lo)) * bins);
      if (idx === bins) idx = bins - 1; // the max lands in the last bin
      counts[idx] += 1;
    }
    return { label: s.label, counts };
  });
  return { edges, binned };
}

export function buildHistogram(opts: HistogramOptions): string {
  checkSeries(opts.series);
  const bins = opts.bins ?? 10;
  if (bins < 1) throw new ChartError("bins must be >= 1");
  const { edges, binned } = binValues(opts.series, bins);
  const maxCount = Math.max(...binned.flatMap((b) => b.counts));
  const xScale = linearScale(edges[0], edges[edges.length - 1], MARGIN.left, MARGIN.left + PLOT_W);
  const yScale = linearScale(0, maxCount * 1.05 || 1, MARGIN.top + PLOT_H, MARGIN.top);
  const body = frameParts(opts, xScale, yScale);
  const groups = opts.series.length;
  for (let bin = 0; bin < bins; bin += 1) {
    const x0 = xScale.toPx(edges[bin]);
    const x1 = xScale.toPx(edges[bin + 1]);
    const slot = (x1 - x0) / groups;
    for (const [i, b] of binned.entries()) {
      const count = b.counts[bin];
      if (count === 0) continue;
      const top = yScale.toPx(count);
      const bottom = yScale.toPx(0);
      body.push(
        `<rect class="bin" data-label="${esc(b.label)}" data-bin="${bin}" data-count="${count}" ` +
          `x="${(x0 + i * slot + 1).toFixed(2)}" y="${top.toFixed(2)}" ` +
          `width="${Math.max(slot - 2, 1).toFixed(2)}" height="${(bottom - top).toFixed(2)}" ` +
          `fill="${color(opts.series[i], i)}" fill-opacity="0.85"/>`,
      );
    }
  }
  body.push(...legend(opts.series));
  return document(body, {
    kind: "histogram",
    binEdges: edges,
    series: opts.series.map((s, i) => ({
      label: s.label,
      values: s.values,
      counts: binned[i].counts,
    })),
  });
}

export function buildBarChart(opts: BarChartOptions): string {
  checkSeries(opts.series, opts.categories.length);
  const values = opts.series.flatMap((s) => s.values);
  const [rawMin, rawMax] = [Math.min(0, ...values), Math.max(...values)];
  const [yMin, yMax] = pad(rawMin, rawMax);
  const xScale = linearScale(0, opts.categories.length, MARGIN.left, MARGIN.left + PLOT_W);
  const yScale = linearScale(yMin, yMax, MARGIN.top + PLOT_H, MARGIN.top);
  const body: string[] = [];
  const bottom = MARGIN.top + PLOT_H;
  // frame without numeric x ticks: categories label the slots instead
  body.push(...frameParts({ ...opts, xLabel: opts.xLabel }, xScale, yScale).filter((p) => !p.includes(`y="${bottom + 18}"`)));
  for (const [k, cat] of opts.categories.entries()) {
    const mid = xScale.toPx(k + 0.5);
    body.push(
      `<text x="${mid.toFixed(2)}" y="${bottom + 18}" text-anchor="middle" font-size="11" fill="#333">${esc(cat)}</text>`,
    );
  }
  const groups = opts.series.length;
  for (const [k] of opts.categories.entries()) {
    const x0 = xScale.toPx(k + 0.12);
    const x1 = xScale.toPx(k + 0.88);
    const slot = (x1 - x0) / groups;
    for (const [i, s] of opts.series.entries()) {
      const v = s.values[k];
      const top = yScale.toPx(Math.max(v, 0));
      const base = yScale.toPx(Math.max(yMin, 0));
      body.push(
        `<rect class="bar" data-label="${esc(s.label)}" data-category="${esc(opts.categories[k])}" data-value="${v}" ` +
          `x="${(x0 + i * slot).toFixed(2)}" y="${top.toFixed(2)}" width="${Math.max(slot - 2, 1).toFixed(2)}" ` +
          `height="${Math.max(base - top, 0.5).toFixed(2)}" fill="${color(s, i)}" fill-opacity="0.9"/>`,
      );
    }
  }
  body.push(...legend(opts.series));
  return document(body, {
    kind: "bar",
    categories: opts.categories,
    series: opts.series.map((s) => ({ label: s.label, values: s.values })),
  });
}

/** Parse back the exact data a chart was drawn from (the A-series contract). */
export function extractFigureData(svg: string): unknown {
  const match = svg.match(/<metadata id="figure-data">([\s\S]*?)<\/metadata>/);
  if (!match) throw new ChartError("SVG carries no embedded figure data");
  const unescaped = match[1]
    .replace(/&quot;/g, '"')
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(unescaped);
}
