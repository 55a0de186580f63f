/**
 * Deterministic SVG line figures: one curve per scenario, stable styling.
 *
 * No timestamps, no randomness; identical input yields identical bytes.
 * Curve colors come from a hash of the scenario name so legends keep their
 * colors when sweeps are regenerated with different scenario orderings.
 */

import { ContractError, SweepRow } from "./contract";

export interface FigureKind {
  /** metric column plotted on the y axis */
  y: string;
  /** axis column value every row must carry */
  axis: string;
  title: string;
}

export const KINDS: Record<string, FigureKind> = {
  cop_vs_zeta: { y: "cop", axis: "zeta", title: "covertness outage vs detection threshold" },
  suc_vs_power: { y: "p_suc", axis: "p_a_dbm", title: "success probability vs transmit power" },
};

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 190, top: 42, bottom: 56 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function scenarioColor(name: string): string {
  return PALETTE[fnv1a(name) % PALETTE.length];
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 10 : norm >= 2 ? 5 : norm >= 1 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(t);
  }
  return ticks;
}

function fmt(x: number): string {
  if (x === 0) return "0";
  const abs = Math.abs(x);
  if (abs >= 1e4 || abs < 1e-3) return x.toExponential(1);
  return String(parseFloat(x.toPrecision(6)));
}

function px(x: number): string {
  return x.toFixed(2);
}

interface Series {
  name: string;
  points: Array<{ x: number; y: number }>;
}

function collectSeries(rows: SweepRow[], kind: FigureKind): Series[] {
  const order: string[] = [];
  const byName = new Map<string, Series>();
  for (const row of rows) {
    if (row.axis !== kind.axis) {
      throw new ContractError(
        `axis column is '${row.axis}' but kind plots '${kind.axis}'; refusing to guess`,
      );
    }
    let series = byName.get(row.scenario);
    if (!series) {
      series = { name: row.scenario, points: [] };
      byName.set(row.scenario, series);
      order.push(row.scenario);
    }
    series.points.push({ x: row.value, y: row.metrics[kind.y] });
  }
  return order.map((name) => byName.get(name)!);
}

export function renderSvg(rows: SweepRow[], kind: FigureKind, logY: boolean): string {
  const series = collectSeries(rows, kind);
  const plotted = series
    .map((s) => ({ ...s, points: logY ? s.points.filter((p) => p.y > 0) : s.points }))
    .filter((s) => s.points.length > 0);

  const xs = plotted.flatMap((s) => s.points.map((p) => p.x));
  const ys = plotted.flatMap((s) => (logY ? s.points.map((p) => Math.log10(p.y)) : s.points.map((p) => p.y)));

  let x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...ys), y1 = Math.max(...ys);
  if (xs.length === 0) {
    [x0, x1, y0, y1] = [0, 1, 0, 1];
  }
  if (x1 === x0) [x0, x1] = [x0 - 1, x1 + 1];
  if (y1 === y0) [y0, y1] = [y0 - 1, y1 + 1];
  const padY = 0.05 * (y1 - y0);
  y0 -= padY;
  y1 += padY;

  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * innerW;
  const sy = (y: number) => MARGIN.top + innerH - ((y - y0) / (y1 - y0)) * innerH;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  out.push(
    `<text x="${MARGIN.left}" y="24" font-family="sans-serif" font-size="15" fill="#222">${kind.title}</text>`,
  );

  // frame
  const frame = `M ${px(MARGIN.left)} ${px(MARGIN.top)} H ${px(MARGIN.left + innerW)} V ${px(
    MARGIN.top + innerH,
  )} H ${px(MARGIN.left)} Z`;
  out.push(`<path d="${frame}" fill="none" stroke="#444" stroke-width="1"/>`);

  // ticks and grid
  for (const t of niceTicks(x0, x1, 6)) {
    const gx = sx(t);
    out.push(
      `<line x1="${px(gx)}" y1="${px(MARGIN.top)}" x2="${px(gx)}" y2="${px(MARGIN.top + innerH)}" stroke="#ddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${px(gx)}" y="${px(MARGIN.top + innerH + 18)}" font-family="sans-serif" font-size="11" fill="#333" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of niceTicks(y0, y1, 6)) {
    const gy = sy(t);
    const label = logY ? `1e${fmt(t)}` : fmt(t);
    out.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(gy)}" x2="${px(MARGIN.left + innerW)}" y2="${px(gy)}" stroke="#ddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${px(MARGIN.left - 6)}" y="${px(gy + 4)}" font-family="sans-serif" font-size="11" fill="#333" text-anchor="end">${label}</text>`,
    );
  }

  // axis labels use the literal column names from the contract
  out.push(
    `<text x="${px(MARGIN.left + innerW / 2)}" y="${HEIGHT - 14}" font-family="sans-serif" font-size="13" fill="#222" text-anchor="middle">${kind.axis}</text>`,
  );
  out.push(
    `<text x="20" y="${px(MARGIN.top + innerH / 2)}" font-family="sans-serif" font-size="13" fill="#222" text-anchor="middle" transform="rotate(-90 20 ${px(MARGIN.top + innerH / 2)})">${logY ? `${kind.y} (log)` : kind.y}</text>`,
  );

  if (plotted.length === 0) {
    out.push(
      `<text x="${px(MARGIN.left + innerW / 2)}" y="${px(MARGIN.top + innerH / 2)}" font-family="sans-serif" font-size="13" fill="#777" text-anchor="middle">no data</text>`,
    );
  }

  for (const s of plotted) {
    const color = scenarioColor(s.name);
    const points = s.points
      .map((p) => `${px(sx(p.x))},${px(sy(logY ? Math.log10(p.y) : p.y))}`)
      .join(" ");
    out.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
  }

  // legend, one entry per plotted scenario, in first-appearance order
  let ly = MARGIN.top + 8;
  const lx = MARGIN.left + innerW + 14;
  for (const s of plotted) {
    const color = scenarioColor(s.name);
    out.push(
      `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 22)}" y2="${px(ly)}" stroke="${color}" stroke-width="1.8"/>`,
    );
    out.push(
      `<text x="${px(lx + 28)}" y="${px(ly + 4)}" font-family="sans-serif" font-size="12" fill="#222">${s.name}</text>`,
    );
    ly += 20;
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
