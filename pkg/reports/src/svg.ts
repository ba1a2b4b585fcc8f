// svg.ts - deterministic SVG rendering of figure panels (no DOM, no canvas)

import { scaleLinear } from "d3-scale";
import type { AxisScale, Panel, Series } from "./figure.js";

export interface RenderOptions {
  width?: number;
  plotHeight?: number;
}

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

const MARGIN = { top: 48, right: 22, bottom: 52, left: 80 };

// fixed two-decimal coordinates keep the output byte-stable
const px = (v: number): string => {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtTick(v: number, scale: AxisScale): string {
  if (scale === "log") {
    const e = Math.round(Math.log10(v));
    return e >= 0 && e <= 3 ? String(v) : `1e${e}`;
  }
  return String(parseFloat(v.toPrecision(12)));
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const first = Math.ceil(Math.log10(lo) - 1e-9);
  const last = Math.floor(Math.log10(hi) + 1e-9);
  for (let e = first; e <= last; e++) out.push(Math.pow(10, e));
  return out;
}

interface Axis {
  lo: number;
  hi: number;
  scale: AxisScale;
  ticks: number[];
}

function makeAxis(values: number[], scale: AxisScale, floor?: number): Axis {
  let [lo, hi] = extent(values);
  if (scale === "log") {
    if (floor !== undefined) {
      lo = floor;
      hi = Math.max(hi, floor);
    } else if (lo <= 0) {
      throw new Error(
        `log scale cannot render value ${lo}; data must be positive`,
      );
    }
    // align to whole decades so the grid reads cleanly
    lo = Math.pow(10, Math.floor(Math.log10(lo) + 1e-9));
    hi = Math.pow(10, Math.ceil(Math.log10(hi) - 1e-9));
    if (hi <= lo) hi = lo * 10;
    return { lo, hi, scale, ticks: decadeTicks(lo, hi) };
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const nice = scaleLinear().domain([lo, hi]).nice();
  const [nlo, nhi] = nice.domain() as [number, number];
  return { lo: nlo, hi: nhi, scale, ticks: nice.ticks(6) };
}

function project(axis: Axis, v: number, from: number, to: number): number {
  const f =
    axis.scale === "log"
      ? (Math.log10(v) - Math.log10(axis.lo)) /
        (Math.log10(axis.hi) - Math.log10(axis.lo))
      : (v - axis.lo) / (axis.hi - axis.lo);
  return from + f * (to - from);
}

function renderPanel(
  panel: Panel,
  top: number,
  width: number,
  plotHeight: number,
): string {
  const left = MARGIN.left;
  const right = width - MARGIN.right;
  const plotTop = top + MARGIN.top;
  const plotBottom = plotTop + plotHeight;

  const xs = panel.series.flatMap((s) => s.points.map((p) => p.x));
  const rawYs = panel.series.flatMap((s) => s.points.map((p) => p.y));
  if (xs.length === 0) {
    throw new Error(`panel "${panel.title}" has no points`);
  }
  const floor = panel.yScale === "log" ? panel.yFloor : undefined;
  const clamp = (y: number) => (floor !== undefined ? Math.max(y, floor) : y);
  const xAxis = makeAxis(xs, panel.xScale);
  const yAxis = makeAxis(rawYs.map(clamp), panel.yScale, floor);

  const X = (v: number) => project(xAxis, v, left, right);
  const Y = (v: number) => project(yAxis, clamp(v), plotBottom, plotTop);

  const parts: string[] = [];
  parts.push(
    `<text x="${px(left)}" y="${px(top + 22)}" class="title" ` +
      `font-size="14" font-weight="bold">${esc(panel.title)}</text>`,
  );

  // grid and ticks
  for (const t of xAxis.ticks) {
    const x = px(X(t));
    parts.push(
      `<line x1="${x}" y1="${px(plotTop)}" x2="${x}" y2="${px(plotBottom)}" stroke="#e0e0e0"/>`,
      `<text x="${x}" y="${px(plotBottom + 18)}" text-anchor="middle" font-size="11">${esc(fmtTick(t, xAxis.scale))}</text>`,
    );
  }
  for (const t of yAxis.ticks) {
    const y = px(Y(t));
    parts.push(
      `<line x1="${px(left)}" y1="${y}" x2="${px(right)}" y2="${y}" stroke="#e0e0e0"/>`,
      `<text x="${px(left - 8)}" y="${px(Y(t) + 4)}" text-anchor="end" font-size="11">${esc(fmtTick(t, yAxis.scale))}</text>`,
    );
  }

  // frame and axis labels
  parts.push(
    `<rect x="${px(left)}" y="${px(plotTop)}" width="${px(right - left)}" height="${px(plotHeight)}" fill="none" stroke="#333"/>`,
    `<text x="${px((left + right) / 2)}" y="${px(plotBottom + 38)}" text-anchor="middle" font-size="12">${esc(panel.xLabel)}</text>`,
    `<text x="${px(left - 58)}" y="${px((plotTop + plotBottom) / 2)}" text-anchor="middle" font-size="12" transform="rotate(-90 ${px(left - 58)} ${px((plotTop + plotBottom) / 2)})">${esc(panel.yLabel)}</text>`,
  );

  // floor line plus annotation, only when something actually sits on it
  let flooredCount = 0;
  if (floor !== undefined) {
    flooredCount = rawYs.filter((y) => y < floor).length;
    if (flooredCount > 0) {
      const y = px(Y(floor));
      parts.push(
        `<line x1="${px(left)}" y1="${y}" x2="${px(right)}" y2="${y}" stroke="#999" stroke-dasharray="5 3"/>`,
        `<text x="${px(left + 6)}" y="${px(Y(floor) - 5)}" font-size="10" fill="#555" class="floor-note">` +
          `${flooredCount} value${flooredCount === 1 ? "" : "s"} at or below the ${fmtTick(floor, "log")} floor</text>`,
      );
    }
  }

  // series lines, points, legend
  panel.series.forEach((series: Series, idx: number) => {
    const color = PALETTE[idx % PALETTE.length];
    if (series.points.length > 1) {
      const path = series.points
        .map((p, i) => `${i === 0 ? "M" : "L"}${px(X(p.x))},${px(Y(p.y))}`)
        .join(" ");
      parts.push(
        `<path class="series" data-label="${esc(series.label)}" d="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
      );
    }
    for (const p of series.points) {
      const onFloor = floor !== undefined && p.y < floor;
      parts.push(
        `<circle class="pt${onFloor ? " floored" : ""}" cx="${px(X(p.x))}" cy="${px(Y(p.y))}" r="3" ` +
          (onFloor
            ? `fill="#ffffff" stroke="${color}" stroke-width="1.5"/>`
            : `fill="${color}"/>`),
      );
    }
    const ly = plotTop + 14 + idx * 16;
    parts.push(
      `<line x1="${px(right - 150)}" y1="${px(ly)}" x2="${px(right - 128)}" y2="${px(ly)}" stroke="${color}" stroke-width="1.8"/>`,
      `<text class="legend" x="${px(right - 122)}" y="${px(ly + 4)}" font-size="11">${esc(series.label)}</text>`,
    );
  });

  return parts.join("\n");
}

/**
 * Render panels stacked into one standalone SVG document. Pure string
 * building: identical panels yield byte-identical output.
 */
export function renderFigure(panels: Panel[], opts: RenderOptions = {}): string {
  if (panels.length === 0) {
    throw new Error("nothing to render: no panels");
  }
  const width = opts.width ?? 720;
  const plotHeight = opts.plotHeight ?? 240;
  const panelHeight = plotHeight + MARGIN.top + MARGIN.bottom;
  const height = panels.length * panelHeight;
  const body = panels
    .map((p, i) => renderPanel(p, i * panelHeight, width, plotHeight))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>\n` +
    `${body}\n</svg>\n`
  );
}
