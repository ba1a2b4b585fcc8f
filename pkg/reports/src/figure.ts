// figure.ts - turning benchmark rows into plottable panel/series structures

import type { BenchRow } from "./csv.js";

export const FIGURE_KINDS = ["fpr_vs_corr", "fpr_vs_bpk", "time_vs_n"] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  csvPaths: string[];
  kind: FigureKind;
  out: string;
}

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  points: Point[];
}

export type AxisScale = "linear" | "log";

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: AxisScale;
  yScale: AxisScale;
  /** Log panels with a floor draw smaller values on the floor line,
   * annotated, instead of failing; used for FPR axes where exact zeros
   * cannot appear on a log scale. */
  yFloor?: number;
  series: Series[];
}

export const FPR_FLOOR = 1e-7;

/** Group rows on x, average y within each group, sort by x. Multiple cells
 * landing on one x (several budgets, repeated runs) collapse to their mean. */
function meanPoints(
  rows: BenchRow[],
  x: (r: BenchRow) => number,
  y: (r: BenchRow) => number,
): Point[] {
  const acc = new Map<number, { sum: number; count: number }>();
  for (const row of rows) {
    const key = x(row);
    const slot = acc.get(key) ?? { sum: 0, count: 0 };
    slot.sum += y(row);
    slot.count += 1;
    acc.set(key, slot);
  }
  return [...acc.entries()]
    .map(([xv, { sum, count }]) => ({ x: xv, y: sum / count }))
    .sort((a, b) => a.x - b.x);
}

function groupBy(
  rows: BenchRow[],
  key: (r: BenchRow) => string,
): Map<string, BenchRow[]> {
  const groups = new Map<string, BenchRow[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}

function toSeries(
  groups: Map<string, BenchRow[]>,
  x: (r: BenchRow) => number,
  y: (r: BenchRow) => number,
): Series[] {
  return [...groups.entries()]
    .map(([label, rows]) => ({ label, points: meanPoints(rows, x, y) }))
    .sort((a, b) => a.label.localeCompare(b.label));
}

/**
 * Select and aggregate rows for a figure kind. Pure: the same rows always
 * produce the same panels. Throws when the selection comes up empty.
 */
export function figureData(rows: BenchRow[], kind: FigureKind): Panel[] {
  if (rows.length === 0) {
    throw new Error("empty selection: no data rows");
  }

  if (kind === "fpr_vs_corr") {
    const correlated = rows.filter((r) => r.corr_degree !== null);
    if (correlated.length === 0) {
      throw new Error(
        "empty selection: no rows carry a correlation degree " +
          "(fpr_vs_corr needs correlated workload cells)",
      );
    }
    const byFilter = groupBy(correlated, (r) => r.filter);
    return [
      {
        title: "False positive rate vs correlation degree",
        xLabel: "correlation degree",
        yLabel: "false positive rate",
        xScale: "linear",
        yScale: "log",
        yFloor: FPR_FLOOR,
        series: toSeries(byFilter, (r) => r.corr_degree!, (r) => r.fpr),
      },
      {
        title: "Query time vs correlation degree",
        xLabel: "correlation degree",
        yLabel: "ns / query",
        xScale: "linear",
        yScale: "linear",
        series: toSeries(byFilter, (r) => r.corr_degree!, (r) => r.ns_per_query),
      },
    ];
  }

  if (kind === "fpr_vs_bpk") {
    // budgets sweep uniform workloads; correlated cells answer a different
    // question and would silently mix regimes if blended in
    const uncorrelated = rows.filter((r) => r.corr_degree === null);
    if (uncorrelated.length === 0) {
      throw new Error(
        "empty selection: no uncorrelated rows (fpr_vs_bpk plots the " +
          "uniform-workload sweep)",
      );
    }
    const groups = groupBy(
      uncorrelated,
      (r) => `${r.filter} ell=${r.range_size}`,
    );
    return [
      {
        title: "False positive rate vs space budget",
        xLabel: "bits per key",
        yLabel: "false positive rate",
        xScale: "linear",
        yScale: "log",
        yFloor: FPR_FLOOR,
        series: toSeries(groups, (r) => r.bpk, (r) => r.fpr),
      },
    ];
  }

  // time_vs_n: construction cost against the key count, any workload
  const byFilter = groupBy(rows, (r) => r.filter);
  return [
    {
      title: "Construction time vs number of keys",
      xLabel: "keys",
      yLabel: "seconds",
      xScale: "log",
      yScale: "log",
      series: toSeries(byFilter, (r) => r.n, (r) => r.construct_s),
    },
  ];
}
