// csv.ts - parsing and validation of benchmark result CSVs

import Papa from "papaparse";
import { z } from "zod";

/** The fixed header written by `grafite-bench suite`. */
export const BENCH_COLUMNS = [
  "filter",
  "dataset",
  "n",
  "bpk",
  "range_size",
  "corr_degree",
  "fpr",
  "ns_per_query",
  "construct_s",
  "seed",
] as const;

export type BenchColumn = (typeof BENCH_COLUMNS)[number];

const rowSchema = z.object({
  filter: z.string().min(1),
  dataset: z.string(),
  n: z.number().int().positive(),
  bpk: z.number().positive(),
  range_size: z.number().int().positive(),
  corr_degree: z.number().min(0).max(1).nullable(),
  fpr: z.number().min(0).max(1),
  ns_per_query: z.number().nonnegative(),
  construct_s: z.number().nonnegative(),
  seed: z.number().int(),
});

export type BenchRow = z.infer<typeof rowSchema>;

function toNumber(cell: string | undefined): number {
  if (cell === undefined || cell.trim() === "") return Number.NaN;
  return Number(cell);
}

/**
 * Parse one benchmark CSV into validated rows.
 *
 * Columns may appear in any order and extra columns are ignored, but every
 * bench column must be present. Throws with the source name and row number
 * on a malformed line or a value outside its domain. An empty corr_degree
 * cell means the row's workload was uncorrelated and parses as null.
 */
export function parseBenchCsv(text: string, source = "<csv>"): BenchRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${source}: malformed CSV: ${first.message}`);
  }
  const [header, ...lines] = parsed.data;
  if (!header || header.length === 0) {
    throw new Error(`${source}: empty CSV`);
  }
  const missing = BENCH_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`${source}: missing columns: ${missing.join(", ")}`);
  }
  if (lines.length === 0) {
    throw new Error(`${source}: no data rows`);
  }
  const at = new Map<BenchColumn, number>(
    BENCH_COLUMNS.map((c) => [c, header.indexOf(c)]),
  );
  const col = (cells: string[], name: BenchColumn) => cells[at.get(name)!];

  return lines.map((cells, i) => {
    const corr = col(cells, "corr_degree");
    const raw = {
      filter: col(cells, "filter") ?? "",
      dataset: col(cells, "dataset") ?? "",
      n: toNumber(col(cells, "n")),
      bpk: toNumber(col(cells, "bpk")),
      range_size: toNumber(col(cells, "range_size")),
      corr_degree:
        corr === undefined || corr.trim() === "" ? null : Number(corr),
      fpr: toNumber(col(cells, "fpr")),
      ns_per_query: toNumber(col(cells, "ns_per_query")),
      construct_s: toNumber(col(cells, "construct_s")),
      seed: toNumber(col(cells, "seed")),
    };
    const checked = rowSchema.safeParse(raw);
    if (!checked.success) {
      const issue = checked.error.issues[0];
      throw new Error(
        `${source}: row ${i + 2}: ${issue.path.join(".")}: ${issue.message}`,
      );
    }
    return checked.data;
  });
}
