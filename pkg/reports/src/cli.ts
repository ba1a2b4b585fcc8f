// cli.ts - argument parsing and the read-csv -> build-figure -> write-svg pipeline

import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { parseBenchCsv, type BenchRow } from "./csv.js";
import { FIGURE_KINDS, figureData, type FigureKind } from "./figure.js";
import { renderFigure } from "./svg.js";

/**
 * Run the report CLI against an argv slice (without the node/script prefix).
 * Returns the process exit code instead of exiting, so tests can call it.
 */
export async function runCli(argv: string[]): Promise<number> {
  try {
    const args = await yargs(argv)
      .option("csv", {
        type: "string",
        array: true,
        demandOption: true,
        describe: "benchmark CSV file(s) to read",
      })
      .option("kind", {
        choices: FIGURE_KINDS,
        demandOption: true,
        describe: "which figure to produce",
      })
      .option("out", {
        type: "string",
        demandOption: true,
        describe: "output SVG path",
      })
      .strict()
      .exitProcess(false)
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parse();

    const rows: BenchRow[] = args.csv.flatMap((path) =>
      parseBenchCsv(readFileSync(path, "utf8"), path),
    );
    const panels = figureData(rows, args.kind as FigureKind);
    writeFileSync(args.out, renderFigure(panels));
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    const msg = err instanceof Error ? err.message : String(err);
    console.error(`error: ${msg}`);
    return 1;
  }
}
