export { BENCH_COLUMNS, parseBenchCsv, type BenchRow } from "./csv.js";
export {
  FIGURE_KINDS,
  FPR_FLOOR,
  figureData,
  type FigureKind,
  type FigureSpec,
  type Panel,
  type Point,
  type Series,
} from "./figure.js";
export { renderFigure, type RenderOptions } from "./svg.js";
export { runCli } from "./cli.js";
