/* Figure assembly: one cell in, one SVG out.

   Per algorithm the curve is the median-realizing replicate (the run
   whose final iteration equals the summary's its_median and whose final
   value is at or below the target), drawn step-after on log-log axes.
   A circle marks (its_mean, target) with a horizontal bar spanning
   its_mean plus or minus its_std. Algorithms without a successful run
   are omitted. Output is a pure function of the CSV bytes. */

import * as fs from "node:fs";
import * as path from "node:path";
import {
  parseSummary,
  parseTrajectory,
  SummaryRow,
  TrajectoryPoint,
  CsvError,
} from "./csv";
import { LogScale, powerTicks, tickLabel, floorPow10, ceilPow10 } from "./scale";
import { el, text, fmt } from "./svg";

export const TARGET = 1e-9;

export interface FigureSpec {
  inDir: string;
  func: string;
  lToken: string;
  n: number;
  perDim: boolean;
}

export interface AlgoData {
  row: SummaryRow;
  points: TrajectoryPoint[];
}

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function cellTag(spec: FigureSpec): string {
  return `${spec.func}_L${spec.lToken}_n${spec.n}`;
}

export function summaryPath(spec: FigureSpec): string {
  return path.join(spec.inDir, `summary_${cellTag(spec)}.csv`);
}

export function trajectoryPath(spec: FigureSpec, algo: string, run: number): string {
  return path.join(spec.inDir, `${cellTag(spec)}_${algo}_run${run}.csv`);
}

function readText(p: string, what: string): string {
  try {
    return fs.readFileSync(p, "utf8");
  } catch {
    throw new Error(`missing ${what}: ${p}`);
  }
}

/* Locate each algorithm's median-realizing trajectory. Rows without a
   successful run carry no median and are skipped. */
export function loadCell(spec: FigureSpec): AlgoData[] {
  const sumPath = summaryPath(spec);
  if (!fs.existsSync(sumPath)) {
    throw new Error(`missing cell: ${sumPath}`);
  }
  const summary = parseSummary(fs.readFileSync(sumPath, "utf8"), sumPath);
  if (summary.length === 0) {
    throw new Error(`empty summary: ${sumPath}`);
  }
  for (let i = 0; i < summary.length; i++) {
    const r = summary[i];
    if (r.func !== spec.func || r.L !== spec.lToken || r.n !== spec.n) {
      throw new CsvError(sumPath, i + 2,
        `row is for cell ${r.func}_L${r.L}_n${r.n}, expected ${cellTag(spec)}`);
    }
  }
  const out: AlgoData[] = [];
  for (const row of summary) {
    if (row.itsMedian === null) continue;
    let points: TrajectoryPoint[] | null = null;
    for (let i = 0; i < row.runs; i++) {
      const p = trajectoryPath(spec, row.algo, i);
      const traj = parseTrajectory(readText(p, "trajectory"), p);
      if (traj.length === 0) {
        throw new Error(`empty trajectory: ${p}`);
      }
      const last = traj[traj.length - 1];
      if (last.iter === row.itsMedian && last.fval <= TARGET) {
        points = traj;
        break;
      }
    }
    if (points === null) {
      throw new Error(
        `no trajectory of ${row.algo} in ${spec.inDir} ends at the median ` +
        `iteration count ${row.itsMedian} with value <= ${TARGET}`);
    }
    out.push({ row, points });
  }
  if (out.length === 0) {
    throw new Error(`no algorithm in ${sumPath} has a successful run`);
  }
  return out;
}

const W = 960;
const H = 600;
const PLOT = { left: 70, right: 700, top: 40, bottom: 540 };

export function renderFigure(spec: FigureSpec, data: AlgoData[]): string {
  const div = spec.perDim ? spec.n : 1;
  const tx = (iter: number) => Math.max(iter, 1) / div;

  let xLoV = Infinity;
  let xHiV = 0;
  let yHiV = 0;
  for (const d of data) {
    xLoV = Math.min(xLoV, tx(d.points[0].iter));
    xHiV = Math.max(xHiV, tx(d.points[d.points.length - 1].iter));
    xHiV = Math.max(xHiV, (d.row.itsMean! + d.row.itsStd!) / div);
    for (const p of d.points) yHiV = Math.max(yHiV, p.fval);
  }
  const xLo = floorPow10(xLoV);
  let xHi = ceilPow10(xHiV);
  if (xHi <= xLo) xHi = xLo * 10;
  const yLo = TARGET;
  let yHi = ceilPow10(Math.max(yHiV, yLo * 10));
  if (yHi <= yLo) yHi = yLo * 10;

  const X = new LogScale(xLo, xHi, PLOT.left, PLOT.right);
  const Y = new LogScale(yLo, yHi, PLOT.bottom, PLOT.top);

  const parts: string[] = [];
  parts.push(el("rect", {
    x: "0", y: "0", width: String(W), height: String(H), fill: "#ffffff",
  }));

  const grid: string[] = [];
  const labels: string[] = [];
  for (const p of powerTicks(xLo, xHi)) {
    const x = fmt(X.map(Math.pow(10, p)));
    grid.push(el("line", {
      class: "grid", x1: x, y1: String(PLOT.top), x2: x, y2: String(PLOT.bottom),
      stroke: "#dddddd", "stroke-width": "1",
    }));
    labels.push(text({
      x, y: String(PLOT.bottom + 18), "text-anchor": "middle",
      "font-size": "12", fill: "#333333",
    }, tickLabel(p)));
  }
  for (const p of powerTicks(yLo, yHi)) {
    const y = fmt(Y.map(Math.pow(10, p)));
    grid.push(el("line", {
      class: "grid", x1: String(PLOT.left), y1: y, x2: String(PLOT.right), y2: y,
      stroke: "#dddddd", "stroke-width": "1",
    }));
    labels.push(text({
      x: String(PLOT.left - 8), y, dy: "4", "text-anchor": "end",
      "font-size": "12", fill: "#333333",
    }, tickLabel(p)));
  }
  parts.push(el("g", { class: "axes" }, [...grid, ...labels]));
  parts.push(el("rect", {
    x: String(PLOT.left), y: String(PLOT.top),
    width: String(PLOT.right - PLOT.left), height: String(PLOT.bottom - PLOT.top),
    fill: "none", stroke: "#333333", "stroke-width": "1",
  }));

  const lPart = spec.lToken === "na" ? "" : `  L=${spec.lToken}`;
  parts.push(text({
    x: String((PLOT.left + PLOT.right) / 2), y: "24", "text-anchor": "middle",
    "font-size": "15", fill: "#000000",
  }, `${spec.func}  n=${spec.n}${lPart}`));
  parts.push(text({
    x: String((PLOT.left + PLOT.right) / 2), y: String(PLOT.bottom + 40),
    "text-anchor": "middle", "font-size": "13", fill: "#000000",
  }, spec.perDim ? "#ITS / n" : "#ITS"));
  parts.push(text({
    x: "18", y: String((PLOT.top + PLOT.bottom) / 2), "text-anchor": "middle",
    "font-size": "13", fill: "#000000",
    transform: `rotate(-90 18 ${(PLOT.top + PLOT.bottom) / 2})`,
  }, "FVAL"));

  const curves: string[] = [];
  const markers: string[] = [];
  const legend: string[] = [];
  data.forEach((d, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = d.points;
    let dPath = `M ${fmt(X.map(tx(pts[0].iter)))} ${fmt(Y.map(pts[0].fval))}`;
    for (let k = 1; k < pts.length; k++) {
      dPath += ` H ${fmt(X.map(tx(pts[k].iter)))} V ${fmt(Y.map(pts[k].fval))}`;
    }
    curves.push(el("path", {
      class: "curve", "data-algo": d.row.algo, d: dPath,
      fill: "none", stroke: color, "stroke-width": "1.5",
    }));
    const mean = d.row.itsMean!;
    const std = d.row.itsStd!;
    const yT = fmt(Y.map(TARGET));
    markers.push(el("line", {
      class: "std-bar", "data-algo": d.row.algo,
      x1: fmt(X.map((mean - std) / div)), y1: yT,
      x2: fmt(X.map((mean + std) / div)), y2: yT,
      stroke: color, "stroke-width": "3",
    }));
    markers.push(el("circle", {
      class: "mean-marker", "data-algo": d.row.algo,
      cx: fmt(X.map(mean / div)), cy: yT, r: "4",
      fill: color, stroke: "#000000", "stroke-width": "0.5",
    }));
    const ly = 60 + 22 * i;
    legend.push(el("line", {
      x1: "715", y1: String(ly - 4), x2: "740", y2: String(ly - 4),
      stroke: color, "stroke-width": "2",
    }));
    legend.push(text({
      x: "746", y: String(ly), "font-size": "12", fill: "#000000",
    }, d.row.algo));
  });
  parts.push(el("g", { class: "curves" }, curves));
  parts.push(el("g", { class: "markers" }, markers));
  parts.push(el("g", { class: "legend" }, legend));

  return el("svg", {
    xmlns: "http://www.w3.org/2000/svg",
    width: String(W), height: String(H),
    viewBox: `0 0 ${W} ${H}`,
    "font-family": "monospace",
  }, parts) + "\n";
}

export function renderCell(spec: FigureSpec): string {
  return renderFigure(spec, loadCell(spec));
}
