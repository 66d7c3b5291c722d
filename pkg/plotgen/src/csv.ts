/* Parsers for the two CSV shapes the harness writes. Every parse error
   names the offending file and 1-based line. */

export const SUMMARY_HEADER =
  "func,L,n,algo,runs,success,its_median,its_mean,its_std,median_seed,evals_mean";
export const TRAJECTORY_HEADER = "iter,fval,sigma";

export interface SummaryRow {
  func: string;
  L: string;
  n: number;
  algo: string;
  runs: number;
  success: number;
  itsMedian: number | null;
  itsMean: number | null;
  itsStd: number | null;
  medianSeed: number | null;
  evalsMean: number | null;
}

export interface TrajectoryPoint {
  iter: number;
  fval: number;
  sigma: number;
}

export class CsvError extends Error {
  constructor(file: string, line: number, detail: string) {
    super(`${file}:${line}: ${detail}`);
    this.name = "CsvError";
  }
}

function rows(text: string): string[] {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  return lines;
}

function intField(file: string, line: number, name: string, raw: string): number {
  if (!/^-?\d+$/.test(raw)) {
    throw new CsvError(file, line, `field ${name}: expected an integer, got "${raw}"`);
  }
  return parseInt(raw, 10);
}

function floatField(file: string, line: number, name: string, raw: string): number {
  const v = Number(raw);
  if (raw === "" || !Number.isFinite(v)) {
    throw new CsvError(file, line, `field ${name}: expected a finite number, got "${raw}"`);
  }
  return v;
}

function optInt(file: string, line: number, name: string, raw: string): number | null {
  return raw === "na" ? null : intField(file, line, name, raw);
}

function optFloat(file: string, line: number, name: string, raw: string): number | null {
  return raw === "na" ? null : floatField(file, line, name, raw);
}

export function parseSummary(text: string, file: string): SummaryRow[] {
  const lines = rows(text);
  if (lines.length === 0 || lines[0] !== SUMMARY_HEADER) {
    throw new CsvError(file, 1, `expected header "${SUMMARY_HEADER}"`);
  }
  const out: SummaryRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const ln = i + 1;
    const f = lines[i].split(",");
    if (f.length !== 11) {
      throw new CsvError(file, ln, `expected 11 fields, got ${f.length}`);
    }
    out.push({
      func: f[0],
      L: f[1],
      n: intField(file, ln, "n", f[2]),
      algo: f[3],
      runs: intField(file, ln, "runs", f[4]),
      success: intField(file, ln, "success", f[5]),
      itsMedian: optInt(file, ln, "its_median", f[6]),
      itsMean: optFloat(file, ln, "its_mean", f[7]),
      itsStd: optFloat(file, ln, "its_std", f[8]),
      medianSeed: optInt(file, ln, "median_seed", f[9]),
      evalsMean: optFloat(file, ln, "evals_mean", f[10]),
    });
  }
  return out;
}

export function parseTrajectory(text: string, file: string): TrajectoryPoint[] {
  const lines = rows(text);
  if (lines.length === 0 || lines[0] !== TRAJECTORY_HEADER) {
    throw new CsvError(file, 1, `expected header "${TRAJECTORY_HEADER}"`);
  }
  const out: TrajectoryPoint[] = [];
  let prev = -1;
  for (let i = 1; i < lines.length; i++) {
    const ln = i + 1;
    const f = lines[i].split(",");
    if (f.length !== 3) {
      throw new CsvError(file, ln, `expected 3 fields, got ${f.length}`);
    }
    const iter = intField(file, ln, "iter", f[0]);
    if (iter <= prev) {
      throw new CsvError(file, ln, `iterations must be strictly increasing (${prev} then ${iter})`);
    }
    prev = iter;
    out.push({
      iter,
      fval: floatField(file, ln, "fval", f[1]),
      sigma: floatField(file, ln, "sigma", f[2]),
    });
  }
  return out;
}
