#!/usr/bin/env node
/* Command line: plotgen --in <dir> --func <f> [--L <v>] --n <d> [--per-dim] --out <file.svg> */

import * as fs from "node:fs";
import { parseArgs } from "node:util";
import { formatL } from "./scale";
import { renderCell, FigureSpec } from "./render";

const USAGE =
  "usage: plotgen --in <dir> --func <name> [--L <value>] --n <dim> [--per-dim] --out <file.svg>";

export function main(argv: string[]): number {
  let values: Record<string, string | boolean | undefined>;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        in: { type: "string" },
        func: { type: "string" },
        L: { type: "string" },
        n: { type: "string" },
        "per-dim": { type: "boolean" },
        out: { type: "string" },
      },
      strict: true,
      allowPositionals: false,
    }));
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n${USAGE}\n`);
    return 2;
  }
  const inDir = values["in"] as string | undefined;
  const func = values["func"] as string | undefined;
  const nRaw = values["n"] as string | undefined;
  const out = values["out"] as string | undefined;
  if (!inDir || !func || !nRaw || !out) {
    process.stderr.write(`missing required option\n${USAGE}\n`);
    return 2;
  }
  const n = Number(nRaw);
  if (!Number.isInteger(n) || n < 1) {
    process.stderr.write(`--n must be a positive integer, got "${nRaw}"\n`);
    return 2;
  }
  if (!out.endsWith(".svg")) {
    process.stderr.write(`only SVG output is supported, got "${out}"\n`);
    return 2;
  }
  let lToken: string;
  try {
    lToken = formatL(values["L"] as string | undefined);
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n`);
    return 2;
  }
  const spec: FigureSpec = {
    inDir,
    func,
    lToken,
    n,
    perDim: Boolean(values["per-dim"]),
  };
  let svg: string;
  try {
    svg = renderCell(spec);
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n`);
    return 1;
  }
  try {
    fs.writeFileSync(out, svg);
  } catch (e) {
    process.stderr.write(`cannot write ${out}: ${(e as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`wrote ${out}\n`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
