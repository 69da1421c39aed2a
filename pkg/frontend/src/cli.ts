#!/usr/bin/env node
/**
 * Render one figure from simulator CSV output.
 *
 * Usage:
 *   ottosim-figures <A_vs_m|firstlaw|eta|heats> -o out.svg [--label NAME] cycles.csv ...
 *   ottosim-figures regime -o out.svg regime.csv
 *
 * Ledger figures accept one cycles.csv per series; --label before a path
 * names that series (defaults to the file's parent directory name).
 * Exits 1 on schema mismatches or malformed input; never writes a partial
 * output file.
 */
import { readFileSync, writeFileSync } from "node:fs";
import { basename, dirname } from "node:path";
import { CsvSchemaError, parseCycleCsv, parseRegimeCsv } from "./csv.js";
import {
  LEDGER_FIGURES,
  LedgerFigure,
  Series,
  ledgerFigure,
  regimeFigure,
} from "./figures.js";

interface Args {
  figure: string;
  output: string;
  inputs: { label: string | null; path: string }[];
}

function usage(): never {
  process.stderr.write(
    `usage: ottosim-figures <${LEDGER_FIGURES.join("|")}|regime> ` +
    `-o out.svg [--label NAME] input.csv ...\n`,
  );
  process.exit(1);
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0) usage();
  const figure = argv[0]!;
  let output: string | null = null;
  let pendingLabel: string | null = null;
  const inputs: Args["inputs"] = [];
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "-o" || arg === "--output") {
      output = argv[++i] ?? usage();
    } else if (arg === "--label") {
      pendingLabel = argv[++i] ?? usage();
    } else if (arg.startsWith("-")) {
      usage();
    } else {
      inputs.push({ label: pendingLabel, path: arg });
      pendingLabel = null;
    }
  }
  if (output === null || inputs.length === 0) usage();
  return { figure, output, inputs };
}

function defaultLabel(path: string): string {
  const dir = basename(dirname(path));
  return dir === "." || dir === "" ? basename(path) : dir;
}

export function render(args: Args): string {
  if ((LEDGER_FIGURES as readonly string[]).includes(args.figure)) {
    const series: Series[] = args.inputs.map(({ label, path }) => ({
      label: label ?? defaultLabel(path),
      records: parseCycleCsv(readFileSync(path, "utf8"), path),
    }));
    return ledgerFigure(args.figure as LedgerFigure, series);
  }
  if (args.figure === "regime") {
    if (args.inputs.length !== 1) {
      throw new Error("regime takes exactly one regime.csv");
    }
    const { path } = args.inputs[0]!;
    return regimeFigure(parseRegimeCsv(readFileSync(path, "utf8"), path));
  }
  throw new Error(`unknown figure "${args.figure}"`);
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    const svg = render(args);
    writeFileSync(args.output, svg);
  } catch (err) {
    if (err instanceof CsvSchemaError || err instanceof Error) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
