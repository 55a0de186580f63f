#!/usr/bin/env node
/**
 * render_figs: sweep CSV -> SVG line figure.
 *
 *   render_figs --csv <path> --kind cop_vs_zeta|suc_vs_power --out <path> [--log-y] [--dump]
 *
 * --dump writes the plotted rows (header plus the selected data lines,
 * verbatim) to stdout instead of requiring --out; combinable with --out to
 * do both. Exit codes: 0 ok, 1 CSV contract violation (with a column
 * diff), 2 usage error, 3 I/O error.
 */

import * as fs from "fs";

import { ContractError, parseSweepCsv } from "./contract";
import { KINDS, renderSvg } from "./figure";

const USAGE =
  "usage: render_figs --csv <path> --kind cop_vs_zeta|suc_vs_power --out <path> [--log-y] [--dump]";

interface Args {
  csv: string;
  kind: string;
  out?: string;
  logY: boolean;
  dump: boolean;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Args {
  let csv: string | undefined;
  let kind: string | undefined;
  let out: string | undefined;
  let logY = false;
  let dump = false;
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    switch (flag) {
      case "--csv":
      case "--kind":
      case "--out": {
        const value = argv[++i];
        if (value === undefined) throw new UsageError(`${flag} needs a value`);
        if (flag === "--csv") csv = value;
        else if (flag === "--kind") kind = value;
        else out = value;
        break;
      }
      case "--log-y":
        logY = true;
        break;
      case "--dump":
        dump = true;
        break;
      default:
        throw new UsageError(`unknown argument '${flag}'`);
    }
  }
  if (!csv) throw new UsageError("--csv is required");
  if (!kind) throw new UsageError("--kind is required");
  if (!(kind in KINDS)) {
    throw new UsageError(`unknown kind '${kind}'; expected ${Object.keys(KINDS).join("|")}`);
  }
  if (!out && !dump) throw new UsageError("--out is required unless --dump is given");
  return { csv, kind, out, logY, dump };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      process.stderr.write(`render_figs: ${err.message}\n${USAGE}\n`);
      return 2;
    }
    throw err;
  }

  let text: string;
  try {
    text = fs.readFileSync(args.csv, "utf-8");
  } catch (err) {
    process.stderr.write(`render_figs: cannot read ${args.csv}: ${(err as Error).message}\n`);
    return 3;
  }

  try {
    const table = parseSweepCsv(text);
    const kind = KINDS[args.kind];
    if (args.out) {
      const svg = renderSvg(table.rows, kind, args.logY);
      try {
        fs.writeFileSync(args.out, svg);
      } catch (err) {
        process.stderr.write(`render_figs: cannot write ${args.out}: ${(err as Error).message}\n`);
        return 3;
      }
    } else {
      // validate the selection even when only dumping
      renderSvg(table.rows, kind, args.logY);
    }
    if (args.dump) {
      const lines = [table.header, ...table.rows.map((r) => r.raw)];
      process.stdout.write(lines.join("\n") + "\n");
    }
    return 0;
  } catch (err) {
    if (err instanceof ContractError) {
      const lines = [err.message, ...err.diff];
      process.stderr.write("render_figs: " + lines.join("\n") + "\n");
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
